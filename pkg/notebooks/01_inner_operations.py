"""
Multirelations and their inner operations
=========================================

A multirelation R : X <-> P(Y) relates each x to sets of outcomes.  The outer
choice is which pair to use; the inner choice picks an element of the set.
"""

from multirel import Base, Pow
from multirel import mrcore, relcore
from multirel.notation import parse_relation

X, Y = Base("X", 1), Base("Y", 2)
R = parse_relation("{(a,{a}),(a,{b})}", X, Pow(Y))
print("R          =", R)

# Inner union combines one set from each side, pair by pair.  It is not
# idempotent: R icup R picks up the union {a,b} as a new outcome.
print("R icup R   =", mrcore.inner_union(R, R))
print("R icap R   =", mrcore.inner_intersection(R, R))

# Inner complement flips every outcome set; the dual conjugates by it.
print("R^i        =", mrcore.inner_complement(R))
print("R^d        =", mrcore.dual(R))

# The units of the two inner operations.
print("unit of icup:", mrcore.inner_unit_u(X, Y))
print("unit of icap:", mrcore.inner_unit_i(X, Y))

# Peleg composition: each outcome set is replaced by a choice of one S-set per
# element, and the chosen sets are united.
S = parse_relation("{(a,{a}),(a,{b}),(b,{a,b})}", Y, Pow(Y))
print("R * S      =", mrcore.peleg_compose(R, S))
print("one * R    =", mrcore.peleg_compose(mrcore.unit(X), R))

# Peleg composition associates in one direction only.  Search all triples at
# |X| = 2 for the first one where the other direction fails.
X2 = Base("X", 2)
rels = list(relcore.all_relations(X2, Pow(X2)))
found = None
for a in rels:
    for b in rels:
        ab = mrcore.peleg_compose(a, b)
        for c in rels:
            if mrcore.peleg_compose(ab, c) != mrcore.peleg_compose(a, mrcore.peleg_compose(b, c)):
                found = (a, b, c)
                break
        if found:
            break
    if found:
        break
a, b, c = found
print("\nPeleg composition is not associative:")
print("  R =", a, " S =", b, " T =", c)
print("  (R*S)*T =", mrcore.peleg_compose(mrcore.peleg_compose(a, b), c))
print("  R*(S*T) =", mrcore.peleg_compose(a, mrcore.peleg_compose(b, c)))
