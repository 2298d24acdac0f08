"""
Closures, preorders and quotients
=================================

Up-, down- and convex-closure saturate each outcome set along inclusion.
The Hoare, Smyth and Egli-Milner preorders compare multirelations by their
closures; quotienting by them leaves the closed multirelations.
"""

from multirel import Base, Pow
from multirel import closures, demos, mrcore, relcore
from multirel.notation import parse_relation

X, Y = Base("X", 1), Base("Y", 2)
R = parse_relation("{(a,{a}),(a,{b})}", X, Pow(Y))

print("R        =", R)
print("up(R)    =", closures.up(R))
print("down(R)  =", closures.down(R))
print("conv(R)  =", closures.convex(R))

# The closures are the same whether computed directly or through composition
# with the inclusion order.
assert closures.closure("up", R, cross_check=True) == closures.up(R)

# The preorders are not antisymmetric.  Two different multirelations can be
# equivalent under both Hoare and Smyth at once.
print()
print(demos.run_demo("example-5-11").to_text())

# The empty relation and the unit sit in opposite order under Hoare and Smyth.
zero, one = relcore.empty(X, Pow(X)), mrcore.unit(X)
print()
print("0 <=H 1:", closures.preorder_leq("hoare", zero, one),
      "  1 <=H 0:", closures.preorder_leq("hoare", one, zero))
print("1 <=S 0:", closures.preorder_leq("smyth", one, zero),
      "  0 <=S 1:", closures.preorder_leq("smyth", zero, one))

# Quotients by each preorder: one class per closed multirelation.
print()
for kind in ("hoare", "smyth", "egli_milner"):
    q = closures.quotient(kind, X, Y)
    checks = q.verify()
    print(f"{kind:12s} {len(q.classes)} classes, "
          f"{sum(c['pass'] for c in checks)}/{len(checks)} structure checks pass")

# On univalent multirelations the Hoare preorder is antisymmetric.
res = closures.class_special_order("outer_univ", Base("X", 2), Y)
print("\nouter univalent class at |X|=2:", res["members"], "members, pass =", res["pass"])

# Every multirelation splits into deterministic pieces below it in the Hoare
# order, one family per univalent part.
d = closures.decompose_full(R, variant=True)
print("\nR is rebuilt from its pieces:", d.reconstructed == R)
for part, family in d.family:
    print("  part", part, "->", ", ".join(str(t) for t in family))
