"""
Checking laws and searching for counterexamples
===============================================

Law files declare finite base sets and typed variables, then state formulas.
The engine enumerates every assignment in a fixed order, so the first
counterexample it reports is the canonical one.
"""

from multirel.lawlab import check, find, load

source = """
set X = 1
set Y = 2
var R, S : X <-> P(Y)

law (R icup S)^i = R^i icap S^i
law R icup S = S icup R
law R icup R = R
"""

for law in load(source).laws:
    report = check(law)
    print(report.to_text(timing=False))
    print()

# Witness search uses existential laws.
witness = find(load(source + "law exists R . R icap R != R").laws[-1])
print(witness.to_text(timing=False))
print()

# Spaces beyond the exhaustive cap are sampled with a seeded generator.  A
# sampled pass is evidence, never a proof.
big = load("""
set X = 2
set Y = 2
var R, S, T : X <-> P(Y)
law R icup (S icup T) = (R icup S) icup T
""").laws[0]
report = check(big, mode="sample", samples=2000, seed=7)
print(report.to_text(timing=False))

# The same seed gives the same report, whatever the number of workers.
again = check(big, mode="sample", samples=2000, seed=7, jobs=2)
print("\nidentical with two workers:", again.to_json(timing=False) == report.to_json(timing=False))
