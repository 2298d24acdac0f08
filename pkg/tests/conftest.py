import sys
from pathlib import Path

from hypothesis import settings, strategies as st

from multirel.finsets import Base, Pow
from multirel.relcore import Relation

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

X1, X2 = Base("X", 1), Base("X", 2)
Y1, Y2, Y3 = Base("Y", 1), Base("Y", 2), Base("Y", 3)
PY1, PY2, PY3 = Pow(Y1), Pow(Y2), Pow(Y3)


def relations(src, tgt):
    bits = src.size * tgt.size
    return st.integers(0, (1 << bits) - 1).map(lambda c: Relation.from_code(src, tgt, c))


def multirelations(src=X2, inner=Y2):
    return relations(src, Pow(inner))
