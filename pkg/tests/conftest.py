import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from tripos.finset import FinMap, FinSetObj

settings.register_profile("repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def sets(max_size=4, min_size=0):
    return st.integers(min_size, max_size).map(FinSetObj)


@st.composite
def maps(draw, dom=None, cod=None, max_size=4):
    X = dom if dom is not None else draw(sets(max_size))
    Y = cod if cod is not None else draw(sets(max_size, min_size=1 if X.size else 0))
    table = draw(st.lists(st.integers(0, Y.size - 1), min_size=X.size, max_size=X.size)) if Y.size else []
    return FinMap(X, Y, tuple(table))


@st.composite
def cospans(draw, max_size=3):
    Z = draw(sets(max_size, 1))
    f = draw(maps(cod=Z, max_size=max_size))
    g = draw(maps(cod=Z, max_size=max_size))
    return f, g
