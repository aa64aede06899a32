from collections import defaultdict
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from girylab.errors import (
    DuplicateIndex,
    EnumerationCapExceeded,
    MassNotOne,
    NegativeWeight,
    PartialFamily,
    PartialMap,
    TailUnsupported,
    UnsupportedSetShape,
)
from girylab.grid import grid_dists
from girylab.measure import (
    NATURALS,
    CarrierDist,
    Cofinite,
    CountableDist,
    DistOverDist,
    GeometricTail,
    convex_combine,
    dirac,
    down,
    ev,
    from_weights,
    join,
    min_support,
    pushforward,
)


@st.composite
def dists(draw, max_index=8, max_size=5):
    idx = draw(st.lists(st.integers(0, max_index), min_size=1, max_size=max_size, unique=True))
    raw = draw(st.lists(st.integers(1, 9), min_size=len(idx), max_size=len(idx)))
    total = sum(raw)
    return CountableDist(sorted((i, F(r, total)) for i, r in zip(idx, raw)))


def oracle_join(pairs):
    """Direct double summation over every (j, k)."""
    out = defaultdict(F)
    for p, q in pairs:
        for k, w in p.items():
            out[k] += q * w
    return {k: w for k, w in out.items() if w}


# ---- construction ----------------------------------------------------------


def test_dirac():
    assert dirac(0).items() == ((0, 1),)
    assert dirac(7).items() == ((7, 1),)


def test_from_weights_examples():
    p = from_weights([(2, F(1, 2)), (5, F(1, 2))])
    assert p.items() == ((2, F(1, 2)), (5, F(1, 2)))
    with pytest.raises(MassNotOne):
        from_weights([(0, F(1, 3)), (1, F(1, 3))])
    assert from_weights([(4, 0), (9, 1)]) == dirac(9)


def test_from_weights_errors():
    with pytest.raises(DuplicateIndex):
        from_weights([(1, F(1, 2)), (1, F(1, 2))])
    with pytest.raises(NegativeWeight):
        from_weights([(0, F(-1, 2)), (1, F(3, 2))])


def test_floats_rejected():
    with pytest.raises(TypeError):
        from_weights([(0, 0.5), (1, 0.5)])


def test_from_weights_sorts():
    assert from_weights([(5, F(1, 2)), (2, F(1, 2))]).support == (2, 5)


def test_geometric_tail_weights():
    p = CountableDist.geometric(0, F(1, 2))
    assert [p.weight(i) for i in range(4)] == [F(1, 2), F(1, 4), F(1, 8), F(1, 16)]
    assert p.tail_mass == 1
    with pytest.raises(ValueError):
        GeometricTail(0, F(1))


def test_tail_with_prefix():
    p = CountableDist.geometric(4, F(1, 3), prefix=[(1, F(1, 2))])
    assert p.weight(1) == F(1, 2)
    assert p.weight(4) == F(1, 2) * F(2, 3)
    assert p.mass_beyond(4) + p.weight(4) + p.weight(1) == 1


# ---- ev --------------------------------------------------------------------


def test_ev_examples():
    p = from_weights([(2, F(1, 2)), (5, F(1, 2))])
    assert ev({0, 1}, p) == 0
    assert ev(down(5), p) == F(1, 2)
    assert ev(NATURALS, p) == 1


def test_ev_on_tail():
    p = CountableDist.geometric(0, F(1, 2))
    assert ev(NATURALS, p) == 1
    assert ev({0}, p) == F(1, 2)
    assert ev(Cofinite(frozenset({0})), p) == F(1, 2)
    with pytest.raises(UnsupportedSetShape):
        ev(lambda i: i % 2 == 0, p)


@given(dists(), st.sets(st.integers(0, 8)))
def test_ev_complement_additive(p, W):
    assert ev(W, p) + ev(Cofinite(frozenset(W)), p) == 1


# ---- min_support -------------------------------------------------------------


def test_min_support_examples():
    assert min_support(from_weights([(2, F(1, 2)), (5, F(1, 2))])) == 2
    assert min_support(dirac(9)) == 9
    assert min_support(from_weights([(3, F(1, 4)), (4, F(3, 4))])) == 3


def test_min_support_tail():
    assert min_support(CountableDist.geometric(4, F(1, 2))) == 4
    with pytest.raises(EnumerationCapExceeded):
        min_support(CountableDist.geometric(50, F(1, 2)), cap=10)


@given(dists())
def test_min_support_oracle(p):
    assert min_support(p) == min(i for i, w in p.items() if w > 0)


# ---- pushforward -------------------------------------------------------------


def test_pushforward_examples():
    half = from_weights([(0, F(1, 2)), (1, F(1, 2))])
    assert pushforward(lambda i: i + 1, half) == from_weights([(1, F(1, 2)), (2, F(1, 2))])
    assert pushforward(lambda i: 0, half) == dirac(0)
    p = from_weights([(1, F(1, 3)), (2, F(2, 3))])
    assert pushforward({1: 3, 2: 2, 3: 1}, p) == from_weights([(2, F(2, 3)), (3, F(1, 3))])


def test_pushforward_errors():
    with pytest.raises(PartialMap):
        pushforward({0: 1}, from_weights([(0, F(1, 2)), (1, F(1, 2))]))
    with pytest.raises(TailUnsupported):
        pushforward(lambda i: i, CountableDist.geometric(0, F(1, 2)))


@given(dists(), st.lists(st.integers(0, 5), min_size=9, max_size=9), st.lists(st.integers(0, 5), min_size=6, max_size=6))
def test_pushforward_functorial(p, f, g):
    assert pushforward(lambda i: g[f[i]], p) == pushforward(g.__getitem__, pushforward(f.__getitem__, p))


# ---- join / convex_combine ---------------------------------------------------


def test_join_examples():
    Q = DistOverDist([(dirac(0), F(1, 2)), (from_weights([(1, F(1, 2)), (2, F(1, 2))]), F(1, 2))])
    assert join(Q) == from_weights([(0, F(1, 2)), (1, F(1, 4)), (2, F(1, 4))])
    p = from_weights([(3, F(1, 4)), (4, F(3, 4))])
    assert join(DistOverDist([(p, 1)])) == p
    assert join(DistOverDist([(dirac(3), F(1, 3)), (dirac(3), F(2, 3))])) == dirac(3)


def test_join_of_tails():
    Q = DistOverDist([(CountableDist.geometric(0, F(1, 2)), F(1, 2)), (CountableDist.geometric(0, F(1, 3)), F(1, 2))])
    with pytest.raises(TailUnsupported):
        join(Q)
    same = CountableDist.geometric(0, F(1, 2))
    assert join(DistOverDist([(same, 1)])) == same


@settings(max_examples=200)
@given(st.lists(st.tuples(dists(), st.integers(1, 6)), min_size=1, max_size=4))
def test_join_matches_double_sum(raw):
    total = sum(r for _, r in raw)
    pairs = [(p, F(r, total)) for p, r in raw]
    assert dict(join(DistOverDist(pairs)).items()) == oracle_join(pairs)


def test_convex_combine_examples():
    q = from_weights([(1, F(1, 3)), (6, F(2, 3))])
    assert convex_combine(dirac(4), {4: q}) == q
    half = from_weights([(0, F(1, 2)), (1, F(1, 2))])
    assert convex_combine(half, dirac) == half
    assert convex_combine(half, {0: half, 1: dirac(2)}) == from_weights([(0, F(1, 4)), (1, F(1, 4)), (2, F(1, 2))])
    with pytest.raises(PartialFamily):
        convex_combine(half, {0: half})


@given(dists(max_index=4), st.lists(dists(), min_size=5, max_size=5))
def test_convex_combine_is_join(p, fam):
    Q = DistOverDist([(fam[i], w) for i, w in p.items()])
    assert convex_combine(p, fam.__getitem__) == join(Q)


def test_unit_laws_on_grid():
    for p in grid_dists():
        assert join(CarrierDist.dirac(p)) == p
        assert join(DistOverDist([(dirac(i), w) for i, w in p.items()])) == p


def test_grid_size():
    # 4 weights on the grid of denominators up to 4: sized by exhaustive count
    assert len(grid_dists(4, 4)) == 51


def test_carrier_dist_merges_duplicates():
    P = CarrierDist([("a", F(1, 4)), ("a", F(1, 4)), ("b", F(1, 2))])
    assert P.weight("a") == F(1, 2)
    with pytest.raises(MassNotOne):
        CarrierDist([("a", F(1, 2))])
