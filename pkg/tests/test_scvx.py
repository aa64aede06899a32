import itertools
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from girylab import scvx
from girylab.errors import BoundExceeded, OutOfCarrier, PartialSequence, UnknownSpace
from girylab.grid import grid_dists, random_dist
from girylab.measure import CountableDist, convex_combine, dirac, from_weights, join, DistOverDist
from girylab.scvx import (
    IDENTITY,
    INF,
    AffineMap,
    Budget,
    Carrier,
    Geometric,
    SeqMap,
    SpaceHandle,
    affine_sum,
    builtin_space,
)

HALF = from_weights([(0, F(1, 2)), (1, F(1, 2))])
SMALL = Budget(random_cases=50)


# ---- builtin spaces ------------------------------------------------------------


def test_builtin_structure_examples():
    assert affine_sum(builtin_space("N_min"), from_weights([(2, F(1, 2)), (5, F(1, 2))]), IDENTITY) == 2
    assert affine_sum(builtin_space("two_min"), HALF, (0, 1)) == 0
    assert affine_sum(builtin_space("unit_interval"), HALF, (F(0), F(1))) == F(1, 2)


def test_rinf_divergent_sum_is_infinite():
    p, r = scvx.divergent_instance()
    # oracle: every term p_i r_i equals 1, so partial sums are unbounded
    assert all(p.weight(i) * r(i) == 1 for i in range(40))
    assert p.weight(0) == F(1, 2) and r(0) == 2
    assert affine_sum(builtin_space("r_inf"), p, r) is INF


def test_rinf_convergent_geometric_tail():
    p = CountableDist.geometric(0, F(1, 2))
    # sum 2^-(i+1) * (1/2)^i = (1/2) / (1 - 1/4) = 2/3
    assert affine_sum(builtin_space("r_inf"), p, SeqMap({}, Geometric(1, F(1, 2)))) == F(2, 3)


def test_affine_sum_examples():
    assert affine_sum(builtin_space("N_min"), dirac(3), IDENTITY) == 3
    assert affine_sum(builtin_space("delta_N"), HALF, dirac) == HALF
    assert affine_sum(builtin_space("coeq3"), HALF, ("0", "1")) == "u"


def test_affine_sum_tail_min_space():
    p = CountableDist.geometric(4, F(1, 2))
    assert affine_sum(builtin_space("N_min"), p, IDENTITY) == 4


def test_affine_sum_errors():
    with pytest.raises(PartialSequence):
        affine_sum(builtin_space("N_min"), HALF, [0])
    with pytest.raises(OutOfCarrier):
        affine_sum(builtin_space("two_min"), HALF, (0, 5))


def test_space_lookup():
    assert builtin_space("n_min(3)").name == builtin_space("n_min", 3).name
    for bad in ("nosuch", "n_min", "N_min(3)", "two min"):
        with pytest.raises(UnknownSpace):
            builtin_space(bad)


# ---- axioms ------------------------------------------------------------------


def test_axiom1_examples():
    assert scvx.check_axiom1(builtin_space("N_min"), IDENTITY, 5).ok
    r = scvx.check_axiom1(builtin_space("unit_interval"), (F(1, 3), F(2, 3)), 1)
    assert r.ok and r.detail["value"] == F(2, 3)


def test_axiom1_detects_broken_structure():
    carrier = Carrier("N", lambda x: isinstance(x, int), (0, 1, 2), lambda rng: rng.randint(0, 3))
    broken = SpaceHandle("broken", "discrete", carrier, lambda terms: 0)
    r = scvx.check_axiom1(broken, IDENTITY, 2)
    assert not r.ok and r.witness["j"] == 2


def test_axiom2_examples():
    r = scvx.check_axiom2(builtin_space("N_min"), HALF, {0: dirac(1), 1: dirac(2)}, IDENTITY)
    assert r.ok and r.detail["lhs"] == 1 == r.detail["rhs"]
    assert scvx.check_axiom2(builtin_space("unit_interval"), dirac(0), {0: HALF}, (F(1, 3), F(1))).ok


@given(st.integers(0, 10**6))
def test_axiom2_delta_N_random(seed):
    rng = random.Random(seed)
    p = random_dist(rng, 4, 3)
    fam = {j: random_dist(rng) for j in p.support}
    r = scvx.check_axiom2(builtin_space("delta_N"), p, fam, dirac)
    assert r.ok
    # oracle: both sides equal the flattened measure
    assert r.detail["lhs"] == join(DistOverDist([(fam[j], w) for j, w in p.items()]))


@pytest.mark.parametrize("space", scvx.all_builtin_spaces(), ids=lambda s: s.name)
def test_axioms_on_grid(space):
    rng = random.Random(1)
    seqs = [tuple(space.carrier.draw(rng) for _ in range(8)) for _ in range(3)]
    limit = len(space.carrier.samples) if space.name.startswith(("n_min", "delta_n")) else 8
    for seq in seqs:
        for j in range(min(limit, 8)):
            assert scvx.check_axiom1(space, seq, j).ok
    grid = grid_dists(3)
    fam = {j: grid[(5 * j + 7) % len(grid)] for j in range(3)}
    for p in grid:
        for seq in seqs:
            assert scvx.check_axiom2(space, p, fam, seq[:3]).ok


# ---- transforms --------------------------------------------------------------


def test_transform_compose_examples():
    U = builtin_space("unit_interval")
    a = SeqMap({0: F(0), 1: F(1)})
    b = scvx.transform_compose({0: dirac(0), 1: dirac(1)}, a, U)
    assert b.prefix(2) == a.prefix(2)
    b = scvx.transform_compose({i: dirac(0) for i in range(4)}, a, U)
    assert set(b.prefix(4)) == {F(0)}
    b = scvx.transform_compose({0: HALF}, a, U)
    assert b(0) == F(1, 2)


def test_transform_compose_pointwise():
    N = builtin_space("N_min")
    Q = {i: grid_dists(4)[i * 7 % 51] for i in range(4)}
    a = (3, 1, 2, 0)
    b = scvx.transform_compose(Q, a, N)
    for p in grid_dists(4):
        assert affine_sum(N, convex_combine(p, Q), a) == affine_sum(N, p, b)


# ---- affineness ----------------------------------------------------------------


def test_swap_is_affine():
    assert scvx.is_affine(scvx.swap_map(), SMALL).ok


def test_parity_is_not_affine():
    N = builtin_space("N_min")
    m = AffineMap(N, N, lambda i: i % 2, "parity")
    r = scvx.is_affine(m, SMALL)
    assert not r.ok
    w = r.witness
    assert w["p"] == from_weights([(1, F(1, 2)), (2, F(1, 2))])
    # oracle: min of images {1, 0} is 0 but image of min 1 is 1
    assert (w["lhs"], w["rhs"]) == (1, 0)


def test_square_is_affine():
    N = builtin_space("N_min")
    assert scvx.is_affine(AffineMap(N, N, lambda i: i * i, "square"), SMALL).ok


@pytest.mark.parametrize("space", scvx.all_builtin_spaces(), ids=lambda s: s.name)
def test_identity_is_affine(space):
    assert scvx.is_affine(AffineMap(space, space, lambda x: x, "id"), Budget(max_sequences=4, random_cases=20)).ok


def test_iso_maps():
    assert scvx.iso_delta2_interval("fwd", from_weights([(0, F(2, 3)), (1, F(1, 3))])) == F(1, 3)
    assert scvx.iso_delta2_interval("bwd", F(0)) == dirac(0)
    with pytest.raises(OutOfCarrier):
        scvx.iso_delta2_interval("bwd", F(3, 2))
    with pytest.raises(OutOfCarrier):
        scvx.iso_delta2_interval("fwd", dirac(2))
    assert scvx.is_affine(scvx.delta2_to_interval(), SMALL).ok
    assert scvx.is_affine(scvx.interval_to_delta2(), SMALL).ok
    for r in (F(0), F(1, 3), F(1, 2), F(1)):
        assert scvx.iso_delta2_interval("fwd", scvx.iso_delta2_interval("bwd", r)) == r


def test_j_map():
    assert scvx.rinf_j_map(F(5, 2)) == 1
    assert scvx.rinf_j_map(INF) == 0
    assert scvx.is_affine(scvx.j_map(), SMALL).ok


def test_j_on_divergent_instance_fails():
    # j of the infinite sum is 0, while every r_i is finite so the sum of j(r_i) is 1
    r = scvx.check_j_divergent()
    assert not r.ok
    assert (r.detail["lhs"], r.detail["rhs"]) == (0, 1)


# ---- monotone maps -------------------------------------------------------------


def subsets(n):
    return [S for k in range(1, n + 1) for S in itertools.combinations(range(n), k)]


def test_monotone_examples():
    f = (0, 0, 2)
    assert scvx.monotone_oracle(f)
    assert len(subsets(3)) == 7 and all(f[min(S)] == min(f[i] for i in S) for S in subsets(3))
    assert scvx.subset_min_witness(f) is None
    g = (1, 0)
    assert not scvx.monotone_oracle(g)
    assert scvx.subset_min_witness(g) == (0, 1)
    r = scvx.affine_iff_monotone(1)
    assert r.ok and r.detail["functions"] == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_affine_iff_monotone(n):
    r = scvx.affine_iff_monotone(n)
    assert r.ok
    assert r.detail["functions"] == n**n
    assert r.detail["monotone"] == math.comb(2 * n - 1, n)


def test_bound():
    with pytest.raises(BoundExceeded):
        scvx.affine_iff_monotone(6)


def test_monotone_maps_count():
    assert len(list(scvx.monotone_maps(5))) == 126


# ---- classification --------------------------------------------------------------


def test_classify_examples():
    for name, tag in (("two_min", "discrete"), ("unit_interval", "geometric"), ("r_inf", "mixed")):
        r = scvx.classify_probe(builtin_space(name))
        assert r.ok and r.detail["inferred"] == tag


@pytest.mark.parametrize("space", scvx.all_builtin_spaces(), ids=lambda s: s.name)
def test_classify_all(space):
    assert scvx.classify_probe(space).ok


def test_dg_constancy():
    two, U, N, D = (builtin_space(n) for n in ("two_min", "unit_interval", "N_min", "delta_N"))
    assert scvx.dg_constancy_check(AffineMap(two, U, lambda x: F(1, 3), "const"), SMALL).ok
    inclusion = AffineMap(two, U, F, "incl")
    aff = scvx.is_affine(inclusion, SMALL)
    assert not aff.ok
    assert aff.witness["p"] == HALF and (aff.witness["lhs"], aff.witness["rhs"]) == (0, F(1, 2))
    assert scvx.dg_constancy_check(inclusion, SMALL).ok
    assert scvx.dg_constancy_check(AffineMap(N, D, lambda x: dirac(2), "const"), SMALL).ok


def test_epi_cancellation():
    assert scvx.check_epi_cancellation(lambda i: i * 2, lambda i: i + i, 10).ok
    r = scvx.check_epi_cancellation(lambda i: i, lambda i: 0, 5)
    assert r.ok and r.detail["premise"] is False
