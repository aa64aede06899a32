from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from girylab.amplitudes import UNIT_PHASES, I, AmpDist, CRat, amp_combine, amp_min_support, from_amplitudes, l2_to_l1
from girylab.errors import DuplicateIndex, NormNotOne, PartialFamily
from girylab.measure import NATURALS, convex_combine, dirac, ev, from_weights
from girylab.suites import amplitude_cases

THREE_FOUR = from_amplitudes([(0, F(3, 5)), (1, F(4, 5))])


def test_from_amplitudes_examples():
    p = from_amplitudes([(0, F(3, 5)), (1, CRat(0, F(4, 5)))])
    assert sum(z.abs2() for _, z in p.entries) == F(9, 25) + F(16, 25) == 1
    assert from_amplitudes([(0, 1)]).support == (0,)
    with pytest.raises(NormNotOne):
        from_amplitudes([(0, F(1, 2)), (1, F(1, 2))])
    with pytest.raises(DuplicateIndex):
        from_amplitudes([(0, F(3, 5)), (0, F(4, 5))])


def test_unit_phases_have_modulus_one():
    assert all(u.abs2() == 1 for u in UNIT_PHASES)
    assert (I * I) == CRat(-1)


def test_amp_combine_examples():
    fam = {0: dirac(0), 1: dirac(1)}
    assert amp_combine(THREE_FOUR, fam, {1}) == F(4, 5) ** 2 == F(16, 25)
    q = from_weights([(2, F(1, 3)), (4, F(2, 3))])
    assert amp_combine(from_amplitudes([(0, 1)]), {0: q}, {4}) == ev({4}, q)
    assert amp_combine(THREE_FOUR, {0: q, 1: dirac(9)}, NATURALS) == 1
    with pytest.raises(PartialFamily):
        amp_combine(THREE_FOUR, {0: q}, {0})


def test_amp_min_support_examples():
    assert amp_min_support(from_amplitudes([(2, I)])) == 2
    assert amp_min_support(from_amplitudes([(0, F(3, 5)), (4, F(4, 5))])) == 0
    assert amp_min_support(from_amplitudes([(7, -1)])) == 7


def test_l2_to_l1_examples():
    assert l2_to_l1(THREE_FOUR) == from_weights([(0, F(9, 25)), (1, F(16, 25))])
    assert l2_to_l1(from_amplitudes([(5, 1)])) == dirac(5)


cases = st.sampled_from(amplitude_cases())


@given(cases, st.sampled_from(UNIT_PHASES), st.integers(0, 5))
def test_phase_invariance(p, u, k):
    i = p.support[k % len(p.support)]
    assert l2_to_l1(p.phase(i, u)) == l2_to_l1(p)


@given(cases, st.sets(st.integers(0, 6)))
def test_combine_factorization(p, U):
    fam = {i: from_weights([(i, F(1, 2)), (i + 1, F(1, 2))]) for i in p.support}
    assert amp_combine(p, fam, U) == ev(U, convex_combine(l2_to_l1(p), fam))


def test_amp_dist_rejects_zero_and_order():
    with pytest.raises(ValueError):
        AmpDist([(0, 1), (1, 0)])
    with pytest.raises(DuplicateIndex):
        AmpDist([(1, F(3, 5)), (0, F(4, 5))])
