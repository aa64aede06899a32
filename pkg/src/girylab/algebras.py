"""Barycenter maps as executable algebras and their law checkers."""

from __future__ import annotations

import re
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

from .errors import NotAffine, NotPermutation, OutOfCarrier, UnknownAlgebra
from .grid import carrier_grid, grid_dists
from .measure import (
    DEFAULT_CAP,
    ZERO,
    CarrierDist,
    CountableDist,
    dirac,
    join,
    min_support,
    pushforward,
)
from .report import CheckReport
from .scvx import (
    COEQ_POINTS,
    INF,
    SeqMap,
    SpaceHandle,
    builtin_space,
    is_rational,
    monotone_oracle,
    subset_min_witness,
    swap,
)

Dist = CountableDist | CarrierDist


def _items(p: Dist) -> list[tuple[Any, Fraction]]:
    return list(p.items())


# --------------------------------------------------------------------------
# the barycenter maps
# --------------------------------------------------------------------------


def eps_N(p: Dist, cap: int = DEFAULT_CAP) -> int:
    """Least index of positive weight."""
    if isinstance(p, CarrierDist):
        p = CountableDist.from_carrier(p)
    return min_support(p, cap)


def eps_n(k: int, p: Dist) -> int:
    items = _items(p)
    for x, _ in items:
        if not (isinstance(x, int) and 0 <= x < k):
            raise OutOfCarrier(f"{x!r} is not in {{0..{k - 1}}}")
    return min(x for x, _ in items)


def _two_weight(p: Dist) -> Fraction:
    for x, _ in _items(p):
        if x not in (0, 1) or isinstance(x, bool):
            raise OutOfCarrier(f"{x!r} is not in {{0,1}}")
    return p.weight(1)


def eps_two_min(p: Dist) -> int:
    """``(1-r) d0 + r d1`` goes to 1 only when ``r == 1``."""
    return 1 if _two_weight(p) == 1 else 0


def eps_two_max(p: Dist) -> int:
    """``(1-r) d0 + r d1`` goes to 1 as soon as ``r > 0``."""
    return 1 if _two_weight(p) > 0 else 0


def eps_interval(p: Dist) -> Fraction:
    total = ZERO
    for x, w in _items(p):
        if not (is_rational(x) and 0 <= x <= 1):
            raise OutOfCarrier(f"{x!r} is not in [0,1]")
        total += w * x
    return total


def eps_rinf(p: Dist) -> Any:
    """Expectation; infinity absorbs as soon as it carries positive weight."""
    total = ZERO
    for x, w in _items(p):
        if x is INF:
            return INF
        if not is_rational(x):
            raise OutOfCarrier(f"{x!r} is not an extended rational")
        total += w * x
    return total


def eps_coeq3(p: Dist) -> str:
    """Barycenter of the three-point coequalizer ``{0, u, 1}``.

    A measure on ``{0, 1}`` (integers) is read as ``(1-r) d0 + r d1``; a
    measure on the points ``"0"``, ``"u"``, ``"1"`` is averaged in place.
    """
    items = _items(p)
    if all(x in (0, 1) and isinstance(x, int) for x, _ in items):
        r = p.weight(1)
        return "0" if r == 0 else "1" if r == 1 else "u"
    for x, _ in items:
        if x not in COEQ_POINTS:
            raise OutOfCarrier(f"{x!r} is not a point of coeq3")
    if len(items) == 1:
        return items[0][0]
    return "u"


def eps_free(Q: CarrierDist) -> Dist:
    """The free algebra on measures over N is the monad multiplication."""
    return join(Q)


# --------------------------------------------------------------------------
# algebra handles
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AlgebraHandle:
    """A barycenter map ``G(A) -> A`` with the carrier points used to test it."""

    name: str
    space: SpaceHandle
    action: Callable[[Any], Any]
    points: tuple
    unit_samples: tuple

    def __call__(self, P: Any) -> Any:
        return self.action(P)

    def grid(self, max_den: int = 4) -> list[CarrierDist]:
        return carrier_grid(self.points, max_den)


_FREE_POINTS = (
    dirac(0),
    dirac(1),
    CountableDist([(0, Fraction(1, 2)), (1, Fraction(1, 2))]),
    CountableDist([(1, Fraction(1, 3)), (2, Fraction(2, 3))]),
)


def _free_action(Q: Any) -> CountableDist:
    if isinstance(Q, CountableDist):
        raise OutOfCarrier("the free algebra acts on measures over measures")
    return join(Q)


_ALG_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(\s*(\d+)\s*\))?\s*$")


@lru_cache(maxsize=None)
def builtin_algebra(name: str) -> AlgebraHandle:
    m = _ALG_RE.match(name)
    if not m:
        raise UnknownAlgebra(f"unknown algebra {name!r}")
    base, arg = m.group(1), m.group(2)
    third = (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1))
    if base == "eps_N" and arg is None:
        return AlgebraHandle("eps_N", builtin_space("N_min"), eps_N, (0, 1, 2, 3), tuple(range(21)))
    if base == "eps_n" and arg is not None:
        k = int(arg)
        if k < 1:
            raise UnknownAlgebra("eps_n needs k >= 1")
        return AlgebraHandle(
            f"eps_n({k})",
            builtin_space("n_min", k),
            lambda p: eps_n(k, p),
            tuple(range(min(k, 4))),
            tuple(range(k)),
        )
    if arg is not None:
        raise UnknownAlgebra(f"{base!r} takes no size parameter")
    if base == "eps_two_min":
        return AlgebraHandle(base, builtin_space("two_min"), eps_two_min, (0, 1), (0, 1))
    if base == "eps_two_max":
        return AlgebraHandle(base, builtin_space("two_max"), eps_two_max, (0, 1), (0, 1))
    if base == "eps_interval":
        samples = third + (Fraction(3, 4), Fraction(1, 7))
        return AlgebraHandle(base, builtin_space("unit_interval"), eps_interval, third, samples)
    if base == "eps_rinf":
        points = (Fraction(-2), Fraction(0), Fraction(5, 2), INF)
        return AlgebraHandle(base, builtin_space("r_inf"), eps_rinf, points, points + (Fraction(7, 3),))
    if base == "eps_coeq3":
        return AlgebraHandle(base, builtin_space("coeq3"), eps_coeq3, COEQ_POINTS, COEQ_POINTS)
    if base == "eps_free":
        return AlgebraHandle(base, builtin_space("delta_N"), _free_action, _FREE_POINTS, _FREE_POINTS)
    raise UnknownAlgebra(f"unknown algebra {name!r}")


ALGEBRA_NAMES = (
    "eps_N",
    "eps_n(3)",
    "eps_two_min",
    "eps_two_max",
    "eps_interval",
    "eps_rinf",
    "eps_coeq3",
    "eps_free",
)


# --------------------------------------------------------------------------
# law checks
# --------------------------------------------------------------------------


def check_unit_law(alg: AlgebraHandle, samples: Sequence | None = None) -> CheckReport:
    """``alg(dirac(a)) == a`` for each sample point."""
    report = CheckReport("unit", alg.name)
    for a in alg.unit_samples if samples is None else samples:
        got = alg(CarrierDist.dirac(a))
        report.record(got == a, a=a, got=got)
    return report


def check_assoc_law(alg: AlgebraHandle, Q: CarrierDist, report: CheckReport | None = None) -> CheckReport:
    """Push ``Q`` along the action then act, versus flatten then act."""
    report = report or CheckReport("assoc", alg.name)
    lhs = alg(Q.map(alg.action))
    rhs = alg(join(Q))
    report.record(lhs == rhs, Q=Q, lhs=lhs, rhs=rhs)
    return report


def check_affine_law(alg: AlgebraHandle, Q: CarrierDist, report: CheckReport | None = None) -> CheckReport:
    """The action turns mixtures of measures into affine sums in the space."""
    report = report or CheckReport("affine", alg.name)
    lhs = alg(join(Q))
    rhs = alg.space.barycenter(Q.map(alg.action))
    report.record(lhs == rhs, Q=Q, lhs=lhs, rhs=rhs)
    return report


def flatten_then_min(Q: CarrierDist) -> int:
    """``min{k : sum_j Q_j p^j_k > 0}``, summed index by index."""
    mass: dict[int, Fraction] = {}
    for p, q in Q.items():
        for k, w in p.items():
            mass[k] = mass.get(k, ZERO) + q * w
    return min(k for k, w in mass.items() if w > 0)


def min_then_min(Q: CarrierDist) -> int:
    """``min{i : Q({p : min p = i}) > 0}``, grouping inner measures by their minimum."""
    mass: dict[int, Fraction] = {}
    for p, q in Q.items():
        lowest = min(k for k, _ in p.items())
        mass[lowest] = mass.get(lowest, ZERO) + q
    return min(i for i, w in mass.items() if w > 0)


def check_eps_N_equations(Q: CarrierDist, report: CheckReport | None = None) -> CheckReport:
    """The two closed forms of the associativity square for ``eps_N``."""
    report = report or CheckReport("assoc-closed-form", "eps_N")
    lhs = flatten_then_min(Q)
    rhs = min_then_min(Q)
    report.record(lhs == rhs, Q=Q, flatten=lhs, grouped=rhs)
    return report


def factor_through_eps(m: Callable[[CountableDist], int], n: int) -> SeqMap:
    """Recover ``phi`` with ``m == phi . eps_N`` on measures supported below ``n``.

    ``phi`` is the Dirac table of ``m``.  Raises :class:`NotAffine` when the
    table is not monotone or the factorization fails on a grid measure.
    """
    u = tuple(m(dirac(i)) for i in range(n))
    bad = subset_min_witness(u)
    if bad is not None or not monotone_oracle(u):
        raise NotAffine(f"Dirac table {list(u)} breaks min-preservation on {bad}")
    for p in grid_dists(n):
        if m(p) != u[eps_N(p)]:
            raise NotAffine(f"m({p}) = {m(p)} but phi(eps_N) = {u[eps_N(p)]}")
    return SeqMap(dict(enumerate(u)))


def check_phi_commutes(phi: Any, p: CountableDist, report: CheckReport | None = None) -> CheckReport:
    """``phi(eps_N(p)) == eps_N(pushforward(phi, p))``."""
    phi = SeqMap.coerce(phi)
    report = report or CheckReport("phi-commutes")
    lhs = phi(eps_N(p))
    rhs = eps_N(pushforward(phi, p))
    report.record(lhs == rhs, phi=phi.prefix(max(p.support) + 1), p=p, lhs=lhs, rhs=rhs)
    return report


def _check_permutation(phi: Sequence[int]) -> None:
    if sorted(phi) != list(range(len(phi))):
        raise NotPermutation(f"{list(phi)} is not a permutation of 0..{len(phi) - 1}")


def check_permutation_min(phi: Sequence[int], p: CountableDist, report: CheckReport | None = None) -> CheckReport:
    """``eps_N(pushforward(phi, p)) == min{phi(i) : p_i > 0}`` for a permutation ``phi``."""
    phi = tuple(phi)
    _check_permutation(phi)
    if any(i >= len(phi) for i in p.support):
        raise OutOfCarrier(f"support of {p} leaves 0..{len(phi) - 1}")
    report = report or CheckReport("permutation-min")
    lhs = eps_N(pushforward(dict(enumerate(phi)), p))
    rhs = min(phi[i] for i in p.support)
    report.record(lhs == rhs, phi=list(phi), p=p, lhs=lhs, rhs=rhs)
    return report


def check_swap_conjugation(P: Dist, report: CheckReport | None = None) -> CheckReport:
    """``eps_two_max == sw . eps_two_min . G(sw)``."""
    if isinstance(P, CountableDist):
        P = P.as_carrier()
    report = report or CheckReport("swap-conjugation")
    lhs = eps_two_max(P)
    rhs = swap(eps_two_min(P.map(swap)))
    report.record(lhs == rhs, P=P, lhs=lhs, rhs=rhs)
    return report


def free_matches_join(Q: CarrierDist) -> bool:
    return eps_free(Q) == join(Q)

