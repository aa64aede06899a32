"""Amplitude-weighted distributions: complex rational weights, l2-normalized.

Evaluation always goes through squared moduli, so an amplitude family
induces an ordinary :class:`~girylab.measure.CountableDist`.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import DuplicateIndex, NormNotOne, PartialFamily
from .measure import ZERO, CountableDist, SetShape, ev, rat


@dataclass(frozen=True)
class CRat:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", rat(self.re))
        object.__setattr__(self, "im", rat(self.im))

    @classmethod
    def coerce(cls, z: Any) -> "CRat":
        if isinstance(z, CRat):
            return z
        if isinstance(z, tuple):
            return cls(*z)
        return cls(rat(z))

    def __mul__(self, other: Any) -> "CRat":
        o = CRat.coerce(other)
        return CRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self) -> "CRat":
        return CRat(-self.re, -self.im)

    def conjugate(self) -> "CRat":
        return CRat(self.re, -self.im)

    def abs2(self) -> Fraction:
        """``z * conj(z)``, always a nonnegative rational."""
        return self.re * self.re + self.im * self.im

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def __repr__(self) -> str:
        if not self.im:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


I = CRat(0, 1)

# unit-modulus complex rationals, from Pythagorean triples
UNIT_PHASES: tuple[CRat, ...] = (
    CRat(1),
    CRat(-1),
    I,
    -I,
    CRat(Fraction(3, 5), Fraction(4, 5)),
    CRat(Fraction(-4, 5), Fraction(3, 5)),
    CRat(Fraction(5, 13), Fraction(-12, 13)),
    CRat(Fraction(-8, 17), Fraction(-15, 17)),
)


class AmpDist:
    """Finitely many nonzero amplitudes with ``sum |p_i|^2 == 1`` exactly."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[tuple[int, Any]]) -> None:
        out = tuple((i, CRat.coerce(z)) for i, z in entries)
        last = -1
        for i, z in out:
            if not isinstance(i, int) or i < 0:
                raise ValueError(f"index must be a natural number, got {i!r}")
            if i <= last:
                raise DuplicateIndex(f"indices must be strictly increasing at {i}")
            if not z:
                raise ValueError(f"stored amplitude at {i} must be nonzero")
            last = i
        norm = sum((z.abs2() for _, z in out), ZERO)
        if norm != 1:
            raise NormNotOne(f"squared amplitudes sum to {norm}, not 1")
        self._entries = out

    @property
    def entries(self) -> tuple[tuple[int, CRat], ...]:
        return self._entries

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self._entries)

    def phase(self, i: int, u: CRat) -> "AmpDist":
        """Multiply the amplitude at index ``i`` by ``u``."""
        return AmpDist((k, z * u if k == i else z) for k, z in self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AmpDist):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(self._entries)

    def __repr__(self) -> str:
        return "AmpDist(" + ", ".join(f"({i}, {z!r})" for i, z in self._entries) + ")"


def from_amplitudes(pairs: Iterable[tuple[int, Any]]) -> AmpDist:
    """Drop zero amplitudes, sort, and check the l2 normalization."""
    seen: dict[int, CRat] = {}
    for i, z in pairs:
        if i in seen:
            raise DuplicateIndex(f"index {i} appears twice")
        seen[i] = CRat.coerce(z)
    return AmpDist(sorted((i, z) for i, z in seen.items() if z))


def l2_to_l1(p: AmpDist) -> CountableDist:
    return CountableDist((i, z.abs2()) for i, z in p.entries)


def amp_min_support(p: AmpDist) -> int:
    return p.entries[0][0]


def amp_combine(p: AmpDist, family: Mapping | Callable[[int], CountableDist], U: SetShape) -> Fraction:
    """``sum_i |p_i|^2 * P_i(U)``."""
    total = ZERO
    for i, z in p.entries:
        if isinstance(family, Mapping):
            if i not in family:
                raise PartialFamily(f"family undefined at {i}")
            P = family[i]
        else:
            try:
                P = family(i)
            except (KeyError, IndexError) as exc:
                raise PartialFamily(f"family undefined at {i}") from exc
        total += z.abs2() * ev(U, P)
    return total
