"""Exact probability measures on the natural numbers and the Giry monad on them.

Two representations live here:

* :class:`CountableDist` -- a measure on ``N`` with exact rational weights.  The
  support is a finite, strictly increasing list of ``(index, weight)`` pairs,
  optionally followed by a geometric tail that carries the remaining mass.
* :class:`CarrierDist` -- a finitely supported measure on an arbitrary set of
  hashable elements.  Distributions over distributions (``G(G(N))``) and the
  domains of barycenter maps are carrier distributions.

All arithmetic is done with :class:`fractions.Fraction`; floats are rejected.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Any, Union

from .errors import (
    DuplicateIndex,
    EnumerationCapExceeded,
    MassNotOne,
    NegativeWeight,
    PartialFamily,
    PartialMap,
    TailUnsupported,
    UnsupportedSetShape,
)

Rat = Fraction

DEFAULT_CAP = 10**6

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(x: Any) -> Fraction:
    """Coerce ``x`` to an exact rational.

    Accepts ints, Fractions and strings such as ``"3"`` or ``"-2/7"``.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(c in s for c in ".eE"):
            raise ValueError(f"not an exact rational string: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


# --------------------------------------------------------------------------
# Countable distributions on N
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GeometricTail:
    """Tail whose weights decay geometrically from ``start`` onwards.

    The first tail weight is fixed by the mass the prefix leaves over:
    ``w_start = rest * (1 - ratio)`` and ``w_i = w_start * ratio**(i - start)``.
    The mass beyond index ``m >= start`` is ``rest * ratio**(m - start + 1)``,
    which is the certified bound used when enumerating a prefix.
    """

    start: int
    ratio: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.start, int) or self.start < 0:
            raise ValueError("tail start must be a natural number")
        object.__setattr__(self, "ratio", rat(self.ratio))
        if not (0 <= self.ratio < 1):
            raise ValueError("geometric tail ratio must lie in [0, 1)")

    kind = "geometric"


class CountableDist:
    """A probability measure on N with exact rational weights.

    Weights are stored in canonical form: indices strictly increasing, only
    strictly positive weights.  Equality is structural.
    """

    __slots__ = ("_weights", "_tail", "_lookup", "_hash")

    def __init__(
        self,
        weights: Iterable[tuple[int, Any]],
        tail: GeometricTail | None = None,
    ) -> None:
        entries = tuple((i, w if type(w) is Fraction else rat(w)) for i, w in weights)
        last = -1
        total = ZERO
        for i, w in entries:
            if not isinstance(i, int) or isinstance(i, bool) or i < 0:
                raise ValueError(f"index must be a natural number, got {i!r}")
            if i <= last:
                raise DuplicateIndex(f"indices must be strictly increasing at {i}")
            if w <= 0:
                raise NegativeWeight(f"stored weight at {i} must be positive, got {w}")
            last = i
            total += w
        if tail is None:
            if total != 1:
                raise MassNotOne(f"weights sum to {total}, not 1")
        else:
            if last >= tail.start:
                raise ValueError("prefix indices must precede the tail start")
            if total >= 1:
                raise MassNotOne(f"prefix mass {total} leaves nothing for the tail")
        self._weights = entries
        self._tail = tail
        self._lookup = dict(entries)
        self._hash: int | None = None

    # construction -------------------------------------------------------

    @classmethod
    def geometric(
        cls, start: int, ratio: Any, prefix: Iterable[tuple[int, Any]] = ()
    ) -> "CountableDist":
        return cls(prefix, GeometricTail(start, rat(ratio)))

    # accessors ----------------------------------------------------------

    @property
    def weights(self) -> tuple[tuple[int, Fraction], ...]:
        return self._weights

    @property
    def tail(self) -> GeometricTail | None:
        return self._tail

    @property
    def is_finite(self) -> bool:
        return self._tail is None

    @property
    def prefix_mass(self) -> Fraction:
        return sum((w for _, w in self._weights), ZERO)

    @property
    def tail_mass(self) -> Fraction:
        return ONE - self.prefix_mass if self._tail else ZERO

    @property
    def support(self) -> tuple[int, ...]:
        if self._tail is not None:
            raise TailUnsupported("support of a tail-backed distribution is infinite")
        return tuple(i for i, _ in self._weights)

    def items(self) -> tuple[tuple[int, Fraction], ...]:
        if self._tail is not None:
            raise TailUnsupported("cannot list all entries of a tail-backed distribution")
        return self._weights

    def tail_weight(self, i: int) -> Fraction:
        t = self._tail
        if t is None or i < t.start:
            return ZERO
        first = self.tail_mass * (1 - t.ratio)
        if t.ratio == 0:
            return first if i == t.start else ZERO
        return first * t.ratio ** (i - t.start)

    def weight(self, i: int) -> Fraction:
        w = self._lookup.get(i)
        if w is not None:
            return w
        return self.tail_weight(i)

    def __getitem__(self, i: int) -> Fraction:
        return self.weight(i)

    def entries(self) -> Iterator[tuple[int, Fraction]]:
        """Yield every entry, tail included, in increasing index order."""
        yield from self._weights
        t = self._tail
        if t is None:
            return
        w = self.tail_mass * (1 - t.ratio)
        i = t.start
        while w > 0:
            yield i, w
            w *= t.ratio
            i += 1

    def mass_beyond(self, m: int) -> Fraction:
        """Certified mass carried by indices strictly greater than ``m``."""
        rest = sum((w for i, w in self._weights if i > m), ZERO)
        t = self._tail
        if t is None:
            return rest
        if m < t.start:
            return rest + self.tail_mass
        return self.tail_mass * t.ratio ** (m - t.start + 1)

    def as_carrier(self) -> "CarrierDist":
        return CarrierDist._trusted(dict(self.items()))

    @classmethod
    def from_carrier(cls, dist: "CarrierDist") -> "CountableDist":
        return cls(sorted(dist.items()))

    # dunder -------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CountableDist):
            return NotImplemented
        return self._weights == other._weights and self._tail == other._tail

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._weights, self._tail))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"({i}, {w})" for i, w in self._weights)
        if self._tail is not None:
            t = self._tail
            body += f"{', ' if body else ''}geometric(start={t.start}, ratio={t.ratio})"
        return "{" + body + "}"

    def __reduce__(self):
        return (CountableDist, (self._weights, self._tail))


def dirac(i: int) -> CountableDist:
    return CountableDist(((i, ONE),))


def from_weights(pairs: Iterable[tuple[int, Any]]) -> CountableDist:
    """Normalize ``pairs`` into a :class:`CountableDist`.

    Zero weights are dropped and entries sorted.  Repeated indices, negative
    weights and total mass other than exactly 1 are errors.
    """
    seen: dict[int, Fraction] = {}
    for i, w in pairs:
        w = rat(w)
        if i in seen:
            raise DuplicateIndex(f"index {i} appears twice")
        if w < 0:
            raise NegativeWeight(f"weight {w} at index {i}")
        seen[i] = w
    total = sum(seen.values(), ZERO)
    if total != 1:
        raise MassNotOne(f"weights sum to {total}, not 1")
    return CountableDist(sorted((i, w) for i, w in seen.items() if w))


# --------------------------------------------------------------------------
# Measurable sets of N
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Cofinite:
    """The complement of a finite set of naturals."""

    excluded: frozenset = frozenset()

    def __contains__(self, i: object) -> bool:
        return i not in self.excluded


NATURALS = Cofinite()

SetShape = Union[frozenset, set, range, list, tuple, Cofinite, Callable[[int], bool]]


def down(n: int) -> frozenset:
    """The initial segment ``{0, ..., n-1}``."""
    return frozenset(range(n))


def ev(W: SetShape, p: CountableDist) -> Fraction:
    """Exact mass that ``p`` assigns to ``W``."""
    if isinstance(W, Cofinite):
        return ONE - ev(W.excluded, p)
    if isinstance(W, (frozenset, set, range, list, tuple)):
        return sum((p.weight(i) for i in set(W)), ZERO)
    if callable(W):
        if not p.is_finite:
            raise UnsupportedSetShape(
                "predicate sets need a finitely supported distribution"
            )
        return sum((w for i, w in p.items() if W(i)), ZERO)
    raise UnsupportedSetShape(f"unsupported set description {type(W).__name__}")


# --------------------------------------------------------------------------
# Monad structure on N
# --------------------------------------------------------------------------


def min_support(p: CountableDist, cap: int = DEFAULT_CAP) -> int:
    """Least index carrying strictly positive weight.

    ``cap`` bounds the largest index inspected while scanning a tail.
    """
    if p.weights:
        return p.weights[0][0]
    for i, w in p.entries():
        if i > cap:
            break
        if w > 0:
            return i
    raise EnumerationCapExceeded(f"no positive weight at indices <= {cap}")


def _apply(f: Mapping | Callable, x: Any) -> Any:
    if isinstance(f, Mapping):
        try:
            return f[x]
        except KeyError:
            raise PartialMap(f"map undefined at {x!r}") from None
    try:
        return f(x)
    except (KeyError, IndexError) as exc:
        raise PartialMap(f"map undefined at {x!r}") from exc


def pushforward(f: Mapping | Callable[[int], int], p: CountableDist) -> CountableDist:
    """Image measure of ``p`` along an index map ``f``."""
    if not p.is_finite:
        raise TailUnsupported("pushforward needs a finitely supported distribution")
    acc: dict[int, Fraction] = {}
    for i, w in p.items():
        j = _apply(f, i)
        acc[j] = acc.get(j, ZERO) + w
    return CountableDist(sorted(acc.items()))


def _family_at(family: Mapping | Callable, j: int) -> Any:
    if isinstance(family, Mapping):
        if j not in family:
            raise PartialFamily(f"family undefined at {j}")
        return family[j]
    try:
        return family(j)
    except (KeyError, IndexError) as exc:
        raise PartialFamily(f"family undefined at {j}") from exc


def convex_combine(
    p: CountableDist, family: Mapping | Callable[[int], CountableDist]
) -> CountableDist:
    """The mixture ``sum_j p_j * family(j)``, computed entrywise."""
    if not p.is_finite:
        raise TailUnsupported("convex_combine needs a finitely supported outer measure")
    acc: dict[int, Fraction] = {}
    for j, pj in p.items():
        q = _family_at(family, j)
        if not q.is_finite:
            raise TailUnsupported(f"family member {j} is tail-backed")
        for k, qk in q.items():
            acc[k] = acc.get(k, ZERO) + pj * qk
    return CountableDist(sorted(acc.items()))


# --------------------------------------------------------------------------
# Finite distributions over arbitrary carriers
# --------------------------------------------------------------------------


def _order_key(x: Any) -> tuple:
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return (0, x, "")
    return (1, 0, type(x).__name__ + repr(x))


class CarrierDist:
    """A finitely supported probability measure on hashable elements."""

    __slots__ = ("_map", "_hash")

    def __init__(self, pairs: Iterable[tuple[Any, Any]]) -> None:
        acc: dict[Any, Fraction] = {}
        for x, w in pairs:
            w = rat(w)
            if w < 0:
                raise NegativeWeight(f"weight {w} at {x!r}")
            if w:
                acc[x] = acc.get(x, ZERO) + w
        total = sum(acc.values(), ZERO)
        if total != 1:
            raise MassNotOne(f"weights sum to {total}, not 1")
        self._map = acc
        self._hash: int | None = None

    @classmethod
    def _trusted(cls, mapping: dict) -> "CarrierDist":
        obj = cls.__new__(cls)
        obj._map = mapping
        obj._hash = None
        return obj

    @classmethod
    def dirac(cls, x: Any) -> "CarrierDist":
        return cls._trusted({x: ONE})

    def items(self) -> list[tuple[Any, Fraction]]:
        return sorted(self._map.items(), key=lambda kv: _order_key(kv[0]))

    @property
    def support(self) -> list[Any]:
        return [x for x, _ in self.items()]

    def weight(self, x: Any) -> Fraction:
        return self._map.get(x, ZERO)

    def __getitem__(self, x: Any) -> Fraction:
        return self.weight(x)

    def __len__(self) -> int:
        return len(self._map)

    def map(self, f: Mapping | Callable) -> "CarrierDist":
        """Pushforward along ``f``."""
        acc: dict[Any, Fraction] = {}
        for x, w in self._map.items():
            y = _apply(f, x)
            acc[y] = acc.get(y, ZERO) + w
        return CarrierDist._trusted(acc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CarrierDist):
            return NotImplemented
        return self._map == other._map

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __repr__(self) -> str:
        return "CarrierDist(" + ", ".join(f"({x!r}, {w})" for x, w in self.items()) + ")"

    def __reduce__(self):
        return (CarrierDist, (tuple(self._map.items()),))


def DistOverDist(pairs: Iterable[tuple[Any, Any]]) -> CarrierDist:
    """A finitely supported measure whose points are themselves measures."""
    q = CarrierDist(pairs)
    for inner in q.support:
        if not isinstance(inner, (CountableDist, CarrierDist)):
            raise TypeError(f"inner point {inner!r} is not a distribution")
    return q


def join(Q: CarrierDist) -> CountableDist | CarrierDist:
    """Monad multiplication: flatten a measure over measures.

    Inner :class:`CountableDist` points give a :class:`CountableDist`; inner
    :class:`CarrierDist` points give a :class:`CarrierDist`.
    """
    pairs = Q._map.items()
    if len(Q._map) == 1:
        (only,) = Q._map
        if isinstance(only, (CountableDist, CarrierDist)):
            # a point mass flattens to its point, tails included
            return only
    if all(isinstance(d, CountableDist) for d in Q._map):
        for d in Q._map:
            if not d.is_finite:
                raise TailUnsupported("join rejects tail-backed inner measures")
        acc = _accumulate((qd, d.weights) for d, qd in pairs)
        return CountableDist(sorted(acc.items()))
    inner = []
    for d, qd in pairs:
        if isinstance(d, CountableDist):
            d = d.as_carrier()
        elif not isinstance(d, CarrierDist):
            raise TypeError(f"inner point {d!r} is not a distribution")
        inner.append((qd, d._map.items()))
    return CarrierDist._trusted(_accumulate(inner))


def _accumulate(groups: Iterable[tuple[Fraction, Iterable[tuple[Any, Fraction]]]]) -> dict[Any, Fraction]:
    """``sum_j q_j * d_j`` with unreduced integer pairs, normalized once per key."""
    acc: dict[Any, list[int]] = {}
    for q, items in groups:
        qn, qd = q.numerator, q.denominator
        for k, w in items:
            n, d = qn * w.numerator, qd * w.denominator
            cur = acc.get(k)
            if cur is None:
                acc[k] = [n, d]
            elif cur[1] == d:
                cur[0] += n
            else:
                cur[0] = cur[0] * d + n * cur[1]
                cur[1] *= d
    return {k: Fraction(n, d) for k, (n, d) in acc.items()}


def unit(x: Any) -> CountableDist | CarrierDist:
    """Monad unit: ``dirac`` on naturals, ``CarrierDist.dirac`` otherwise."""
    if isinstance(x, int) and not isinstance(x, bool) and x >= 0:
        return dirac(x)
    return CarrierDist.dirac(x)


def lift(f: Callable) -> Callable:
    """Functor action on arrows, for use on carrier distributions."""

    def lifted(d: CountableDist | CarrierDist) -> CarrierDist:
        if isinstance(d, CountableDist):
            d = d.as_carrier()
        return d.map(f)

    return lifted
