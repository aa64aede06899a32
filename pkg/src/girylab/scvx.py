"""Super convex spaces: built-in instances, countable affine sums and checkers.

A space is a carrier together with a structure map that sends a probability
measure ``p`` on N and a sequence ``a`` of carrier points to the point
``sum_i p_i a_i``.  The built-in structure maps all reduce to a ``combine``
over the finitely many positively weighted terms; tail-backed measures are
folded into that form where the sequence rule makes it exact.
"""

from __future__ import annotations

import itertools
import random
import re
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Literal

from .errors import (
    BoundExceeded,
    OutOfCarrier,
    PartialFamily,
    PartialSequence,
    TailUnsupported,
    UnknownSpace,
)
from .grid import DEFAULT_GRID, DEFAULT_SUPPORT, grid_dists, random_dist, random_weights, weight_vectors
from .measure import ZERO, CountableDist, convex_combine, dirac, min_support, rat
from .report import CheckReport

TypeTag = Literal["discrete", "geometric", "mixed"]


class _Infinity:
    """The point adjoined to the rationals in the extended real line."""

    _instance: "_Infinity | None" = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_rational(x: Any) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


# --------------------------------------------------------------------------
# sequences
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    name = "identity"
    monotone = True

    def __call__(self, i: int) -> int:
        return i


@dataclass(frozen=True)
class Constant:
    value: Any
    name = "constant"
    monotone = True

    def __call__(self, i: int) -> Any:
        return self.value


@dataclass(frozen=True)
class Geometric:
    """The rule ``i -> coef * ratio**i``."""

    coef: Fraction
    ratio: Fraction
    name = "geometric"
    monotone = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "coef", rat(self.coef))
        object.__setattr__(self, "ratio", rat(self.ratio))

    def __call__(self, i: int) -> Fraction:
        return self.coef * self.ratio**i


@dataclass(frozen=True, eq=False)
class Rule:
    """An arbitrary index rule.  ``monotone`` is a promise, not a check."""

    func: Callable[[int], Any]
    name: str = "custom"
    monotone: bool = False

    def __call__(self, i: int) -> Any:
        return self.func(i)


SeqRule = Identity | Constant | Geometric | Rule


@dataclass(frozen=True, eq=False)
class SeqMap:
    """A sequence ``N -> A``: a finite table with an optional default rule."""

    table: Mapping[int, Any] = field(default_factory=dict)
    default: SeqRule | None = None

    def __call__(self, i: int) -> Any:
        if i in self.table:
            return self.table[i]
        if self.default is None:
            raise PartialSequence(f"sequence undefined at {i}")
        return self.default(i)

    def defined_at(self, i: int) -> bool:
        return i in self.table or self.default is not None

    def prefix(self, n: int) -> tuple:
        return tuple(self(i) for i in range(n))

    @classmethod
    def coerce(cls, a: Any) -> "SeqMap":
        if isinstance(a, SeqMap):
            return a
        if isinstance(a, (Identity, Constant, Geometric, Rule)):
            return cls({}, a)
        if isinstance(a, Mapping):
            return cls(dict(a))
        if isinstance(a, (list, tuple)):
            return cls(dict(enumerate(a)))
        if callable(a):
            return cls({}, Rule(a))
        raise TypeError(f"cannot read {type(a).__name__} as a sequence")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SeqMap):
            return NotImplemented
        return dict(self.table) == dict(other.table) and self.default == other.default

    def __hash__(self) -> int:
        return hash((frozenset(self.table.items()), self.default))


IDENTITY = SeqMap({}, Identity())


def constant_seq(value: Any) -> SeqMap:
    return SeqMap({}, Constant(value))


# --------------------------------------------------------------------------
# spaces
# --------------------------------------------------------------------------

Terms = list[tuple[Fraction, Any]]


@dataclass(frozen=True, eq=False)
class Carrier:
    name: str
    contains: Callable[[Any], bool]
    samples: tuple
    draw: Callable[[random.Random], Any]


@dataclass(frozen=True, eq=False)
class SpaceHandle:
    """A super convex space instance.

    ``combine`` evaluates an affine sum given its positively weighted terms;
    ``tail_rule`` (optional) handles measures with an infinite tail.
    """

    name: str
    type_tag: TypeTag
    carrier: Carrier
    combine: Callable[[Terms], Any]
    tail_rule: Callable[[Terms, Fraction, int, CountableDist, SeqMap], Any] | None = None

    def check_point(self, x: Any) -> Any:
        if not self.carrier.contains(x):
            raise OutOfCarrier(f"{x!r} is not a point of {self.name}")
        return x

    def affine_sum(self, p: CountableDist, a: Any) -> Any:
        return affine_sum(self, p, a)

    def barycenter(self, P) -> Any:
        """Affine sum of a finite carrier distribution."""
        return self._combine(list((w, x) for x, w in P.items()))

    def _combine(self, terms: Terms) -> Any:
        for _, x in terms:
            self.check_point(x)
        return self.combine(terms)

    def __repr__(self) -> str:
        return f"SpaceHandle({self.name}, {self.type_tag})"


def _tail_split(p: CountableDist, a: SeqMap) -> tuple[Terms, Fraction, int]:
    """Explicit terms, leftover tail mass, and the first tail index left to the rule."""
    t = p.tail
    terms: Terms = [(w, a(i)) for i, w in p.weights]
    rest = p.tail_mass
    for i in sorted(k for k in a.table if k >= t.start):
        w = p.tail_weight(i)
        if w > 0:
            terms.append((w, a.table[i]))
            rest -= w
    first = t.start
    while first in a.table:
        first += 1
    return terms, rest, first


def affine_sum(space: SpaceHandle, p: CountableDist, a: Any) -> Any:
    """The countable affine sum ``sum_i p_i a_i`` in ``space``."""
    a = SeqMap.coerce(a)
    if p.is_finite:
        terms: Terms = []
        for i, w in p.items():
            if not a.defined_at(i):
                raise PartialSequence(f"sequence undefined at support point {i}")
            terms.append((w, a(i)))
        return space._combine(terms)
    terms, rest, first = _tail_split(p, a)
    if rest == 0:
        return space._combine(terms)
    rule = a.default
    if rule is None:
        raise PartialSequence("sequence has no rule for the tail indices")
    if isinstance(rule, Constant):
        return space._combine(terms + [(rest, rule.value)])
    if space.tail_rule is None:
        raise TailUnsupported(f"{space.name} cannot sum a tail with rule {rule.name}")
    return space.tail_rule(terms, rest, first, p, a)


# structure maps ------------------------------------------------------------


def _min_combine(terms: Terms) -> Any:
    return min(x for _, x in terms)


def _max_combine(terms: Terms) -> Any:
    return max(x for _, x in terms)


def _min_tail(space_ref: list) -> Callable:
    def tail(terms, rest, first, p, a):
        if not a.default.monotone:
            raise TailUnsupported("min structure needs a nondecreasing tail rule")
        # a nondecreasing rule attains its minimum over the tail at its first index
        return space_ref[0]._combine(terms + [(rest, a.default(first))])

    return tail


def _mix_combine(terms: Terms) -> CountableDist:
    acc: dict[int, Fraction] = {}
    for w, q in terms:
        for k, qk in q.items():
            acc[k] = acc.get(k, ZERO) + w * qk
    return CountableDist(sorted(acc.items()))


def _interval_combine(terms: Terms) -> Fraction:
    return sum((w * x for w, x in terms), ZERO)


def _rinf_combine(terms: Terms) -> Any:
    if any(x is INF for _, x in terms):
        return INF
    return sum((w * x for w, x in terms), ZERO)


def _rinf_tail(terms, rest, first, p, a):
    rule = a.default
    if any(x is INF for _, x in terms):
        return INF
    if not isinstance(rule, Geometric):
        raise TailUnsupported("extended-real tails need a geometric growth rule")
    base = sum((w * x for w, x in terms), ZERO)
    t = p.tail
    if rule.coef == 0:
        return base
    if t.ratio == 0:
        return base + rest * rule(first)
    if t.ratio * abs(rule.ratio) >= 1:
        # partial sums do not converge
        return INF
    w0 = p.tail_weight(t.start)
    full = w0 * rule(t.start) / (1 - t.ratio * rule.ratio)
    overridden = sum(
        (p.tail_weight(i) * rule(i) for i in a.table if i >= t.start), ZERO
    )
    return base + full - overridden


COEQ_POINTS = ("0", "u", "1")


def _coeq_combine(terms: Terms) -> str:
    values = {x for _, x in terms}
    if len(values) == 1:
        return values.pop()
    return "u"


def _is_nat(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def _dist_in(k: int | None) -> Callable[[Any], bool]:
    def contains(x: Any) -> bool:
        if not isinstance(x, CountableDist) or not x.is_finite:
            return False
        return k is None or all(i < k for i in x.support)

    return contains


def _random_rational(rng: random.Random, lo: int, hi: int) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 6))


def _random_unit(rng: random.Random) -> Fraction:
    d = rng.randint(1, 8)
    return Fraction(rng.randint(0, d), d)


def _random_rinf(rng: random.Random) -> Any:
    return INF if rng.randrange(6) == 0 else _random_rational(rng, -20, 20)


def _make_n_min(k: int | None) -> SpaceHandle:
    ref: list = []
    if k is None:
        carrier = Carrier("N", _is_nat, tuple(range(6)), lambda rng: rng.randint(0, 20))
        name = "N_min"
    else:
        if k < 1:
            raise UnknownSpace("n_min needs k >= 1")
        carrier = Carrier(
            f"{{0..{k - 1}}}",
            lambda x: _is_nat(x) and x < k,
            tuple(range(min(k, 6))),
            lambda rng: rng.randrange(k),
        )
        name = f"n_min({k})"
    space = SpaceHandle(name, "discrete", carrier, _min_combine, _min_tail(ref))
    ref.append(space)
    return space


def _make_delta(k: int | None) -> SpaceHandle:
    if k is None:
        samples = (
            dirac(0),
            dirac(1),
            dirac(2),
            CountableDist([(0, Fraction(1, 2)), (1, Fraction(1, 2))]),
            CountableDist([(0, Fraction(1, 3)), (2, Fraction(2, 3))]),
        )
        carrier = Carrier("G(N)", _dist_in(None), samples, lambda rng: random_dist(rng, 5, 3))
        return SpaceHandle("delta_N", "geometric", carrier, _mix_combine)
    if k < 1:
        raise UnknownSpace("delta_n needs k >= 1")
    samples = tuple(dirac(i) for i in range(min(k, 3)))
    if k > 1:
        samples += (CountableDist([(0, Fraction(1, 2)), (k - 1, Fraction(1, 2))]),)
    carrier = Carrier(f"G({k})", _dist_in(k), samples, lambda rng: random_dist(rng, k - 1, k))
    return SpaceHandle(f"delta_n({k})", "geometric", carrier, _mix_combine)


def _make_builtin(name: str, k: int | None) -> SpaceHandle:
    if name == "N_min":
        return _make_n_min(None)
    if name == "n_min":
        return _make_n_min(k)
    if name in ("two_min", "two_max"):
        carrier = Carrier("{0,1}", lambda x: x in (0, 1) and _is_nat(x), (0, 1), lambda rng: rng.randint(0, 1))
        if name == "two_min":
            ref: list = []
            space = SpaceHandle("two_min", "discrete", carrier, _min_combine, _min_tail(ref))
            ref.append(space)
            return space
        return SpaceHandle("two_max", "discrete", carrier, _max_combine)
    if name == "delta_n":
        return _make_delta(k)
    if name == "delta_N":
        return _make_delta(None)
    if name == "unit_interval":
        carrier = Carrier(
            "[0,1]",
            lambda x: is_rational(x) and 0 <= x <= 1,
            (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(3, 4)),
            _random_unit,
        )
        return SpaceHandle("unit_interval", "geometric", carrier, _interval_combine)
    if name == "r_inf":
        carrier = Carrier(
            "Q+{inf}",
            lambda x: x is INF or is_rational(x),
            (Fraction(0), Fraction(1), Fraction(-2), Fraction(5, 2), INF),
            _random_rinf,
        )
        return SpaceHandle("r_inf", "mixed", carrier, _rinf_combine, _rinf_tail)
    if name == "coeq3":
        carrier = Carrier("{0,u,1}", lambda x: x in COEQ_POINTS, COEQ_POINTS, lambda rng: rng.choice(COEQ_POINTS))
        return SpaceHandle("coeq3", "discrete", carrier, _coeq_combine)
    raise UnknownSpace(f"unknown space {name!r}")


_NAME_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(\s*(\d+)\s*\))?\s*$")
_PARAMETRIC = {"n_min", "delta_n"}

BUILTIN_NAMES = (
    "N_min",
    "n_min(k)",
    "two_min",
    "two_max",
    "delta_n(k)",
    "delta_N",
    "unit_interval",
    "r_inf",
    "coeq3",
)


@lru_cache(maxsize=None)
def builtin_space(name: str, k: int | None = None) -> SpaceHandle:
    """Look up a built-in space, e.g. ``"N_min"`` or ``"n_min(3)"``."""
    m = _NAME_RE.match(name)
    if not m:
        raise UnknownSpace(f"unknown space {name!r}")
    base, arg = m.group(1), m.group(2)
    if arg is not None:
        if k is not None and k != int(arg):
            raise UnknownSpace(f"conflicting sizes for {name!r}")
        k = int(arg)
    if (base in _PARAMETRIC) != (k is not None):
        raise UnknownSpace(f"{base!r} {'needs' if base in _PARAMETRIC else 'takes no'} size parameter")
    return _make_builtin(base, k)


def all_builtin_spaces() -> list[SpaceHandle]:
    return [
        builtin_space("N_min"),
        builtin_space("n_min", 3),
        builtin_space("two_min"),
        builtin_space("two_max"),
        builtin_space("delta_n", 3),
        builtin_space("delta_N"),
        builtin_space("unit_interval"),
        builtin_space("r_inf"),
        builtin_space("coeq3"),
    ]


# --------------------------------------------------------------------------
# affine maps
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AffineMap:
    source: SpaceHandle
    target: SpaceHandle
    action: Callable[[Any], Any]
    name: str = "m"

    def __call__(self, x: Any) -> Any:
        return self.action(x)


def seq_to_affine(a: Any, target: SpaceHandle) -> AffineMap:
    """The affine map out of ``delta_N`` that sends ``dirac(i)`` to ``a(i)``."""
    a = SeqMap.coerce(a)
    return AffineMap(
        builtin_space("delta_N"),
        target,
        lambda p: affine_sum(target, p, a),
        name=f"<a> into {target.name}",
    )


def transform_compose(Q: Mapping | Callable, a: Any, target: SpaceHandle) -> SeqMap:
    """The sequence ``b_i = sum_j Q^i_j a_j``.

    Pointwise on Diracs, ``<a>`` after ``<Q>`` equals ``<b>``.
    """
    a = SeqMap.coerce(a)
    if isinstance(Q, Mapping):
        return SeqMap({i: affine_sum(target, q, a) for i, q in Q.items()})

    def b(i: int) -> Any:
        try:
            q = Q(i)
        except (KeyError, IndexError) as exc:
            raise PartialFamily(f"family undefined at {i}") from exc
        return affine_sum(target, q, a)

    return SeqMap({}, Rule(b, "transform"))


def family_to_affine(Q: Mapping | Callable) -> AffineMap:
    """``<Q>``: the endomorphism of ``delta_N`` sending ``dirac(i)`` to ``Q^i``."""
    delta = builtin_space("delta_N")
    return AffineMap(delta, delta, lambda p: convex_combine(p, Q), name="<Q>")


# --------------------------------------------------------------------------
# axiom checks
# --------------------------------------------------------------------------


def check_axiom1(space: SpaceHandle, a: Any, j: int) -> CheckReport:
    """``sum_i delta_j(i) a_i == a_j``."""
    a = SeqMap.coerce(a)
    report = CheckReport("axiom1", space.name)
    value = affine_sum(space, dirac(j), a)
    report.record(value == a(j), j=j, got=value, expected=a(j))
    report.detail["value"] = value
    return report


def check_axiom2(space: SpaceHandle, p: CountableDist, Qfam: Mapping | Callable, a: Any) -> CheckReport:
    """Iterated sums agree with the sum over the mixed measure."""
    a = SeqMap.coerce(a)
    report = CheckReport("axiom2", space.name)
    inner = SeqMap({j: affine_sum(space, _family(Qfam, j), a) for j in p.support})
    lhs = affine_sum(space, p, inner)
    rhs = affine_sum(space, convex_combine(p, Qfam), a)
    report.record(lhs == rhs, p=p, lhs=lhs, rhs=rhs)
    report.detail.update(lhs=lhs, rhs=rhs)
    return report


def _family(Qfam: Mapping | Callable, j: int) -> CountableDist:
    if isinstance(Qfam, Mapping):
        if j not in Qfam:
            raise PartialFamily(f"family undefined at {j}")
        return Qfam[j]
    return Qfam(j)


# --------------------------------------------------------------------------
# affineness checking
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Budget:
    """Bounds for generated affineness cases."""

    grid: int = DEFAULT_GRID
    support: int = DEFAULT_SUPPORT
    max_sequences: int = 32
    random_cases: int = 200
    seed: int = 0
    stop_at_first: bool = True


def candidate_sequences(space: SpaceHandle, budget: Budget, rng: random.Random) -> Iterator[tuple]:
    """Finite sequences of carrier points: cyclic sample list, product prefix, random."""
    E = space.carrier.samples
    n = budget.support
    seen = set()
    first = tuple(E[i % len(E)] for i in range(n))
    seen.add(first)
    yield first
    count = 1
    for seq in itertools.product(E, repeat=n):
        if count >= budget.max_sequences:
            break
        if seq in seen:
            continue
        seen.add(seq)
        count += 1
        yield seq


def is_affine(m: AffineMap, budget: Budget | None = None) -> CheckReport:
    """Check ``m(sum p_i a_i) == sum p_i m(a_i)`` on generated cases.

    Exhaustive core: every grid measure with support below ``budget.support``
    against the candidate sequences.  Then ``budget.random_cases`` seeded
    random measures and sequences.
    """
    budget = budget or Budget()
    rng = random.Random(budget.seed)
    report = CheckReport("affine", m.name)
    S, T = m.source, m.target

    def one(p: CountableDist, seq: Sequence) -> bool:
        lhs = m(affine_sum(S, p, seq))
        rhs = affine_sum(T, p, [m(x) for x in seq])
        return report.record(lhs == rhs, p=p, a=list(seq), lhs=lhs, rhs=rhs)

    dists = grid_dists(budget.support, budget.grid)
    for seq in candidate_sequences(S, budget, rng):
        for p in dists:
            if not one(p, seq) and budget.stop_at_first:
                return report
    for _ in range(budget.random_cases):
        p = random_dist(rng)
        seq = [S.carrier.draw(rng) for _ in range(p.support[-1] + 1)]
        if not one(p, seq) and budget.stop_at_first:
            return report
    return report


# --------------------------------------------------------------------------
# monotone maps on initial segments
# --------------------------------------------------------------------------

EXHAUSTIVE_BOUND = 5


def monotone_oracle(f: Sequence[int]) -> bool:
    """``i < j`` implies ``f(i) <= f(j)``."""
    return all(f[i] <= f[i + 1] for i in range(len(f) - 1))


def subset_min_witness(f: Sequence[int]) -> tuple[int, ...] | None:
    """First nonempty subset ``S`` with ``f(min S) != min f(S)``, or None."""
    n = len(f)
    for size in range(1, n + 1):
        for S in itertools.combinations(range(n), size):
            if f[S[0]] != min(f[i] for i in S):
                return S
    return None


def affine_iff_monotone(n: int, bound: int = EXHAUSTIVE_BOUND) -> CheckReport:
    """Over all ``n**n`` maps ``{0..n-1} -> {0..n-1}``: monotone iff subset-min preserving."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > bound:
        raise BoundExceeded(f"n={n} exceeds the exhaustive bound {bound}")
    report = CheckReport("ns-equivalence", f"n={n}")
    monotone = 0
    for f in itertools.product(range(n), repeat=n):
        mono = monotone_oracle(f)
        monotone += mono
        witness = subset_min_witness(f)
        report.record(mono == (witness is None), f=list(f), monotone=mono, subset=witness)
    report.detail.update(functions=n**n, monotone=monotone)
    return report


def monotone_maps(n: int, m: int | None = None) -> Iterator[tuple[int, ...]]:
    """All nondecreasing maps ``{0..n-1} -> {0..m-1}``."""
    m = n if m is None else m
    return itertools.combinations_with_replacement(range(m), n)


# --------------------------------------------------------------------------
# type classification
# --------------------------------------------------------------------------


def _interior_dists(size: int, budget: Budget, rng: random.Random) -> list[CountableDist]:
    out = [CountableDist(enumerate(v)) for v in weight_vectors(size, budget.grid)]
    for _ in range(4):
        out.append(CountableDist(enumerate(random_weights(rng, size))))
    return out


def classify_probe(space: SpaceHandle, budget: Budget | None = None) -> CheckReport:
    """Infer discrete / geometric / mixed behaviour and compare with the tag.

    Discrete: every sequence gives the same value for all strictly interior
    weights.  Geometric: some sequence does not, and binary sums cancel
    (``r x + (1-r) y == r x + (1-r) z`` forces ``y == z``).  Mixed otherwise.
    """
    budget = budget or Budget()
    rng = random.Random(budget.seed)
    E = space.carrier.samples
    report = CheckReport("classify", space.name)

    constant = True
    nonconstant_witness = None
    for size in range(2, min(budget.support, 4) + 1):
        ps = _interior_dists(size, budget, rng)
        for seq in itertools.islice(itertools.product(E, repeat=size), budget.max_sequences):
            values = []
            for p in ps:
                v = affine_sum(space, p, seq)
                if v not in values:
                    values.append(v)
            if len(values) > 1:
                constant = False
                if nonconstant_witness is None:
                    nonconstant_witness = {"a": list(seq), "values": values[:2]}

    cancel_witness = None
    rs = [r for r in weight_vectors(2, budget.grid)]
    for x, y, z in itertools.product(E, repeat=3):
        if y == z:
            continue
        for r, s in rs:
            p = CountableDist([(0, r), (1, s)])
            if affine_sum(space, p, (x, y)) == affine_sum(space, p, (x, z)):
                cancel_witness = {"x": x, "y": y, "z": z, "r": r}
                break
        if cancel_witness:
            break

    if constant:
        inferred = "discrete"
    elif cancel_witness is None:
        inferred = "geometric"
    else:
        inferred = "mixed"
    report.record(inferred == space.type_tag, declared=space.type_tag, inferred=inferred)
    report.detail.update(
        declared=space.type_tag,
        inferred=inferred,
        nonconstant=nonconstant_witness,
        cancellation_failure=cancel_witness,
    )
    return report


def dg_constancy_check(m: AffineMap, budget: Budget | None = None) -> CheckReport:
    """An affine map from a discrete space into a geometric space is constant.

    Passes when ``m`` fails the affineness suite (recorded in ``detail``) or
    when it is constant on the sampled carrier points.
    """
    if m.source.type_tag != "discrete" or m.target.type_tag != "geometric":
        raise ValueError("dg_constancy_check needs a discrete source and a geometric target")
    budget = budget or Budget()
    report = CheckReport("dg-constancy", m.name)
    affine = is_affine(m, budget)
    report.detail["affine"] = affine.ok
    report.detail["affine_witness"] = affine.witness
    if not affine.ok:
        report.record(True)
        return report
    rng = random.Random(budget.seed)
    points = list(m.source.carrier.samples) + [m.source.carrier.draw(rng) for _ in range(8)]
    images = [m(x) for x in points]
    constant = all(y == images[0] for y in images)
    report.detail["constant"] = constant
    report.record(constant, points=points, images=images)
    return report


# --------------------------------------------------------------------------
# concrete maps
# --------------------------------------------------------------------------


def swap(x: int) -> int:
    if x not in (0, 1):
        raise OutOfCarrier(f"{x!r} is not in {{0,1}}")
    return 1 - x


def swap_map() -> AffineMap:
    """The isomorphism two_max -> two_min with sw(0)=1, sw(1)=0."""
    return AffineMap(builtin_space("two_max"), builtin_space("two_min"), swap, "sw")


def iso_delta2_interval(direction: str, x: Any) -> Any:
    """``(1-r) dirac(0) + r dirac(1) <-> r``."""
    if direction == "fwd":
        if not isinstance(x, CountableDist) or not x.is_finite or any(i > 1 for i in x.support):
            raise OutOfCarrier(f"{x!r} is not a measure on {{0,1}}")
        return x.weight(1)
    if direction == "bwd":
        if not is_rational(x) or not 0 <= x <= 1:
            raise OutOfCarrier(f"{x!r} is not in [0,1]")
        r = Fraction(x)
        return CountableDist([(i, w) for i, w in ((0, 1 - r), (1, r)) if w])
    raise ValueError("direction must be 'fwd' or 'bwd'")


def delta2_to_interval() -> AffineMap:
    return AffineMap(
        builtin_space("delta_n", 2),
        builtin_space("unit_interval"),
        lambda x: iso_delta2_interval("fwd", x),
        "iso-fwd",
    )


def interval_to_delta2() -> AffineMap:
    return AffineMap(
        builtin_space("unit_interval"),
        builtin_space("delta_n", 2),
        lambda x: iso_delta2_interval("bwd", x),
        "iso-bwd",
    )


def rinf_j_map(x: Any) -> int:
    """1 on every rational, 0 at infinity."""
    if x is INF:
        return 0
    if not is_rational(x):
        raise OutOfCarrier(f"{x!r} is not an extended rational")
    return 1


def j_map() -> AffineMap:
    return AffineMap(builtin_space("r_inf"), builtin_space("two_min"), rinf_j_map, "j")


def divergent_instance() -> tuple[CountableDist, SeqMap]:
    """``p_i = 2^-(i+1)`` and ``r_i = 2^(i+1)``: every partial sum grows by 1."""
    return CountableDist.geometric(0, Fraction(1, 2)), SeqMap({}, Geometric(2, 2))


def check_j_divergent() -> CheckReport:
    """Affineness of ``j`` on the divergent extended-real instance."""
    p, r = divergent_instance()
    report = CheckReport("j-affine-divergent", "j")
    total = affine_sum(builtin_space("r_inf"), p, r)
    lhs = rinf_j_map(total)
    # a geometric rule only yields finite rationals, so j after r is constantly 1
    j_of_r = SeqMap({}, Rule(lambda i: rinf_j_map(r(i)), "j.r", monotone=True))
    rhs = affine_sum(builtin_space("two_min"), p, j_of_r)
    report.record(lhs == rhs, sum=total, lhs=lhs, rhs=rhs)
    report.detail.update(sum=total, lhs=lhs, rhs=rhs)
    return report


def check_epi_cancellation(f: Callable[[int], Any], g: Callable[[int], Any], n: int) -> CheckReport:
    """If ``f`` and ``g`` agree after ``min_support`` on Diracs, they agree on ``{0..n-1}``."""
    report = CheckReport("epi-cancellation")
    agree_on_diracs = all(f(min_support(dirac(i))) == g(min_support(dirac(i))) for i in range(n))
    for i in range(n):
        report.record(not agree_on_diracs or f(i) == g(i), i=i)
    report.detail["premise"] = agree_on_diracs
    return report
