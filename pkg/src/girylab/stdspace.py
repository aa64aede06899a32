"""Finite partition refinement: atoms maps, collapse maps, chains, fields.

Level ``n`` (1-based) of a tree partitions the point set into ``n`` ordered
atoms.  Level 1 is the single atom ``X``.  Each refinement splits atom ``i``
into a left part (new index ``i``) and a right part (new index ``i + 1``);
atoms after ``i`` shift up by one.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass, field

from .errors import BrokenChain, EmptyPart, IndexOutOfRange, NotAPartition, UnknownPoint
from .report import CheckReport
from .scvx import monotone_oracle


def phi_formula(i: int, n: int) -> tuple[int, ...]:
    """Collapse ``{0..n} -> {0..n-1}`` merging ``i`` and ``i + 1``."""
    if not 0 <= i < n:
        raise IndexOutOfRange(f"split index {i} outside 0..{n - 1}")
    return tuple(k if k <= i else i if k == i + 1 else k - 1 for k in range(n + 1))


def compose_tables(outer: Sequence[int], inner: Sequence[int]) -> tuple[int, ...]:
    """``outer . inner`` as a table."""
    return tuple(outer[k] for k in inner)


@dataclass(frozen=True)
class Split:
    atom: int
    left: frozenset
    right: frozenset


@dataclass(frozen=True)
class RefinementTree:
    points: tuple
    splits: tuple[Split, ...] = ()
    levels: tuple[tuple[frozenset, ...], ...] = field(init=False, repr=False, compare=False)
    collapses: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.points)) != len(self.points):
            raise NotAPartition("points must be distinct")
        if not self.points:
            raise EmptyPart("the point set is empty")
        levels = [(frozenset(self.points),)]
        collapses = []
        for s in self.splits:
            top = levels[-1]
            _validate_split(top, s)
            levels.append(top[: s.atom] + (s.left, s.right) + top[s.atom + 1 :])
            collapses.append(phi_formula(s.atom, len(top)))
        object.__setattr__(self, "levels", tuple(levels))
        object.__setattr__(self, "collapses", tuple(collapses))

    @classmethod
    def trivial(cls, points: Iterable[Hashable]) -> "RefinementTree":
        return cls(tuple(points))

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> tuple[frozenset, ...]:
        if not 1 <= n <= self.depth:
            raise IndexOutOfRange(f"level {n} outside 1..{self.depth}")
        return self.levels[n - 1]

    def collapse(self, n: int) -> tuple[int, ...]:
        """The table from level ``n + 1`` atoms to level ``n`` atoms."""
        if not 1 <= n < self.depth:
            raise IndexOutOfRange(f"no collapse below level {n}")
        return self.collapses[n - 1]

    def atoms_map(self, n: int, x: Hashable) -> int:
        for idx, atom in enumerate(self.level(n)):
            if x in atom:
                return idx
        raise UnknownPoint(f"{x!r} is not a point of the tree")

    def ordered(self, subset: Iterable) -> list:
        """Members of ``subset`` in the tree's point order."""
        s = set(subset)
        return [x for x in self.points if x in s]


def _validate_split(top: tuple[frozenset, ...], s: Split) -> None:
    if not 0 <= s.atom < len(top):
        raise IndexOutOfRange(f"atom {s.atom} outside 0..{len(top) - 1}")
    if not s.left or not s.right:
        raise EmptyPart(f"split of atom {s.atom} has an empty part")
    if s.left & s.right or (s.left | s.right) != top[s.atom]:
        raise NotAPartition(f"parts do not partition atom {s.atom}")


def refine(tree: RefinementTree, atom: int, left: Iterable, right: Iterable) -> RefinementTree:
    """Split ``atom`` of the deepest level into ``left`` and ``right``."""
    s = Split(atom, frozenset(left), frozenset(right))
    _validate_split(tree.levels[-1], s)
    return RefinementTree(tree.points, tree.splits + (s,))


def check_refinement_diagram(
    tree: RefinementTree, n: int, x: Hashable, phi: Sequence[int] | None = None
) -> CheckReport:
    """``phi(Atoms_{n+1}(x)) == Atoms_n(x)``; ``phi`` defaults to the recorded collapse."""
    report = CheckReport("refinement-square", f"level {n}")
    table = tree.collapse(n) if phi is None else phi
    fine = tree.atoms_map(n + 1, x)
    coarse = tree.atoms_map(n, x)
    report.record(table[fine] == coarse, level=n, point=x, fine=fine, coarse=coarse, image=table[fine])
    return report


def check_all_diagrams(tree: RefinementTree) -> CheckReport:
    report = CheckReport("refinement-square")
    for n in range(1, tree.depth):
        for x in tree.points:
            report.absorb(check_refinement_diagram(tree, n, x))
    return report


def composite_collapse(tree: RefinementTree, lo: int, hi: int) -> tuple[int, ...]:
    """Table from level ``hi`` atoms down to level ``lo`` atoms."""
    if not 1 <= lo <= hi <= tree.depth:
        raise IndexOutOfRange(f"bad level range {lo}..{hi}")
    table = tuple(range(hi))
    for n in range(hi - 1, lo - 1, -1):
        table = compose_tables(tree.collapse(n), table)
    return table


# --------------------------------------------------------------------------
# chains
# --------------------------------------------------------------------------

AtomChain = tuple[int, ...]


def chain_intersection(tree: RefinementTree, chain: Sequence[int]) -> frozenset:
    """Intersect the chosen atoms, one per level starting at level 1."""
    if not chain:
        raise BrokenChain("empty chain")
    if len(chain) > tree.depth:
        raise IndexOutOfRange(f"chain of length {len(chain)} exceeds depth {tree.depth}")
    atoms = []
    for n, idx in enumerate(chain, start=1):
        level = tree.level(n)
        if not 0 <= idx < len(level):
            raise IndexOutOfRange(f"atom {idx} outside level {n}")
        atoms.append(level[idx])
    for n in range(1, len(atoms)):
        if not atoms[n] <= atoms[n - 1]:
            raise BrokenChain(f"atom at level {n + 1} is not inside the atom at level {n}")
    return frozenset.intersection(*atoms)


def full_chains(tree: RefinementTree) -> list[AtomChain]:
    """Every decreasing chain through all levels: one per deepest atom."""
    out = []
    for leaf in range(tree.depth):
        chain = [leaf]
        for n in range(tree.depth - 1, 0, -1):
            chain.append(tree.collapse(n)[chain[-1]])
        out.append(tuple(reversed(chain)))
    return out


# --------------------------------------------------------------------------
# finite fields
# --------------------------------------------------------------------------


def field_of_level(tree: RefinementTree, n: int) -> frozenset[frozenset]:
    """All unions of level-``n`` atoms, the empty union included."""
    atoms = tree.level(n)
    out = set()
    for mask in range(1 << len(atoms)):
        out.add(frozenset().union(*(a for k, a in enumerate(atoms) if mask >> k & 1)))
    return frozenset(out)


def check_field(tree: RefinementTree, n: int) -> CheckReport:
    """``F_n`` has ``2**n`` members and is closed under complement and union."""
    report = CheckReport("field", f"level {n}")
    F = field_of_level(tree, n)
    X = frozenset(tree.points)
    report.record(len(F) == 2**n, size=len(F), expected=2**n)
    report.record(X in F and frozenset() in F, reason="X and empty set")
    for U in F:
        report.record(X - U in F, complement_of=sorted(map(str, U)))
    for U, V in itertools.combinations(F, 2):
        if U | V not in F:
            report.record(False, union_of=[sorted(map(str, U)), sorted(map(str, V))])
    report.cases += len(F) * (len(F) - 1) // 2
    return report


def check_tree(tree: RefinementTree) -> CheckReport:
    """Every square, every field, every chain, and the composite collapses."""
    report = CheckReport("refinement", f"|X|={len(tree.points)} depth={tree.depth}")
    for n in range(1, tree.depth + 1):
        report.record(len(tree.level(n)) == n, level=n, atoms=len(tree.level(n)))
    report.absorb(check_all_diagrams(tree))
    for n in range(1, tree.depth + 1):
        report.absorb(check_field(tree, n))
    for chain in full_chains(tree):
        try:
            meet = chain_intersection(tree, chain)
        except BrokenChain as exc:
            report.record(False, chain=list(chain), error=str(exc))
            continue
        report.record(bool(meet), chain=list(chain))
    for lo in range(1, tree.depth + 1):
        for hi in range(lo, tree.depth + 1):
            report.record(monotone_oracle(composite_collapse(tree, lo, hi)), lo=lo, hi=hi)
    return report


def random_tree(rng: random.Random, size: int, depth: int) -> RefinementTree:
    """Seeded tree on points ``0..size-1`` with ``min(depth, size)`` levels."""
    tree = RefinementTree.trivial(range(size))
    while tree.depth < min(depth, size):
        top = tree.levels[-1]
        splittable = [k for k, a in enumerate(top) if len(a) > 1]
        k = rng.choice(splittable)
        members = tree.ordered(top[k])
        rng.shuffle(members)
        cut = rng.randint(1, len(members) - 1)
        tree = refine(tree, k, members[:cut], members[cut:])
    return tree
