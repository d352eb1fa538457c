"""Lexicographic value groups and the cut algebra of valuation-ring modules.

A value group is a finite lex product of ``Z`` and ``Q`` factors, leftmost
most significant.  Convex subgroups are the suffixes of the factor list and
are addressed by their *depth* (number of trailing factors).  A module of a
valuation ring is described by the up-set of values it contains; the
finitely presented up-sets handled here are single-boundary cuts

    CUT(level=k, bound=b, closed)  =  { g : pi_k(g) >= b }   (closed)
                                       { g : pi_k(g) >  b }   (open)

where ``pi_k`` drops the last ``k`` coordinates.  EMPTY is the zero module
and ALL is the whole quotient field.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable

Z = "Z"
Q = "Q"
FACTOR_KINDS = (Z, Q)


class GroupError(ValueError):
    """Raised on rank mismatches and malformed group data."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise GroupError(f"floating point coordinate {x!r} is not allowed")
    return Fraction(x)


@dataclass(frozen=True)
class OrderedGroup:
    factors: tuple[str, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        for f in factors:
            if f not in FACTOR_KINDS:
                raise GroupError(f"unknown factor kind {f!r}")
        object.__setattr__(self, "factors", factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    def quotient(self, depth: int) -> OrderedGroup:
        """The group modulo the convex subgroup of the given depth."""
        if not 0 <= depth < self.rank:
            raise GroupError(f"depth {depth} out of range for rank {self.rank}")
        return OrderedGroup(self.factors[: self.rank - depth])

    def element(self, *coords) -> GroupElement:
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        return GroupElement(self, coords)

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def unit(self) -> GroupElement:
        """The positive vector (0, ..., 0, 1) in the least significant factor."""
        return GroupElement(self, (0,) * (self.rank - 1) + (1,))

    def __str__(self):
        return "×".join(self.factors) if self.factors else "0"


@total_ordering
@dataclass(frozen=True)
class GroupElement:
    group: OrderedGroup
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(_as_fraction(c) for c in self.coords)
        if len(coords) != self.group.rank:
            raise GroupError(
                f"{len(coords)} coordinates given for a group of rank {self.group.rank}"
            )
        for kind, c in zip(self.group.factors, coords):
            if kind == Z and c.denominator != 1:
                raise GroupError(f"non-integer coordinate {c} in a Z factor")
        object.__setattr__(self, "coords", coords)

    def _check(self, other: GroupElement):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.group != self.group:
            raise GroupError(f"rank mismatch: {self.group} vs {other.group}")
        return None

    def __lt__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self.coords < other.coords

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def project(self, depth: int) -> GroupElement:
        quotient = self.group.quotient(depth)
        return GroupElement(quotient, self.coords[: quotient.rank])

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def group_cmp(g: GroupElement, h: GroupElement) -> int:
    """-1, 0 or 1 as g <, ==, > h in the lexicographic order."""
    g._check(h)
    if g.coords == h.coords:
        return 0
    return -1 if g.coords < h.coords else 1


def group_add(g: GroupElement, h: GroupElement) -> GroupElement:
    return g + h


def group_neg(g: GroupElement) -> GroupElement:
    return -g


def min_positive(group: OrderedGroup, depth: int = 0) -> GroupElement | None:
    """Least positive element of ``group / H_depth``, or None when it is dense.

    The maximal ideal of the localization at that level is principal exactly
    when this exists.
    """
    if not 0 <= depth < group.rank:
        raise GroupError(f"no quotient at depth {depth} for rank {group.rank}")
    quotient = group.quotient(depth)
    if quotient.factors[-1] == Z:
        return quotient.unit()
    return None


class Kind(enum.Enum):
    EMPTY = "empty"
    ALL = "all"
    CUT = "cut"


@dataclass(frozen=True)
class UpSet:
    """An up-closed set of values; build with :meth:`empty`, :meth:`all`, :meth:`cut`."""

    group: OrderedGroup
    kind: Kind
    level: int = 0
    bound: GroupElement | None = None
    closed: bool = True

    @classmethod
    def empty(cls, group: OrderedGroup) -> UpSet:
        return cls(group, Kind.EMPTY, 0, None, False)

    @classmethod
    def all(cls, group: OrderedGroup) -> UpSet:
        return cls(group, Kind.ALL, 0, None, True)

    @classmethod
    def cut(cls, group: OrderedGroup, level: int, bound, closed: bool = True) -> UpSet:
        """Canonical cut; open cuts over a discrete quotient become closed ones."""
        quotient = group.quotient(level)
        if not isinstance(bound, GroupElement):
            bound = GroupElement(quotient, tuple(bound))
        elif bound.group != quotient:
            raise GroupError(f"bound {bound} does not live in {quotient}")
        if not closed:
            eps = min_positive(group, level)
            if eps is not None:
                bound, closed = bound + eps, True
        return cls(group, Kind.CUT, level, bound, bool(closed))

    @classmethod
    def principal(cls, group: OrderedGroup, *coords) -> UpSet:
        """{>= g}: the principal fractional ideal generated by an element of value g."""
        if len(coords) == 1 and isinstance(coords[0], GroupElement):
            return cls.cut(group, 0, coords[0], True)
        return cls.cut(group, 0, group.element(*coords), True)

    @property
    def is_empty(self) -> bool:
        return self.kind is Kind.EMPTY

    @property
    def is_all(self) -> bool:
        return self.kind is Kind.ALL

    @property
    def is_cut(self) -> bool:
        return self.kind is Kind.CUT

    def __contains__(self, g: GroupElement) -> bool:
        return cut_member(self, g)

    def __str__(self):
        if self.is_empty:
            return "∅"
        if self.is_all:
            return "K"
        rel = "≥" if self.closed else ">"
        proj = f"π{self.level} " if self.level else ""
        return "{" + f"{proj}{rel} {self.bound}" + "}"


def _same_group(S: UpSet, T: UpSet):
    if S.group != T.group:
        raise GroupError(f"rank mismatch: {S.group} vs {T.group}")


def _key(S: UpSet) -> tuple:
    # S = { g : coords(g) >lex key } with -inf / finite / +inf entries encoded
    # as (0,), (1, x), (2,).  Faithful on canonical cuts.
    if S.is_all:
        return ((0,),)
    if S.is_empty:
        return ((2,),)
    tail = (0,) if S.closed else (2,)
    return tuple((1, c) for c in S.bound.coords) + (tail,)


def cut_member(S: UpSet, g: GroupElement) -> bool:
    if g.group != S.group:
        raise GroupError(f"rank mismatch: {S.group} vs {g.group}")
    if S.is_empty:
        return False
    if S.is_all:
        return True
    head = g.coords[: S.bound.group.rank]
    return head >= S.bound.coords if S.closed else head > S.bound.coords


def cut_leq(S: UpSet, T: UpSet) -> bool:
    """Set containment S ⊆ T (equivalently, containment of the modules)."""
    _same_group(S, T)
    return _key(S) >= _key(T)


def cut_meet_join(S: UpSet, T: UpSet) -> tuple[UpSet, UpSet]:
    """(S ∩ T, S ∪ T); up-sets of a chain form a chain, so these are min and max."""
    if cut_leq(S, T):
        return S, T
    return T, S


def cut_meet(S: UpSet, T: UpSet) -> UpSet:
    return cut_meet_join(S, T)[0]


def cut_join(S: UpSet, T: UpSet) -> UpSet:
    return cut_meet_join(S, T)[1]


def cut_add(S: UpSet, T: UpSet) -> UpSet:
    """Minkowski sum S + T (the product of the two modules)."""
    _same_group(S, T)
    if (S.is_empty and T.is_all) or (S.is_all and T.is_empty):
        raise GroupError("0 · K has no up-set model")
    if S.is_empty or T.is_empty:
        return UpSet.empty(S.group)
    if S.is_all or T.is_all:
        return UpSet.all(S.group)
    # the coarser level absorbs: a finer cut projects onto a closed cut there
    if S.level > T.level:
        S, T = T, S
    level = T.level
    bound = S.bound.project(level - S.level) + T.bound
    if S.level < level:
        closed = T.closed
    else:
        closed = S.closed and T.closed
    return UpSet.cut(S.group, level, bound, closed)


def cut_colon(S: UpSet, T: UpSet) -> UpSet:
    """(S : T): the largest up-set U with U + T ⊆ S."""
    _same_group(S, T)
    if T.is_empty:
        raise GroupError("colon by the zero module")
    if S.is_all:
        return UpSet.all(S.group)
    if S.is_empty:
        return UpSet.empty(S.group)
    if T.is_all:
        return UpSet.empty(S.group)
    a, b = S.bound, T.bound
    if T.level > S.level:
        # T is a union of H_T-cosets; only cosets strictly above pi(a) fit in S
        level = T.level
        bound = a.project(T.level - S.level) - b
        closed = not T.closed
    elif T.level == S.level:
        level = S.level
        bound = a - b
        closed = S.closed or not T.closed
    else:
        level = S.level
        bound = a - b.project(S.level - T.level)
        closed = S.closed
    return UpSet.cut(S.group, level, bound, closed)


def cut_v_close(S: UpSet) -> UpSet:
    """The v-closure in the valuation ring with value group ``S.group``.

    Only the modules xM with M non-principal move: they close up to xV.
    """
    if S.is_cut and S.level == 0 and not S.closed and min_positive(S.group, 0) is None:
        return UpSet.cut(S.group, 0, S.bound, True)
    return S


def cut_project(S: UpSet, depth: int) -> UpSet:
    """Up-closure of the image of S in ``group / H_depth`` (extension to the localization)."""
    quotient = S.group.quotient(depth)
    if depth == 0:
        return S
    if S.is_empty:
        return UpSet.empty(quotient)
    if S.is_all:
        return UpSet.all(quotient)
    if S.level >= depth:
        return UpSet.cut(quotient, S.level - depth, S.bound, S.closed)
    # positive elements of H_depth realize the projected bound itself
    return UpSet.cut(quotient, 0, S.bound.project(depth - S.level), True)


def cut_preimage(S: UpSet, depth: int, group: OrderedGroup) -> UpSet:
    """Inflate an up-set of ``group / H_depth`` back to ``group``."""
    if group.quotient(depth) != S.group:
        raise GroupError(f"{S.group} is not the depth-{depth} quotient of {group}")
    if S.is_empty:
        return UpSet.empty(group)
    if S.is_all:
        return UpSet.all(group)
    return UpSet.cut(group, S.level + depth, S.bound, S.closed)


def cut_translate(S: UpSet, g: GroupElement) -> UpSet:
    """g + S, the module x·I for v(x) = g."""
    if g.group != S.group:
        raise GroupError(f"rank mismatch: {S.group} vs {g.group}")
    if not S.is_cut:
        return S
    return UpSet.cut(S.group, S.level, S.bound + g.project(S.level), S.closed)


def parse_factors(items: Iterable[str]) -> OrderedGroup:
    return OrderedGroup(tuple(str(x).strip().upper() for x in items))
