"""Brute-force membership checks for the cut algebra and for closures.

Nothing here consults the symbolic case tables.  Every expected set is
recomputed from its defining comprehension over sampled values, and the
symbolic answer is compared point by point.  Up-sets are read only through
their raw fields (kind, level, bound, closed).

Sums, colons and projections quantify over a second, finer witness grid.
Up-sets are monotone along the lexicographically sorted grid, so "least
member" is a binary search.  All sampling happens in a *frame*: values
multiplied by a common denominator, so comparisons are on integer tuples
and stay exact.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from . import groups
from .groups import Q, Z, OrderedGroup, UpSet


@dataclass(frozen=True)
class SampleBox:
    """Z coordinates in [-radius, radius], Q coordinates at multiples of 1/density."""

    radius: int = 8
    density: int = 6

    def __post_init__(self):
        if self.radius < 1 or self.density < 1:
            raise ValueError("radius and density must be positive")

    def axis(self, kind: str) -> tuple[Fraction, ...]:
        if kind == Z:
            return tuple(Fraction(k) for k in range(-self.radius, self.radius + 1))
        n = self.radius * self.density
        return tuple(Fraction(k, self.density) for k in range(-n, n + 1))

    def eps(self, kind: str) -> Fraction:
        return Fraction(1) if kind == Z else Fraction(1, self.density)

    def points(self, group: OrderedGroup) -> list[tuple]:
        return list(itertools.product(*(self.axis(f) for f in group.factors)))

    def probes(self, group: OrderedGroup, bounds: Sequence[Sequence[Fraction]]) -> list[tuple]:
        """Each bound, bound ± ε, completed by extreme and near-zero tails."""
        factors = group.factors
        out = {tuple(Fraction(0) for _ in factors)}
        for b in bounds:
            b = tuple(Fraction(c) for c in b)[: len(factors)]
            if b:
                e = self.eps(factors[len(b) - 1])
                heads = [b, b[:-1] + (b[-1] - e,), b[:-1] + (b[-1] + e,)]
            else:
                heads = [()]
            tails = [(-self.radius, -self.eps(f), 0, self.eps(f), self.radius) for f in factors[len(b):]]
            for head in heads:
                for tail in itertools.product(*tails):
                    out.add(head + tuple(Fraction(t) for t in tail))
        return sorted(out)


class Frame:
    """Integer coordinates for one check: value x is stored as x·scale.

    ``scale`` is twice the lcm of the box density and all bound
    denominators, so every sampled value is an integer and the witness grid
    (step 1/scale on dense axes) has a point strictly between any two
    distinct sampled values.
    """

    def __init__(self, box: SampleBox, bounds: Sequence[Sequence[Fraction]] = ()):
        step = box.density
        reach = Fraction(box.radius)
        for b in bounds:
            for c in b:
                step = math.lcm(step, Fraction(c).denominator)
                reach = max(reach, abs(Fraction(c)) + box.radius + 1)
        self.box = box
        self.scale = 2 * step
        self.reach = 3 * math.ceil(reach)

    def up(self, coords) -> tuple[int, ...]:
        return tuple(int(Fraction(c) * self.scale) for c in coords)

    def down(self, p) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.scale) for c in p)

    def member(self, S: UpSet) -> Callable[[tuple], bool]:
        if S.kind is groups.Kind.EMPTY:
            return lambda p: False
        if S.kind is groups.Kind.ALL:
            return lambda p: True
        b = self.up(S.bound.coords)
        n = len(b)
        if S.closed:
            return lambda p: p[:n] >= b
        return lambda p: p[:n] > b

    def samples(self, group: OrderedGroup, bounds=()) -> list[tuple[int, ...]]:
        pts = _scaled_points(self.box, group.factors, self.scale)
        return pts + [self.up(p) for p in self.box.probes(group, bounds)]

    def witness(self, group: OrderedGroup) -> Grid:
        return _witness(group.factors, self.scale, self.reach)


@lru_cache(maxsize=256)
def _scaled_points(box: SampleBox, factors: tuple[str, ...], scale: int) -> list[tuple[int, ...]]:
    axes = [[int(c * scale) for c in box.axis(f)] for f in factors]
    return list(itertools.product(*axes))


@lru_cache(maxsize=256)
def _witness(factors: tuple[str, ...], scale: int, reach: int) -> Grid:
    axes = []
    for f in factors:
        if f == Z:
            axes.append(tuple(k * scale for k in range(-reach, reach + 1)))
        else:
            axes.append(tuple(range(-reach * scale, reach * scale + 1)))
    return Grid(tuple(axes))


class Grid:
    """A lexicographically ordered product grid, addressed by index."""

    def __init__(self, axes: tuple[tuple[int, ...], ...]):
        self.axes = axes
        self.size = math.prod(len(a) for a in axes)

    def point(self, idx: int) -> tuple:
        coords = []
        for a in reversed(self.axes):
            idx, r = divmod(idx, len(a))
            coords.append(a[r])
        return tuple(reversed(coords))

    def first(self, pred) -> tuple | None:
        """Least grid point satisfying an upward-closed predicate."""
        lo, hi = 0, self.size
        while lo < hi:
            mid = (lo + hi) // 2
            if pred(self.point(mid)):
                hi = mid
            else:
                lo = mid + 1
        return self.point(lo) if lo < self.size else None

    def next_on_axis(self, head: tuple) -> tuple | None:
        """The next grid value after ``head`` with the same leading coordinates."""
        axis = self.axes[len(head) - 1]
        i = bisect.bisect_right(axis, head[-1])
        return head[:-1] + (axis[i],) if i < len(axis) else None


def raw_member(S: UpSet, p: Sequence) -> bool:
    """Membership by the definition of the three kinds of up-set."""
    if S.kind is groups.Kind.EMPTY:
        return False
    if S.kind is groups.Kind.ALL:
        return True
    b = S.bound.coords
    head = tuple(p[: len(b)])
    return head >= b if S.closed else head > b


def _bounds_of(*sets) -> list[tuple]:
    return [S.bound.coords for S in sets if isinstance(S, UpSet) and S.kind is groups.Kind.CUT]


@dataclass
class Verdict:
    op: str
    ok: bool
    checked: int
    point: tuple | None = None
    expected: bool | None = None
    got: bool | None = None
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def as_dict(self) -> dict:
        return {
            "op": self.op,
            "ok": self.ok,
            "checked": self.checked,
            "point": None if self.point is None else [str(c) for c in self.point],
            "expected": self.expected,
            "got": self.got,
            **self.detail,
        }


def _compare(opname, frame: Frame, points, expected, got, detail=None) -> Verdict:
    n = 0
    for p in points:
        n += 1
        e, g = expected(p), got(p)
        if e != g:
            return Verdict(opname, False, n, frame.down(p), e, g, detail or {})
    return Verdict(opname, True, n, detail=detail or {})


SET_OPS = ("meet", "join", "add", "colon", "v_close", "project", "preimage")
OPNAMES = SET_OPS + ("leq", "member")


def _symbolic(opname: str, inputs):
    # looked up on the module at call time so tests can patch a single operation
    fn = {
        "meet": lambda S, T: groups.cut_meet(S, T),
        "join": lambda S, T: groups.cut_join(S, T),
        "add": lambda S, T: groups.cut_add(S, T),
        "colon": lambda S, T: groups.cut_colon(S, T),
        "v_close": lambda S: groups.cut_v_close(S),
        "project": lambda S, d: groups.cut_project(S, d),
        "preimage": lambda S, d, G: groups.cut_preimage(S, d, G),
        "leq": lambda S, T: groups.cut_leq(S, T),
        "member": lambda S, g: groups.cut_member(S, g),
    }[opname]
    return fn(*inputs)


def oracle_set_op(opname: str, inputs: Sequence, box: SampleBox = SampleBox(), claimed=None) -> Verdict:
    """Check one symbolic cut operation against its set comprehension.

    ``claimed`` replaces the symbolic result, to test the oracle itself.
    """
    if opname not in OPNAMES:
        raise ValueError(f"unknown operation {opname!r}")
    result = _symbolic(opname, inputs) if claimed is None else claimed

    if opname == "member":
        S, g = inputs
        expected = raw_member(S, g.coords)
        ok = expected == bool(result)
        return Verdict(opname, ok, 1, None if ok else tuple(g.coords), expected, bool(result))

    sets = [x for x in inputs if isinstance(x, UpSet)]
    if isinstance(result, UpSet):
        sets.append(result)
    frame = Frame(box, _bounds_of(*sets))

    if opname == "leq":
        S, T = inputs
        inS, inT = frame.member(S), frame.member(T)
        pts = frame.samples(S.group, _bounds_of(S, T))
        witness = next((p for p in pts if inS(p) and not inT(p)), None)
        expected = witness is None
        ok = expected == bool(result)
        detail = {} if witness is None else {"witness": [str(c) for c in frame.down(witness)]}
        point = None if ok or witness is None else frame.down(witness)
        return Verdict(opname, ok, len(pts), point, expected, bool(result), detail)

    if opname in ("meet", "join"):
        S, T = inputs
        group = S.group
        inS, inT = frame.member(S), frame.member(T)
        if opname == "meet":
            expected = lambda p: inS(p) and inT(p)
        else:
            expected = lambda p: inS(p) or inT(p)
    elif opname == "add":
        S, T = inputs
        group = S.group
        inT = frame.member(T)
        s = frame.witness(group).first(frame.member(S))
        # p ∈ S + T  iff  p - s0 ∈ T for the least s0 ∈ S (T is up-closed)
        if s is None:
            expected = lambda p: False
        else:
            expected = lambda p: inT(tuple(a - c for a, c in zip(p, s)))
    elif opname == "colon":
        S, T = inputs
        group = S.group
        inS = frame.member(S)
        t = frame.witness(group).first(frame.member(T))
        # p + T ⊆ S  iff  p + t0 ∈ S for the least t0 ∈ T
        if t is None:
            expected = lambda p: True
        else:
            expected = lambda p: inS(tuple(a + c for a, c in zip(p, t)))
    elif opname == "v_close":
        (S,) = inputs
        group = S.group
        inS = frame.member(S)
        grid = frame.witness(group)
        dense_top = group.factors[-1] == Q

        # xM ⊆ S puts x in S^v; with a dense last factor that means: everything
        # just above p (same leading coordinates) already lies in S
        def expected(p):
            if inS(p):
                return True
            if not dense_top:
                return False
            nxt = grid.next_on_axis(p)
            return nxt is not None and inS(nxt)
    elif opname == "project":
        S, depth = inputs
        group = S.group.quotient(depth)
        s = frame.witness(S.group).first(frame.member(S))
        if s is None:
            expected = lambda q: False
        else:
            expected = lambda q: s[: len(q)] <= q
    else:  # preimage
        S, depth, big = inputs
        group = big
        inS = frame.member(S)
        r = S.group.rank
        expected = lambda p: inS(p[:r])

    if not isinstance(result, UpSet) or result.group != group:
        return Verdict(opname, False, 0, detail={"error": f"result {result} does not live in {group}"})
    pts = frame.samples(group, _bounds_of(*sets))
    return _compare(opname, frame, pts, expected, frame.member(result), {"result": str(result)})


def oracle_closure(tree, op, I, box: SampleBox = SampleBox(), result=None) -> Verdict:
    """Recompute closure membership branch by branch from the defining intersection.

    A value p on branch j lies in I R_P exactly when p, read modulo the
    convex subgroup of the meet N of P with branch j, dominates the least
    value of I_j read the same way.  If N is the zero prime there is no
    constraint.  For a v-generator on a branch through P with dense quotient,
    a value also counts when every value just above it does (xM ⊆ I).
    """
    from . import closure  # looked up at call time so tests can patch the engine

    if result is None:
        result = closure.closure_apply(tree, op, I)
    gens = [("d", p) for p in sorted(op.delta1)] + [("v", p) for p in sorted(op.delta2)]
    n = 0
    for b, g in tree.branches:
        S, R = I[b], result[b]
        frame = Frame(box, _bounds_of(S, R))
        pts = frame.samples(g, _bounds_of(S, R))
        if S.kind is groups.Kind.EMPTY:
            expected = lambda p: False
        elif not gens:
            expected = lambda p: True
        else:
            grid = frame.witness(g)
            s = grid.first(frame.member(S))
            rules = []
            for kind, P in gens:
                N = tree.meet(P, b)
                if N.id == tree.root.id:
                    continue
                keep = g.rank - N.depth_on(b)
                through = tree.node(P).depth_on(b) is not None
                dense = g.factors[keep - 1] == Q
                rules.append((keep, kind == "v" and through and dense))
            expected = _closure_rule(s, rules, grid)
        got = frame.member(R)
        for p in pts:
            n += 1
            e, r = expected(p), got(p)
            if e != r:
                return Verdict("closure", False, n, frame.down(p), e, r, {"branch": b, "result": str(R)})
    return Verdict("closure", True, n)


def _closure_rule(s, rules, grid: Grid):
    if s is None:
        return lambda p: False

    def inside(p, keep, v_rule):
        head, low = p[:keep], s[:keep]
        if head >= low:
            return True
        if not v_rule:
            return False
        # head ∈ (I R_P)^v iff the grid value right after head is already in I R_P
        nxt = grid.next_on_axis(head)
        return nxt is not None and nxt >= low

    return lambda p: all(inside(p, keep, v) for keep, v in rules)


__all__ = ["SampleBox", "Frame", "Grid", "Verdict", "raw_member", "oracle_set_op", "oracle_closure", "OPNAMES"]
