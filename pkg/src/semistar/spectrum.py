"""Tree models of Spec(R) for semilocal Prüfer domains, and their modules.

Each branch is the chain of primes inside one maximal ideal; its value group
``G`` has one nonzero prime per convex subgroup, the prime at depth ``d``
being the cut ``{pi_d > 0}``.  Branches are glued at shared nodes.  A
submodule of the quotient field is stored as one up-set per branch (its
localizations at the maximal ideals).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .groups import (
    OrderedGroup,
    UpSet,
    cut_add,
    cut_colon,
    cut_leq,
    cut_meet_join,
    cut_project,
    cut_preimage,
    cut_translate,
    min_positive,
    GroupElement,
)

ROOT = "0"


class ModelError(ValueError):
    """Structural problem with a spectrum model; ``diagnostics`` lists each one."""

    def __init__(self, diagnostics):
        if isinstance(diagnostics, str):
            diagnostics = [diagnostics]
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class IdealError(ValueError):
    pass


@dataclass(frozen=True)
class PrimeNode:
    id: str
    levels: tuple[tuple[str, int], ...]

    @property
    def branches(self) -> tuple[str, ...]:
        return tuple(b for b, _ in self.levels)

    def depth_on(self, branch: str) -> int | None:
        for b, d in self.levels:
            if b == branch:
                return d
        return None

    def __str__(self):
        return self.id


class SpectrumTree:
    """A finite rooted tree of primes, one leaf per branch."""

    def __init__(self, branches: Iterable[tuple[str, OrderedGroup]], nodes: Iterable[PrimeNode], name: str = ""):
        self.name = name
        self.branches: tuple[tuple[str, OrderedGroup], ...] = tuple(branches)
        self.groups: dict[str, OrderedGroup] = dict(self.branches)
        self.nodes: dict[str, PrimeNode] = {}
        self._at: dict[tuple[str, int], PrimeNode] = {}
        self.duplicate_ids: list[str] = []
        self.build_problems: list[str] = []
        for node in nodes:
            if node.id in self.nodes:
                self.duplicate_ids.append(node.id)
            self.nodes[node.id] = node
            for b, d in node.levels:
                self._at.setdefault((b, d), node)

    @classmethod
    def from_shared(cls, branches, shared=(), name: str = "") -> SpectrumTree:
        """Build the tree from branch groups and named identifications.

        ``shared`` is a list of ``(node_id, [(branch, depth), ...])``.  Every
        prime contained in a shared prime is shared as well; unnamed nodes are
        called ``<branch>.<depth>``, leaves take the branch id and the root is
        ``"0"``.
        """
        branches = tuple(branches)
        groups = dict(branches)
        problems: list[str] = []
        parent: dict[tuple[str, int], tuple[str, int]] = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[ry] = rx

        order = {b: i for i, (b, _) in enumerate(branches)}
        if len(order) != len(branches):
            problems.append("duplicate branch ids")
        for b, g in branches:
            if g.rank == 0:
                problems.append(f"branch {b}: empty factor list")
            for d in range(g.rank + 1):
                parent[(b, d)] = (b, d)
        roots = [(b, g.rank) for b, g in branches]
        for r in roots[1:]:
            union(roots[0], r)

        names: dict[tuple[str, int], str] = {}
        for node_id, attachments in shared:
            attachments = [tuple(a) for a in attachments]
            ok = True
            for b, d in attachments:
                if b not in groups:
                    problems.append(f"shared node {node_id}: unknown branch {b}")
                    ok = False
                elif not 0 <= d < groups[b].rank:
                    problems.append(f"shared node {node_id}: depth {d} out of range on branch {b}")
                    ok = False
            if not ok or not attachments:
                continue
            for pos in attachments:
                if pos in names and names[pos] != node_id:
                    problems.append(f"node {names[pos]} and {node_id} name the same prime")
                names[pos] = node_id
            b0, d0 = attachments[0]
            h0 = groups[b0].rank - d0
            for b, d in attachments[1:]:
                if groups[b].rank - d != h0:
                    problems.append(f"shared node {node_id}: height mismatch between {b0} and {b}")
                    continue
                for t in range(h0 + 1):
                    union((b0, d0 + t), (b, d + t))

        classes: dict[tuple[str, int], list[tuple[str, int]]] = {}
        for pos in parent:
            classes.setdefault(find(pos), []).append(pos)

        nodes = []
        for members in classes.values():
            members.sort(key=lambda p: (order[p[0]], p[1]))
            named = sorted({names[p] for p in members if p in names})
            if len(named) > 1:
                problems.append(f"names {named} refer to the same prime")
            if any(p in roots for p in members):
                node_id = ROOT
            elif named:
                node_id = named[0]
            elif members[0][1] == 0:
                node_id = members[0][0]
            else:
                node_id = f"{members[0][0]}.{members[0][1]}"
            nodes.append(PrimeNode(node_id, tuple(members)))
        tree = cls(branches, nodes, name)
        tree.build_problems = problems
        return tree

    # -- lookups -------------------------------------------------------------

    def group(self, branch: str) -> OrderedGroup:
        return self.groups[branch]

    def branch_ids(self) -> list[str]:
        return [b for b, _ in self.branches]

    def node(self, node_id) -> PrimeNode:
        if isinstance(node_id, PrimeNode):
            return node_id
        try:
            return self.nodes[node_id]
        except KeyError:
            raise ModelError(f"unknown prime {node_id!r}") from None

    def at(self, branch: str, depth: int) -> PrimeNode:
        return self._at[(branch, depth)]

    @property
    def root(self) -> PrimeNode:
        return self.nodes[ROOT]

    def nonzero(self) -> list[PrimeNode]:
        return [self.nodes[k] for k in sorted(self.nodes) if k != ROOT]

    def maximal(self) -> list[PrimeNode]:
        return sorted((self.at(b, 0) for b in self.branch_ids()), key=lambda n: n.id)

    def is_maximal(self, P) -> bool:
        P = self.node(P)
        return any(d == 0 for _, d in P.levels)

    def depth(self, P, branch: str) -> int:
        d = self.node(P).depth_on(branch)
        if d is None:
            raise ModelError(f"prime {P} does not lie on branch {branch}")
        return d

    def quotient(self, P) -> OrderedGroup:
        """Value group of the localization R_P."""
        P = self.node(P)
        b, d = P.levels[0]
        return self.groups[b].quotient(d)

    def principal(self, P) -> bool:
        """Whether P R_P is principal."""
        P = self.node(P)
        b, d = P.levels[0]
        return min_positive(self.groups[b], d) is not None

    def below(self, P) -> list[PrimeNode]:
        """Nonzero primes strictly contained in P."""
        P = self.node(P)
        b, d = P.levels[0]
        return [self.at(b, e) for e in range(d + 1, self.groups[b].rank)]

    def above(self, P) -> list[PrimeNode]:
        """Primes strictly containing P."""
        P = self.node(P)
        return [Q for Q in self.nonzero() if Q.id != P.id and self.contained(P, Q)]

    def contained(self, P, Q) -> bool:
        """P ⊆ Q."""
        P, Q = self.node(P), self.node(Q)
        if P.id == ROOT:
            return True
        b, dq = Q.levels[0]
        dp = P.depth_on(b)
        return dp is not None and dp >= dq

    def comparable(self, P, Q) -> bool:
        return self.contained(P, Q) or self.contained(Q, P)

    def meet(self, P, branch: str) -> PrimeNode:
        """The largest prime on ``branch`` contained in P."""
        P = self.node(P)
        b, d = P.levels[0]
        for e in range(d, self.groups[b].rank + 1):
            node = self.at(b, e)
            if node.depth_on(branch) is not None:
                return node
        return self.root

    def down_closure(self, primes) -> set[str]:
        out = set()
        for P in primes:
            P = self.node(P)
            if P.id == ROOT:
                continue
            out.add(P.id)
            out.update(Q.id for Q in self.below(P))
        return out


def validate_model(tree: SpectrumTree) -> list[str]:
    """All violated tree invariants, one message per problem; empty means ok."""
    diags = list(tree.build_problems)
    for node_id in tree.duplicate_ids:
        diags.append(f"duplicate node id {node_id}")
    for b, g in tree.branches:
        if g.rank == 0:
            continue
        on_branch = [n for n in tree.nodes.values() if n.depth_on(b) is not None]
        depths = sorted(d for n in on_branch for bb, d in n.levels if bb == b)
        path = len([d for d in depths if d != g.rank])
        if depths != list(range(g.rank + 1)):
            diags.append(f"branch {b}: rank/path mismatch (rank {g.rank}, path length {path})")
    if ROOT not in tree.nodes:
        diags.append("no root node")
    else:
        root = tree.nodes[ROOT]
        for b, g in tree.branches:
            if root.depth_on(b) != g.rank:
                diags.append(f"root does not have depth {g.rank} on branch {b}")
    for node in sorted(tree.nodes.values(), key=lambda n: n.id):
        seen = [b for b, _ in node.levels]
        if len(seen) != len(set(seen)):
            diags.append(f"node {node.id} occurs twice on one branch")
            continue
        unknown = [b for b in seen if b not in tree.groups]
        if unknown:
            diags.append(f"node {node.id}: unknown branches {unknown}")
            continue
        if node.id == ROOT:
            continue
        heights = {tree.groups[b].rank - d for b, d in node.levels}
        if len(heights) > 1:
            diags.append(f"node {node.id}: inconsistent heights {sorted(heights)}")
            continue
        if any(d == 0 for _, d in node.levels) and len(node.levels) > 1:
            diags.append(f"node {node.id}: a maximal ideal is shared by several branches")
        if any(not 0 <= d < tree.groups[b].rank for b, d in node.levels):
            diags.append(f"node {node.id}: depth out of range")
            continue
        quotients = {tree.groups[b].quotient(d).factors for b, d in node.levels}
        if len(quotients) > 1:
            diags.append(f"node {node.id}: quotient groups differ {sorted(quotients)}")
        # the prime just below must be shared too (tree property)
        parents = set()
        for b, d in node.levels:
            nxt = tree._at.get((b, d + 1))
            parents.add(nxt.id if nxt else None)
        if len(parents) > 1:
            diags.append(f"node {node.id}: branches disagree below it ({sorted(map(str, parents))})")
    return diags


@dataclass(frozen=True)
class PrimeInfo:
    node: str
    branched: bool
    localized_max_principal: bool
    divisorial_over_R: bool
    maximal: bool


def primes(tree: SpectrumTree) -> list[PrimeInfo]:
    out = []
    for P in tree.nonzero():
        principal = tree.principal(P)
        maximal = tree.is_maximal(P)
        # nonmaximal primes of a Noetherian Prüfer spectrum are divisorial
        out.append(PrimeInfo(P.id, True, principal, principal if maximal else True, maximal))
    return out


# -- modules -------------------------------------------------------------------


@dataclass(frozen=True)
class ModuleTuple:
    parts: tuple[tuple[str, UpSet], ...]

    @classmethod
    def of(cls, components: Mapping[str, UpSet]) -> ModuleTuple:
        return cls(tuple(sorted(components.items(), key=lambda kv: kv[0])))

    def __getitem__(self, branch: str) -> UpSet:
        for b, S in self.parts:
            if b == branch:
                return S
        raise KeyError(branch)

    def items(self):
        return iter(self.parts)

    def as_dict(self) -> dict[str, UpSet]:
        return dict(self.parts)

    @property
    def is_zero(self) -> bool:
        return any(S.is_empty for _, S in self.parts)

    @property
    def is_full(self) -> bool:
        return all(S.is_all for _, S in self.parts)

    def __str__(self):
        return "(" + ", ".join(f"{b}: {S}" for b, S in self.parts) + ")"


def unit(tree: SpectrumTree) -> ModuleTuple:
    """R itself."""
    return ModuleTuple.of({b: UpSet.principal(g, g.zero()) for b, g in tree.branches})


def full(tree: SpectrumTree) -> ModuleTuple:
    """The quotient field K."""
    return ModuleTuple.of({b: UpSet.all(g) for b, g in tree.branches})


def zero(tree: SpectrumTree) -> ModuleTuple:
    return ModuleTuple.of({b: UpSet.empty(g) for b, g in tree.branches})


def _push(tree: SpectrumTree, S: UpSet, src: str, node: PrimeNode, dst: str) -> UpSet:
    """Component on ``dst`` of (module with component S on ``src``) · R_node."""
    target = tree.group(dst)
    if node.id == ROOT:
        return UpSet.empty(target) if S.is_empty else UpSet.all(target)
    local = cut_project(S, node.depth_on(src))
    return cut_preimage(local, node.depth_on(dst), target)


def compatibility_problems(tree: SpectrumTree, I: ModuleTuple) -> list[str]:
    problems = []
    comps = I.as_dict()
    if set(comps) != set(tree.groups):
        return [f"components {sorted(comps)} do not match branches {sorted(tree.groups)}"]
    for b, S in comps.items():
        if S.group != tree.group(b):
            problems.append(f"component {b} lives in {S.group}, expected {tree.group(b)}")
    if problems:
        return problems
    if I.is_zero and not all(S.is_empty for S in comps.values()):
        problems.append("zero component forces the zero module")
    for node in tree.nonzero():
        if len(node.levels) < 2:
            continue
        seen = {b: cut_project(comps[b], d) for b, d in node.levels}
        if len(set(seen.values())) > 1:
            problems.append(
                f"incompatible at {node.id}: " + ", ".join(f"{b}→{S}" for b, S in seen.items())
            )
    return problems


def check_compatible(tree: SpectrumTree, I: ModuleTuple) -> ModuleTuple:
    problems = compatibility_problems(tree, I)
    if problems:
        raise IdealError("; ".join(problems))
    return I


def reconcile(tree: SpectrumTree, components: Mapping[str, UpSet]) -> ModuleTuple:
    """Localizations of ⋂_i {x : v_i(x) ∈ U_i} for an arbitrary family U_i.

    Each branch constraint reaches branch j through the largest common prime,
    where the other valuation and v_j agree.  A no-op on compatible tuples.
    """
    comps = dict(components)
    out = {}
    for j in tree.branch_ids():
        S = comps[j]
        for i in tree.branch_ids():
            if i == j:
                continue
            N = tree.meet(tree.at(i, 0), j)
            S = cut_meet_join(S, _push(tree, comps[i], i, N, j))[0]
        out[j] = S
    if any(S.is_empty for S in out.values()):
        return zero(tree)
    return ModuleTuple.of(out)


def _componentwise(tree, I: ModuleTuple, J: ModuleTuple, fn) -> ModuleTuple:
    return reconcile(tree, {b: fn(I[b], J[b]) for b in tree.branch_ids()})


def intersect(tree, I, J) -> ModuleTuple:
    return _componentwise(tree, I, J, lambda S, T: cut_meet_join(S, T)[0])


def ideal_sum(tree, I, J) -> ModuleTuple:
    return _componentwise(tree, I, J, lambda S, T: cut_meet_join(S, T)[1])


def product(tree, I, J) -> ModuleTuple:
    if I.is_zero or J.is_zero:
        return zero(tree)
    return _componentwise(tree, I, J, cut_add)


def colon(tree, I, J) -> ModuleTuple:
    """(I : J) = {x ∈ K : xJ ⊆ I}."""
    if J.is_zero:
        raise IdealError("colon by the zero module")
    return _componentwise(tree, I, J, cut_colon)


def ideal_ops(tree, I: ModuleTuple, J: ModuleTuple, op: str) -> ModuleTuple:
    table = {"intersect": intersect, "sum": ideal_sum, "product": product, "colon": colon}
    try:
        fn = table[op]
    except KeyError:
        raise IdealError(f"unknown ideal operation {op!r}") from None
    return fn(tree, I, J)


def leq(I: ModuleTuple, J: ModuleTuple) -> bool:
    """I ⊆ J."""
    return all(cut_leq(S, J[b]) for b, S in I.items())


def ideal_localize(tree: SpectrumTree, I: ModuleTuple, P) -> UpSet:
    """I R_P as an up-set of the value group of R_P."""
    P = tree.node(P)
    if P.id == ROOT:
        raise IdealError("cannot localize at the zero prime")
    if I.is_zero:
        raise IdealError("the zero module has no localization cut")
    views = {b: cut_project(I[b], d) for b, d in P.levels}
    if len(set(views.values())) > 1:
        raise IdealError(f"branches through {P.id} disagree: {views}")
    return next(iter(views.values()))


def extend(tree: SpectrumTree, X: UpSet, P) -> ModuleTuple:
    """An R_P-submodule of K (given by its cut X) as a module tuple."""
    P = tree.node(P)
    src, dsrc = P.levels[0]
    if X.group != tree.quotient(P):
        raise IdealError(f"{X} is not over the value group of R_{P.id}")
    out = {}
    for b, g in tree.branches:
        d = P.depth_on(b)
        if d is not None:
            out[b] = cut_preimage(X, d, g)
            continue
        N = tree.meet(P, b)
        if N.id == ROOT:
            out[b] = UpSet.empty(g) if X.is_empty else UpSet.all(g)
        else:
            local = cut_project(X, N.depth_on(src) - dsrc)
            out[b] = cut_preimage(local, N.depth_on(b), g)
    return ModuleTuple.of(out)


def contract(tree: SpectrumTree, X: UpSet, P) -> ModuleTuple:
    """X ∩ R for an R_P-module X."""
    return intersect(tree, extend(tree, X, P), unit(tree))


def localization_ring(tree, P) -> ModuleTuple:
    """R_P."""
    G = tree.quotient(P)
    return extend(tree, UpSet.principal(G, G.zero()), P)


def localization_max(tree, P) -> ModuleTuple:
    """P R_P."""
    G = tree.quotient(P)
    return extend(tree, UpSet.cut(G, 0, G.zero(), False), P)


def prime_ideal(tree: SpectrumTree, P) -> ModuleTuple:
    P = tree.node(P)
    if P.id == ROOT:
        raise IdealError("the zero prime is excluded")
    G = tree.quotient(P)
    return contract(tree, UpSet.cut(G, 0, G.zero(), False), P)


def primary_samples(tree: SpectrumTree, P, depth: int = 2) -> list[ModuleTuple]:
    """P and the P-primary ideals {>= n u}, {> n u} ∩ R for 1 <= n <= depth."""
    P = tree.node(P)
    G = tree.quotient(P)
    u = G.unit()
    cuts = [UpSet.cut(G, 0, G.zero(), False)]
    for n in range(1, depth + 1):
        nu = G.element(tuple(n * c for c in u.coords))
        cuts += [UpSet.cut(G, 0, nu, True), UpSet.cut(G, 0, nu, False)]
    out = []
    for X in cuts:
        L = contract(tree, X, P)
        if L not in out:
            out.append(L)
    return out


def translate(tree: SpectrumTree, I: ModuleTuple, shift: Mapping[str, GroupElement]) -> ModuleTuple:
    """x·I where v_b(x) = shift[b] on every branch."""
    problems = shift_problems(tree, shift)
    if problems:
        raise IdealError("; ".join(problems))
    return ModuleTuple.of({b: cut_translate(S, shift[b]) for b, S in I.items()})


def shift_problems(tree: SpectrumTree, shift: Mapping[str, GroupElement]) -> list[str]:
    """Values of one element of K must agree at every shared prime."""
    out = []
    for node in tree.nonzero():
        seen = {shift[b].project(d) for b, d in node.levels}
        if len(seen) > 1:
            out.append(f"values disagree at {node.id}")
    return out


def divisorial(tree: SpectrumTree, I: ModuleTuple) -> bool:
    """I = (R : (R : I))."""
    R = unit(tree)
    return colon(tree, R, colon(tree, R, I)) == I


__all__ = [
    "ROOT",
    "ModelError",
    "IdealError",
    "PrimeNode",
    "SpectrumTree",
    "validate_model",
    "PrimeInfo",
    "primes",
    "ModuleTuple",
    "unit",
    "full",
    "zero",
    "compatibility_problems",
    "check_compatible",
    "reconcile",
    "intersect",
    "ideal_sum",
    "product",
    "colon",
    "ideal_ops",
    "leq",
    "ideal_localize",
    "extend",
    "contract",
    "localization_ring",
    "localization_max",
    "prime_ideal",
    "primary_samples",
    "translate",
    "shift_problems",
    "divisorial",
]
