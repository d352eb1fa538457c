"""Stable semistar operations on a tree model.

An operation is stored as ``(lam, delta1, delta2)`` and acts by

    I  ↦  ⋂_{P ∈ delta1} I R_P  ∩  ⋂_{P ∈ delta2} (I R_P)^v

where ``v`` is the v-operation of the valuation ring R_P.  ``lam`` is the
set of primes surviving in R^★ (root included).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .groups import cut_v_close
from .spectrum import (
    ROOT,
    IdealError,
    ModuleTuple,
    SpectrumTree,
    extend,
    full,
    ideal_localize,
    intersect,
    leq,
    localization_max,
    localization_ring,
    prime_ideal,
    primary_samples,
    translate,
    unit,
)

D = "d"
V = "v"


class SpecError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Generator:
    """d_P : I ↦ I R_P, or v_P : I ↦ (I R_P)^v."""

    kind: str
    prime: str

    def __str__(self):
        return f"{self.kind}_{self.prime}"


def make_generator(tree: SpectrumTree, kind: str, prime) -> Generator:
    kind = kind.lower()
    if kind not in (D, V):
        raise SpecError(f"generator kind must be 'd' or 'v', got {kind!r}")
    P = tree.node(prime)
    if P.id == ROOT:
        raise SpecError("generators live at nonzero primes")
    if kind == V and tree.principal(P):
        kind = D  # v = d when the maximal ideal is principal
    return Generator(kind, P.id)


def all_generators(tree: SpectrumTree) -> list[Generator]:
    out = []
    for P in tree.nonzero():
        out.append(Generator(D, P.id))
        if not tree.principal(P):
            out.append(Generator(V, P.id))
    return out


def gen_apply(tree: SpectrumTree, g: Generator, I: ModuleTuple) -> ModuleTuple:
    if I.is_zero:
        raise IdealError("generators act on nonzero modules")
    X = ideal_localize(tree, I, g.prime)
    if g.kind == V:
        X = cut_v_close(X)
    return extend(tree, X, g.prime)


@dataclass(frozen=True)
class StableOpSpec:
    lam: frozenset
    delta1: frozenset
    delta2: frozenset

    def generators(self) -> list[Generator]:
        return [Generator(D, p) for p in sorted(self.delta1)] + [
            Generator(V, p) for p in sorted(self.delta2)
        ]

    @property
    def is_trivial_extension(self) -> bool:
        return not self.delta1 and not self.delta2

    def __str__(self):
        return (
            "Op(lambda={" + ",".join(sorted(self.lam)) + "}, delta1={"
            + ",".join(sorted(self.delta1)) + "}, delta2={" + ",".join(sorted(self.delta2)) + "})"
        )


@dataclass(frozen=True)
class SpectraReport:
    qspec: tuple[str, ...]
    psspec: tuple[str, ...]


def spec_problems(tree: SpectrumTree, op: StableOpSpec) -> list[str]:
    problems = []
    known = set(tree.nodes)
    for name, part in (("lambda", op.lam), ("delta1", op.delta1), ("delta2", op.delta2)):
        unknown = sorted(set(part) - known)
        if unknown:
            problems.append(f"{name}: unknown primes {unknown}")
    if problems:
        return problems
    if ROOT in op.delta1 or ROOT in op.delta2:
        problems.append("the zero prime cannot carry a generator")
    both = sorted(op.delta1 & op.delta2)
    if both:
        problems.append(f"delta1 and delta2 overlap in {both}")
    for P in sorted(op.delta2 - {ROOT}):
        if tree.principal(P):
            problems.append(f"delta2 member {P} has principal maximal ideal in its localization")
    d2 = sorted(op.delta2 - {ROOT})
    for P, Q in combinations(d2, 2):
        if tree.comparable(P, Q):
            problems.append(f"delta2 members {P} and {Q} are comparable")
    members = (op.delta1 | op.delta2) - {ROOT}
    for P in sorted(members):
        for Q in tree.below(P):
            if Q.id not in op.delta1:
                problems.append(f"{Q.id} lies below {P} but is not in delta1")
    expected = tree.down_closure(members) | {ROOT}
    if set(op.lam) != expected:
        problems.append(
            f"lambda {sorted(op.lam)} is not the down-closure {sorted(expected)} of delta1 ∪ delta2"
        )
    return problems


def check_spec(tree: SpectrumTree, op: StableOpSpec) -> StableOpSpec:
    problems = spec_problems(tree, op)
    if problems:
        raise SpecError("; ".join(problems))
    return op


def raw_spec(tree: SpectrumTree, delta1: Iterable, delta2: Iterable = ()) -> StableOpSpec:
    """An operation exactly as given, without completing or checking it."""
    d1 = frozenset(tree.node(p).id for p in delta1)
    d2 = frozenset(tree.node(p).id for p in delta2)
    return StableOpSpec(frozenset(tree.down_closure(d1 | d2) | {ROOT}), d1, d2)


def build_spec(tree: SpectrumTree, delta1: Iterable, delta2: Iterable = (), lam: Iterable | None = None) -> StableOpSpec:
    """Validated operation; primes below delta1 ∪ delta2 are added to delta1.

    Adding them does not change the closure, since I R_P ⊆ I R_Q and
    (I R_P)^v ⊆ I R_Q whenever Q ⊊ P.
    """
    d1 = {tree.node(p).id for p in delta1}
    d2 = {tree.node(p).id for p in delta2}
    d1 |= tree.down_closure(d1 | d2) - d2
    full_lam = frozenset(tree.down_closure(d1 | d2) | {ROOT})
    if lam is not None:
        lam = {tree.node(p).id for p in lam} | {ROOT}
        if lam != full_lam:
            raise SpecError(
                f"lambda {sorted(lam)} is not the down-closure {sorted(full_lam)} of delta1 ∪ delta2"
            )
    return check_spec(tree, StableOpSpec(full_lam, frozenset(d1), frozenset(d2)))


def identity_spec(tree: SpectrumTree) -> StableOpSpec:
    return build_spec(tree, [P.id for P in tree.maximal()])


def trivial_extension(tree: SpectrumTree) -> StableOpSpec:
    return StableOpSpec(frozenset({ROOT}), frozenset(), frozenset())


def closure_apply(tree: SpectrumTree, op: StableOpSpec, I: ModuleTuple) -> ModuleTuple:
    if I.is_zero:
        return I
    gens = op.generators()
    if not gens:
        return full(tree)
    result = None
    for g in gens:
        part = gen_apply(tree, g, I)
        result = part if result is None else intersect(tree, result, part)
    return result


def quasi_closed(tree, op, L: ModuleTuple) -> bool:
    """L = L^★ ∩ R."""
    return intersect(tree, closure_apply(tree, op, L), unit(tree)) == L


def analyze(tree: SpectrumTree, op: StableOpSpec, depth: int = 2) -> SpectraReport:
    R = unit(tree)
    qspec, psspec = [], []
    for P in tree.nonzero():
        PI = prime_ideal(tree, P)
        closed = intersect(tree, closure_apply(tree, op, PI), R)
        if closed == PI:
            qspec.append(P.id)
        elif closed == R and any(quasi_closed(tree, op, L) for L in primary_samples(tree, P, depth)):
            psspec.append(P.id)
    return SpectraReport(tuple(sorted(qspec)), tuple(sorted(psspec)))


def normalize(tree: SpectrumTree, op: StableOpSpec, depth: int = 2) -> StableOpSpec:
    """The normalized stable version, rebuilt from the two spectra."""
    report = analyze(tree, op, depth)
    lam = tree.down_closure(set(report.qspec) | set(report.psspec)) | {ROOT}
    return StableOpSpec(frozenset(lam), frozenset(report.qspec), frozenset(report.psspec))


def gen_leq(tree: SpectrumTree, g1: Generator, g2: Generator) -> bool:
    """g1 ≤ g2, decided by whether R_P (for v_P) or P R_P (for d_P) is g1-closed."""
    if g2.kind == V and not tree.principal(g2.prime):
        test = localization_ring(tree, g2.prime)
    else:
        test = localization_max(tree, g2.prime)
    return gen_apply(tree, g1, test) == test


def up_closure(tree: SpectrumTree, X: Iterable[Generator]) -> frozenset:
    X = list(X)
    return frozenset(g for g in all_generators(tree) if any(gen_leq(tree, x, g) for x in X))


def up_closed_sets(tree: SpectrumTree) -> list[frozenset]:
    """Every X ⊆ generators with X = X↑, smallest first."""
    gens = all_generators(tree)
    above = {g: {h for h in gens if gen_leq(tree, g, h)} for g in gens}
    out = []
    for r in range(len(gens) + 1):
        for combo in combinations(gens, r):
            X = set(combo)
            if all(above[g] <= X for g in X):
                out.append(frozenset(X))
    return out


def psi(tree: SpectrumTree, X: Iterable[Generator]) -> StableOpSpec:
    """The operation inf X.

    Only generators at primes maximal among those of X matter, a d_P
    beating a v_P at the same prime.
    """
    X = {make_generator(tree, g.kind, g.prime) for g in X}
    if not X:
        return trivial_extension(tree)
    kinds: dict[str, set] = {}
    for g in X:
        kinds.setdefault(g.prime, set()).add(g.kind)
    top = [P for P in kinds if not any(Q != P and tree.contained(P, Q) for Q in kinds)]
    delta1 = [P for P in top if D in kinds[P]]
    delta2 = [P for P in top if D not in kinds[P]]
    return build_spec(tree, delta1, delta2)


def infimum(tree: SpectrumTree, X: Sequence[Generator], I: ModuleTuple) -> ModuleTuple:
    """Pointwise ⋂_{g ∈ X} g(I)."""
    if I.is_zero:
        return I
    result = full(tree)
    for g in X:
        result = intersect(tree, result, gen_apply(tree, g, I))
    return result


def nondivisorial_maximal(tree: SpectrumTree, lam: Iterable | None = None) -> list[str]:
    """Maximal elements of ``lam`` (default: Max R) whose localization is non-principal."""
    return [P for P in maximal_of(tree, lam) if not tree.principal(P)]


def maximal_of(tree: SpectrumTree, lam: Iterable | None = None) -> list[str]:
    if lam is None:
        return [P.id for P in tree.maximal()]
    lam = {tree.node(p).id for p in lam} - {ROOT}
    return sorted(P for P in lam if not any(Q != P and tree.contained(P, Q) for Q in lam))


def down_closed_sets(tree: SpectrumTree) -> list[frozenset]:
    nodes = [P.id for P in tree.nonzero()]
    out = []
    for r in range(len(nodes) + 1):
        for combo in combinations(nodes, r):
            S = set(combo)
            if tree.down_closure(S) == S:
                out.append(frozenset(S))
    return out


def _subsets(items):
    items = sorted(items)
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def enumerate_stable(tree: SpectrumTree, mode: str = "smstar") -> list[StableOpSpec]:
    """All stable operations: with R^★ = R (``smstar``) or all of them (``semistar``)."""
    if mode == "smstar":
        lams = [frozenset(P.id for P in tree.nonzero())]
    elif mode == "semistar":
        lams = down_closed_sets(tree)
    else:
        raise SpecError(f"unknown mode {mode!r}")
    out = []
    for lam in lams:
        tops = maximal_of(tree, lam)
        bad = nondivisorial_maximal(tree, lam)
        for sigma in _subsets(bad):
            out.append(build_spec(tree, [P for P in tops if P not in sigma], sigma))
    return out


def phi(tree: SpectrumTree, op: StableOpSpec, depth: int = 2) -> frozenset:
    """The pseudo-spectrum, as a subset of the nondivisorial maximal ideals."""
    everything = frozenset(P.id for P in tree.nonzero()) | {ROOT}
    if set(op.lam) != everything:
        raise SpecError("phi is defined on operations with R^★ = R")
    return frozenset(analyze(tree, op, depth).psspec)


def phi_inverse(tree: SpectrumTree, sigma: Iterable) -> StableOpSpec:
    sigma = {tree.node(p).id for p in sigma}
    allowed = set(nondivisorial_maximal(tree))
    if not sigma <= allowed:
        raise SpecError(f"{sorted(sigma - allowed)} are not nondivisorial maximal ideals")
    return build_spec(tree, [P.id for P in tree.maximal() if P.id not in sigma], sigma)


def op_leq(tree: SpectrumTree, op1: StableOpSpec, op2: StableOpSpec, ideals: Iterable[ModuleTuple]) -> bool:
    """op1 ≤ op2 pointwise on the given modules."""
    return all(leq(closure_apply(tree, op1, I), closure_apply(tree, op2, I)) for I in ideals)


def ops_agree(tree, op1, op2, ideals) -> bool:
    return all(closure_apply(tree, op1, I) == closure_apply(tree, op2, I) for I in ideals)


@dataclass
class CheckReport:
    name: str
    checked: int = 0
    failures: int = 0
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def record(self, passed: bool, witness=None):
        self.checked += 1
        if not passed:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = witness() if callable(witness) else witness


def check_stability(tree: SpectrumTree, op: StableOpSpec, corpus, validate: bool = True) -> dict[str, CheckReport]:
    """Stability and the semistar axioms of ``op`` on a corpus.

    ``corpus`` provides ``ideals``, ``pairs`` (index pairs) and ``shifts``
    (value vectors of elements of K).
    """
    if validate:
        check_spec(tree, op)
    ideals = corpus.ideals
    star = [closure_apply(tree, op, I) for I in ideals]
    reports = {k: CheckReport(k) for k in ("stability", "extensive", "idempotent", "monotone", "translation")}

    for I, C in zip(ideals, star):
        reports["extensive"].record(leq(I, C), lambda: {"ideal": str(I), "closure": str(C)})
        CC = closure_apply(tree, op, C)
        reports["idempotent"].record(CC == C, lambda: {"closure": str(C), "twice": str(CC)})

    for i, j in corpus.pairs:
        I, J = ideals[i], ideals[j]
        meet = intersect(tree, I, J)
        lhs = closure_apply(tree, op, meet)
        rhs = intersect(tree, star[i], star[j])
        reports["stability"].record(
            lhs == rhs,
            lambda: {"I": str(I), "J": str(J), "closure(I∩J)": str(lhs), "closure(I)∩closure(J)": str(rhs)},
        )
        reports["monotone"].record(leq(lhs, star[i]) and leq(lhs, star[j]), lambda: {"I": str(I), "J": str(J)})
        if leq(I, J):
            reports["monotone"].record(leq(star[i], star[j]), lambda: {"I": str(I), "J": str(J)})

    for k, shift in enumerate(corpus.shifts):
        I = ideals[k % len(ideals)]
        moved = closure_apply(tree, op, translate(tree, I, shift))
        expect = translate(tree, star[k % len(ideals)], shift)
        reports["translation"].record(
            moved == expect,
            lambda: {"ideal": str(I), "shift": {b: str(g) for b, g in shift.items()}, "got": str(moved), "expected": str(expect)},
        )
    return reports
