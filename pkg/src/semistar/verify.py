"""The invariant suites behind ``semistar verify``.

Each suite is a :class:`CheckReport` with a check count, a failure count
and the first counterexample.  Everything is driven by a seeded corpus, so
two runs with the same flags produce identical reports.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product as iproduct

from .closure import (
    D,
    CheckReport,
    StableOpSpec,
    all_generators,
    analyze,
    check_stability,
    closure_apply,
    enumerate_stable,
    infimum,
    nondivisorial_maximal,
    normalize,
    phi,
    phi_inverse,
    psi,
    raw_spec,
    spec_problems,
    up_closed_sets,
    up_closure,
    maximal_of,
)
from .corpus import Corpus, build_corpus
from .groups import Q, OrderedGroup, UpSet
from .oracle import SampleBox, oracle_closure, oracle_set_op
from .spectrum import (
    ModuleTuple,
    SpectrumTree,
    intersect,
    leq,
    prime_ideal,
    primary_samples,
    unit,
)

RAW_LIMIT = 64


def contains_one(I: ModuleTuple) -> bool:
    """1 ∈ I, i.e. the value 0 lies in every component."""
    return all(S.is_all or (S.is_cut and S.group.zero() in S) for _, S in I.items())


def raw_ops(tree: SpectrumTree, seed: int = 0) -> list[StableOpSpec]:
    """Operations written down from arbitrary generator subsets, unnormalized."""
    gens = all_generators(tree)
    subsets = [frozenset(c) for r in range(len(gens) + 1) for c in combinations(gens, r)]
    if len(subsets) > RAW_LIMIT:
        rng = random.Random(seed)
        subsets = sorted(rng.sample(subsets, RAW_LIMIT), key=lambda s: sorted(s))
    out = []
    for X in subsets:
        d1 = [g.prime for g in X if g.kind == D]
        d2 = [g.prime for g in X if g.kind != D]
        op = raw_spec(tree, d1, set(d2) - set(d1))
        if op not in out:
            out.append(op)
    return out


def _op(op: StableOpSpec) -> dict:
    return {"lambda": sorted(op.lam), "delta1": sorted(op.delta1), "delta2": sorted(op.delta2)}


def _closures(tree, op, ideals):
    return tuple(closure_apply(tree, op, I) for I in ideals)


def _pointwise_leq(a, b) -> bool:
    return all(leq(x, y) for x, y in zip(a, b))


# -- individual suites -------------------------------------------------------------


def suite_prime_closures(tree, ops) -> CheckReport:
    rep = CheckReport("prime_closures")
    R = unit(tree)
    for op in ops:
        for P in tree.nonzero():
            PI = prime_ideal(tree, P)
            c = intersect(tree, closure_apply(tree, op, PI), R)
            rep.record(c in (PI, R), lambda: {"op": _op(op), "prime": P.id, "closure∩R": str(c)})
    return rep


def suite_spectra_structure(tree, ops, depth) -> CheckReport:
    rep = CheckReport("spectra_structure")
    for op in ops:
        report = analyze(tree, op, depth)
        q, ps = set(report.qspec), set(report.psspec)
        w = lambda: {"op": _op(op), "qspec": sorted(q), "psspec": sorted(ps)}
        rep.record(tree.down_closure(q) == q, w)
        rep.record(not (q & ps), w)
        rep.record(all(not tree.comparable(a, b) for a, b in combinations(sorted(ps), 2)), w)
        rep.record(all(not tree.principal(P) for P in ps), w)
        rep.record(all(Q.id in q for P in ps for Q in tree.below(P)), w)
        lam = tree.down_closure(q | ps)
        rep.record(ps <= set(maximal_of(tree, lam)), w)
    return rep


def suite_normalization(tree, ops, ideals, depth) -> tuple[CheckReport, CheckReport]:
    dom = CheckReport("normalize_dominates")
    idem = CheckReport("normalize_idempotent")
    for op in ops:
        norm = normalize(tree, op, depth)
        idem.record(normalize(tree, norm, depth) == norm, lambda: {"op": _op(op), "normalized": _op(norm)})
        for I in ideals:
            a, b = closure_apply(tree, op, I), closure_apply(tree, norm, I)
            dom.record(leq(a, b) and a == b, lambda: {"op": _op(op), "ideal": str(I), "op(I)": str(a), "norm(I)": str(b)})
    return dom, idem


def suite_fixed_point(tree, ops, depth) -> CheckReport:
    rep = CheckReport("normalize_fixed_point")
    for op in ops:
        norm = normalize(tree, op, depth)
        rep.record(norm == op, lambda: {"op": _op(op), "normalized": _op(norm)})
    return rep


def suite_primary_agreement(tree, ops, depth, sample_depth=3) -> CheckReport:
    rep = CheckReport("primary_agreement")
    R = unit(tree)
    for op in ops:
        norm = normalize(tree, op, depth)
        for P in tree.nonzero():
            for L in primary_samples(tree, P, sample_depth):
                a = intersect(tree, closure_apply(tree, op, L), R)
                b = intersect(tree, closure_apply(tree, norm, L), R)
                rep.record(a == b, lambda: {"op": _op(op), "sample": str(L), "closure∩R": str(a), "normalized∩R": str(b)})
    return rep


def suite_unit_membership(tree, ops, proper, depth) -> CheckReport:
    rep = CheckReport("unit_membership")
    for op in ops:
        norm = normalize(tree, op, depth)
        for I in proper:
            a = contains_one(closure_apply(tree, op, I))
            b = contains_one(closure_apply(tree, norm, I))
            rep.record(a == b, lambda: {"op": _op(op), "ideal": str(I), "1∈closure": a, "1∈normalized": b})
    return rep


def suite_psi(tree, ideals) -> tuple[CheckReport, ...]:
    inf_rep = CheckReport("psi_infimum")
    up_rep = CheckReport("psi_up_closure")
    inj = CheckReport("psi_injective")
    order = CheckReport("psi_order")
    gens = all_generators(tree)
    subsets = [frozenset(c) for r in range(1, len(gens) + 1) for c in combinations(gens, r)]
    if len(subsets) > RAW_LIMIT:
        subsets = subsets[:RAW_LIMIT]
    for X in subsets:
        op = psi(tree, X)
        upX = up_closure(tree, X)
        up_rep.record(psi(tree, upX) == op, lambda: {"X": sorted(map(str, X)), "psi": _op(op)})
        for I in ideals:
            a, b = closure_apply(tree, op, I), infimum(tree, sorted(X), I)
            inf_rep.record(a == b, lambda: {"X": sorted(map(str, X)), "ideal": str(I), "psi": str(a), "inf": str(b)})
    sets = [X for X in up_closed_sets(tree) if X]
    vectors = {X: _closures(tree, psi(tree, X), ideals) for X in sets}
    for X, Y in combinations(sets, 2):
        inj.record(vectors[X] != vectors[Y], lambda: {"X": sorted(map(str, X)), "Y": sorted(map(str, Y))})
    for X, Y in iproduct(sets, sets):
        lhs = X >= Y
        rhs = _pointwise_leq(vectors[X], vectors[Y])
        order.record(lhs == rhs, lambda: {"X": sorted(map(str, X)), "Y": sorted(map(str, Y)), "X⊇Y": lhs, "psi(X)≤psi(Y)": rhs})
    return inf_rep, up_rep, inj, order


def suite_phi(tree, ideals, depth) -> tuple[CheckReport, CheckReport]:
    trip = CheckReport("phi_roundtrip")
    order = CheckReport("phi_order")
    bad = nondivisorial_maximal(tree)
    sigmas = [frozenset(c) for r in range(len(bad) + 1) for c in combinations(bad, r)]
    ops = {S: phi_inverse(tree, S) for S in sigmas}
    for S, op in ops.items():
        back = phi(tree, op, depth)
        trip.record(back == S, lambda: {"sigma": sorted(S), "phi": sorted(back)})
    for op in enumerate_stable(tree, "smstar"):
        again = phi_inverse(tree, phi(tree, op, depth))
        trip.record(again == op, lambda: {"op": _op(op), "roundtrip": _op(again)})
    vectors = {S: _closures(tree, op, ideals) for S, op in ops.items()}
    for S, T in iproduct(sigmas, sigmas):
        lhs = S <= T
        rhs = _pointwise_leq(vectors[S], vectors[T])
        order.record(lhs == rhs, lambda: {"sigma1": sorted(S), "sigma2": sorted(T), "⊆": lhs, "≤": rhs})
    return trip, order


def suite_classification(tree, ideals) -> tuple[CheckReport, CheckReport, CheckReport]:
    count = CheckReport("classification_count")
    distinct = CheckReport("enumeration_distinct")
    spectral = CheckReport("spectral_criterion")
    sm = enumerate_stable(tree, "smstar")
    semi = enumerate_stable(tree, "semistar")
    k = len(nondivisorial_maximal(tree))
    count.record(len(sm) == 2 ** k, {"smstar": len(sm), "expected": 2 ** k})
    ups = up_closed_sets(tree)
    count.record(len(semi) == len(ups), {"semistar": len(semi), "up_closed_generator_sets": len(ups)})
    vectors = [_closures(tree, op, ideals) for op in semi]
    for (i, a), (j, b) in combinations(enumerate(vectors), 2):
        distinct.record(a != b, lambda: {"op1": _op(semi[i]), "op2": _op(semi[j])})
    all_principal = all(tree.principal(P) for P in tree.nonzero())
    for op in semi:
        norm = normalize(tree, op)
        if all_principal:
            spectral.record(not norm.delta2, lambda: {"op": _op(op)})
        spectral.record(norm.delta2 <= set(nondivisorial_maximal(tree, norm.lam)), lambda: {"op": _op(op)})
    return count, distinct, spectral


def sample_cuts(group: OrderedGroup) -> list[UpSet]:
    """A small fixed family of cuts at every level, plus EMPTY and ALL."""
    out = [UpSet.empty(group), UpSet.all(group)]
    for level in range(group.rank):
        quotient = group.quotient(level)
        values = []
        for f in quotient.factors:
            values.append((Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1)) if f == Q else (Fraction(-1), Fraction(0), Fraction(1)))
        for bound in iproduct(*values):
            for closed in (True, False):
                S = UpSet.cut(group, level, bound, closed)
                if S not in out:
                    out.append(S)
    return out


def suite_oracle_cuts(tree, box) -> CheckReport:
    rep = CheckReport("oracle_cut_algebra")
    seen = set()
    for _, g in tree.branches:
        for depth in range(g.rank):
            G = g.quotient(depth)
            if G in seen:
                continue
            seen.add(G)
            cuts = sample_cuts(G)
            jobs = [("preimage", (T, d, G)) for d in range(1, G.rank) for T in sample_cuts(G.quotient(d))]
            for S in cuts:
                jobs.append(("v_close", (S,)))
                jobs += [("project", (S, d)) for d in range(G.rank)]
                for T in cuts:
                    jobs += [("meet", (S, T)), ("join", (S, T)), ("leq", (S, T))]
                    if not ((S.is_empty and T.is_all) or (S.is_all and T.is_empty)):
                        jobs.append(("add", (S, T)))
                    if not T.is_empty:
                        jobs.append(("colon", (S, T)))
            for name, args in jobs:
                v = oracle_set_op(name, args, box)
                rep.record(v.ok, lambda: {**v.as_dict(), "inputs": [str(a) for a in args]})
    return rep


def suite_oracle_closure(tree, ops, ideals, box) -> CheckReport:
    rep = CheckReport("oracle_closure")
    for op in ops:
        for I in ideals:
            v = oracle_closure(tree, op, I, box)
            rep.record(v.ok, lambda: {**v.as_dict(), "op": _op(op), "ideal": str(I)})
    return rep


# -- driver ------------------------------------------------------------------------


def run_suites(
    tree: SpectrumTree,
    seed: int = 0,
    cases: int = 200,
    box: SampleBox = SampleBox(),
    depth: int = 2,
    extra: StableOpSpec | None = None,
    corpus: Corpus | None = None,
) -> dict[str, CheckReport]:
    """Run every suite; ``extra`` is an operation taken as given (unchecked)."""
    corpus = corpus or build_corpus(tree, seed=seed, cases=cases)
    ideals = corpus.ideals
    enumerated = []
    for op in enumerate_stable(tree, "smstar") + enumerate_stable(tree, "semistar"):
        if op not in enumerated:
            enumerated.append(op)
    raw = raw_ops(tree, seed)
    suites: dict[str, CheckReport] = {}

    def put(*reports):
        for r in reports:
            suites[r.name] = r

    if extra is not None:
        gate = CheckReport("op_constraints")
        problems = spec_problems(tree, extra)
        gate.record(not problems, {"op": _op(extra), "problems": problems})
        put(gate)

    checked = enumerated + ([extra] if extra is not None and extra not in enumerated else [])
    axioms: dict[str, CheckReport] = {}
    for op in checked:
        for name, r in check_stability(tree, op, corpus, validate=False).items():
            agg = axioms.setdefault(name, CheckReport(name))
            agg.checked += r.checked
            agg.failures += r.failures
            if agg.counterexample is None and r.counterexample is not None:
                agg.counterexample = {"op": _op(op), **r.counterexample}
    put(*axioms.values())

    put(suite_prime_closures(tree, checked + raw))
    put(suite_spectra_structure(tree, checked + raw, depth))
    put(*suite_normalization(tree, raw + ([extra] if extra else []), ideals, depth))
    put(suite_fixed_point(tree, checked, depth))
    put(suite_primary_agreement(tree, raw + checked, depth))
    put(suite_unit_membership(tree, raw + checked, corpus.proper(tree), depth))
    put(*suite_psi(tree, ideals))
    put(*suite_phi(tree, ideals, depth))
    put(*suite_classification(tree, ideals))
    put(suite_oracle_cuts(tree, box))
    put(suite_oracle_closure(tree, checked, ideals, box))
    return suites


def summary(suites: dict[str, CheckReport]) -> dict:
    return {
        "ok": all(r.ok for r in suites.values()),
        "suites": {
            name: {"checked": r.checked, "failures": r.failures, "counterexample": r.counterexample}
            for name, r in sorted(suites.items())
        },
    }
