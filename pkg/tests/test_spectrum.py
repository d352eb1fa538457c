from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semistar.groups import Q, Z, OrderedGroup, UpSet
from semistar.spectrum import (
    ROOT,
    IdealError,
    ModuleTuple,
    PrimeNode,
    SpectrumTree,
    colon,
    compatibility_problems,
    divisorial,
    extend,
    full,
    ideal_localize,
    ideal_ops,
    intersect,
    leq,
    localization_max,
    localization_ring,
    prime_ideal,
    primary_samples,
    primes,
    product,
    reconcile,
    shift_problems,
    translate,
    unit,
    validate_model,
    zero,
)

GZ, GQ = OrderedGroup((Z,)), OrderedGroup((Q,))
ZQ, ZZ, QQ = OrderedGroup((Z, Q)), OrderedGroup((Z, Z)), OrderedGroup((Q, Q))


def tup(**parts):
    return ModuleTuple.of(parts)


# -- models ----------------------------------------------------------------------


def test_reference_models_validate(models):
    for tree in models.values():
        assert validate_model(tree) == []


def test_node_naming(A, B, D):
    assert sorted(A.nodes) == ["0", "M1", "M2"]
    assert sorted(B.nodes) == ["0", "M", "P"]
    assert sorted(D.nodes) == ["0", "M1", "M2", "M3", "P"]
    assert D.node("P").levels == (("M1", 1), ("M2", 1))


def test_rank_path_mismatch_is_reported():
    tree = SpectrumTree([("M", ZZ)], [PrimeNode("M", (("M", 0),)), PrimeNode(ROOT, (("M", 2),))])
    diags = validate_model(tree)
    assert any("rank/path mismatch" in d for d in diags)


def test_shared_node_with_equal_quotients_is_fine():
    tree = SpectrumTree.from_shared([("M1", ZZ), ("M2", ZQ)], [("P", [("M1", 1), ("M2", 1)])])
    assert validate_model(tree) == []


def test_shared_node_with_different_quotients_is_reported():
    tree = SpectrumTree.from_shared([("M1", ZQ), ("M2", QQ)], [("P", [("M1", 1), ("M2", 1)])])
    assert any("quotient groups differ" in d for d in validate_model(tree))


def test_other_structural_problems():
    tree = SpectrumTree.from_shared([("M1", ZQ), ("M2", GQ)], [("P", [("M1", 0), ("M2", 0)])])
    assert any("shared" in d for d in validate_model(tree))
    tree = SpectrumTree.from_shared([("M1", ZQ), ("M2", GQ)], [("P", [("M1", 1), ("M2", 0)])])
    assert validate_model(tree)
    tree = SpectrumTree.from_shared([("M1", ZQ)], [("P", [("M9", 1)])])
    assert validate_model(tree)


def test_prime_table(A, B):
    rows = {r.node: r for r in primes(A)}
    assert rows["M1"].localized_max_principal and rows["M1"].divisorial_over_R
    assert not rows["M2"].localized_max_principal and not rows["M2"].divisorial_over_R
    rows = {r.node: r for r in primes(B)}
    assert rows["P"].localized_max_principal
    assert not rows["M"].localized_max_principal
    assert all(r.branched for r in primes(B))


def test_divisoriality_matches_the_double_colon(models):
    for tree in models.values():
        for row in primes(tree):
            if row.maximal:
                assert divisorial(tree, prime_ideal(tree, row.node)) == row.divisorial_over_R


# -- ideals ----------------------------------------------------------------------


def test_intersection_of_R_with_itself(A):
    R = unit(A)
    assert intersect(A, R, R) == R


def test_colon_of_the_nonprincipal_maximal_ideal(A):
    M2 = prime_ideal(A, "M2")
    assert colon(A, M2, M2) == unit(A)


def test_product_of_principal_tuples(A):
    I = tup(M1=UpSet.principal(GZ, 2), M2=UpSet.principal(GQ, 0))
    J = tup(M1=UpSet.principal(GZ, 3), M2=UpSet.principal(GQ, 0))
    assert product(A, I, J) == tup(M1=UpSet.principal(GZ, 5), M2=UpSet.principal(GQ, 0))


def test_colon_by_zero_rejected(A):
    with pytest.raises(IdealError):
        colon(A, unit(A), zero(A))
    with pytest.raises(ValueError):
        ideal_ops(A, unit(A), unit(A), "xor")


def test_localization_examples(A, C):
    assert ideal_localize(A, unit(A), "M2") == UpSet.principal(GQ, 0)
    assert ideal_localize(A, prime_ideal(A, "M2"), "M2") == UpSet.cut(GQ, 0, (0,), False)
    assert ideal_localize(C, prime_ideal(C, "P"), "P") == UpSet.principal(GZ, 1)
    with pytest.raises(IdealError):
        ideal_localize(A, zero(A), "M1")


def test_prime_ideal_examples(A, B):
    assert prime_ideal(A, "M2") == tup(M1=UpSet.principal(GZ, 0), M2=UpSet.cut(GQ, 0, (0,), False))
    assert prime_ideal(B, "P") == tup(M=UpSet.cut(ZQ, 1, (0,), False))
    with pytest.raises(IdealError):
        prime_ideal(A, ROOT)


def test_primary_samples_examples(A, B):
    got = [I["M2"] for I in primary_samples(A, "M2", 2)]
    want = [UpSet.cut(GQ, 0, (0,), False)] + [
        UpSet.cut(GQ, 0, (n,), closed) for n in (1, 2) for closed in (True, False)
    ]
    assert got == want
    assert all(I["M1"] == UpSet.principal(GZ, 0) for I in primary_samples(A, "M2", 2))
    got = primary_samples(B, "P", 1)
    # over the discrete quotient {> 0} = {>= 1}, so P is the first sample
    assert got == [
        tup(M=UpSet.cut(ZQ, 1, (1,), True)),
        tup(M=UpSet.cut(ZQ, 1, (2,), True)),
    ]
    assert got[0] == prime_ideal(B, "P")


def test_primary_samples_have_the_right_radical(models):
    for tree in models.values():
        for P in tree.nonzero():
            for L in primary_samples(tree, P, 3):
                holders = {Q.id for Q in tree.nonzero() if leq(L, prime_ideal(tree, Q))}
                assert holders == {P.id} | {Q.id for Q in tree.above(P)}


def test_primary_samples_form_a_chain(models):
    for tree in models.values():
        for P in tree.nonzero():
            samples = primary_samples(tree, P, 3)
            for X in samples:
                for Y in samples:
                    assert leq(X, Y) or leq(Y, X)


def test_prime_localized_above_and_elsewhere(models):
    for tree in models.values():
        for P in tree.nonzero():
            PI = prime_ideal(tree, P)
            for Qn in tree.nonzero():
                loc = ideal_localize(tree, PI, Qn)
                G = tree.quotient(Qn)
                if tree.contained(P, Qn):
                    depth = tree.depth(P, Qn.levels[0][0]) - Qn.levels[0][1]
                    assert loc == UpSet.cut(G, depth, G.quotient(depth).zero(), False)
                else:
                    assert loc == UpSet.principal(G, G.zero())


def test_localization_rings(C):
    assert localization_ring(C, "M1") == tup(M1=UpSet.principal(ZZ, 0, 0), M2=UpSet.cut(ZZ, 1, (0,), True))
    assert localization_max(C, "P") == tup(M1=UpSet.cut(ZZ, 1, (1,), True), M2=UpSet.cut(ZZ, 1, (1,), True))


def test_finite_character(models, corpora):
    for name, tree in models.items():
        for I in corpora[name].ideals:
            rebuilt = full(tree)
            for M in tree.maximal():
                rebuilt = intersect(tree, rebuilt, extend(tree, ideal_localize(tree, I, M), M))
            assert rebuilt == I


def test_incompatible_tuples_are_detected(C):
    I = tup(M1=UpSet.principal(ZZ, 0, 0), M2=UpSet.principal(ZZ, 3, 0))
    assert compatibility_problems(C, I)
    fixed = reconcile(C, dict(I.items()))
    assert not compatibility_problems(C, fixed)
    assert leq(fixed, I)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_ideal_ops_preserve_compatibility(models, corpora, data):
    name = data.draw(st.sampled_from("ABCD"))
    tree, ideals = models[name], corpora[name].ideals
    I = data.draw(st.sampled_from(ideals))
    J = data.draw(st.sampled_from(ideals))
    for op in ("intersect", "sum", "product", "colon"):
        out = ideal_ops(tree, I, J, op)
        assert compatibility_problems(tree, out) == []


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_colon_is_the_largest_quotient(models, corpora, data):
    # U J ⊆ I  iff  U ⊆ (I : J), checked on corpus modules
    name = data.draw(st.sampled_from("ABCD"))
    tree, ideals = models[name], corpora[name].ideals
    I, J, U = (data.draw(st.sampled_from(ideals)) for _ in range(3))
    assert leq(product(tree, U, J), I) == leq(U, colon(tree, I, J))


def test_translation(models, corpora):
    for name, tree in models.items():
        c = corpora[name]
        for shift in c.shifts:
            assert shift_problems(tree, shift) == []
            back = {b: -g for b, g in shift.items()}
            I = c.ideals[3]
            assert translate(tree, translate(tree, I, shift), back) == I
    bad = {"M1": ZZ.element(1, 0), "M2": ZZ.element(2, 0)}
    assert shift_problems(models["C"], bad)
    with pytest.raises(IdealError):
        translate(models["C"], unit(models["C"]), bad)


def test_shared_bounds_are_exact(D):
    I = reconcile(D, {"M1": UpSet.principal(ZZ, 1, 5), "M2": UpSet.principal(ZQ, 1, F(1, 3)), "M3": UpSet.all(GQ)})
    assert I["M1"] == UpSet.principal(ZZ, 1, 5)
    assert I["M3"].is_all
