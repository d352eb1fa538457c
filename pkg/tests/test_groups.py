from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semistar.groups import (
    Q,
    Z,
    GroupError,
    OrderedGroup,
    UpSet,
    cut_add,
    cut_colon,
    cut_join,
    cut_leq,
    cut_meet,
    cut_meet_join,
    cut_member,
    cut_preimage,
    cut_project,
    cut_translate,
    cut_v_close,
    group_add,
    group_cmp,
    group_neg,
    min_positive,
)
from semistar.oracle import SampleBox, oracle_set_op, raw_member
from strategies import cuts, elements, group_and, nonempty, upsets

GZ = OrderedGroup((Z,))
GQ = OrderedGroup((Q,))
ZQ = OrderedGroup((Z, Q))
ZZ = OrderedGroup((Z, Z))


def ge(group, *b, level=0):
    return UpSet.cut(group, level, b, True)


def gt(group, *b, level=0):
    return UpSet.cut(group, level, b, False)


# -- elements --------------------------------------------------------------------


def test_cmp_examples():
    assert group_cmp(ZQ.element(1, -5), ZQ.element(0, 100)) == 1
    assert group_cmp(ZQ.element(0, 0), ZQ.element(0, 0)) == 0
    assert group_cmp(ZQ.element(0, F(1, 2)), ZQ.element(0, F(2, 3))) == -1


def test_arith_examples():
    assert group_add(ZQ.element(1, F(1, 2)), ZQ.element(2, F(1, 3))) == ZQ.element(3, F(5, 6))
    assert group_neg(ZQ.zero()) == ZQ.zero()
    assert group_add(GZ.element(2), group_neg(GZ.element(5))) == GZ.element(-3)


def test_rank_mismatch_rejected():
    with pytest.raises(GroupError):
        group_cmp(GZ.element(1), ZQ.element(1, 0))
    with pytest.raises(GroupError):
        group_add(GZ.element(1), ZQ.element(1, 0))
    with pytest.raises(GroupError):
        cut_leq(ge(GZ, 0), ge(GQ, 0))


def test_discrete_coordinates_must_be_integers():
    with pytest.raises(GroupError):
        ZQ.element(F(1, 2), 0)
    with pytest.raises(GroupError):
        GQ.element(0.5)
    assert ZQ.element(F(4, 2), F(1, 3)).coords == (F(2), F(1, 3))


def test_min_positive_examples():
    assert min_positive(ZZ, 0) == ZZ.element(0, 1)
    assert min_positive(ZQ, 0) is None
    assert min_positive(ZQ, 1) == GZ.element(1)
    with pytest.raises(GroupError):
        min_positive(ZQ, 2)


def test_quotients_are_prefixes():
    G = OrderedGroup((Z, Q, Q))
    assert G.quotient(0) == G
    assert G.quotient(2) == GZ
    with pytest.raises(GroupError):
        G.quotient(3)


# -- cuts ------------------------------------------------------------------------


def test_member_examples():
    assert cut_member(ge(GZ, 3), GZ.element(3))
    assert not cut_member(gt(ZQ, 0, 0), ZQ.zero())
    assert cut_member(ge(ZQ, 1, level=1), ZQ.element(1, -100))


def test_canonical_form_of_discrete_open_cuts():
    assert gt(GZ, 0) == ge(GZ, 1)
    assert gt(ZQ, 0, level=1) == ge(ZQ, 1, level=1)
    assert gt(ZZ, 0, 0) == ge(ZZ, 0, 1)
    assert gt(ZQ, 0, 0).closed is False


def test_leq_examples():
    assert cut_leq(ge(GZ, 5), ge(GZ, 2))
    assert cut_leq(UpSet.all(ZQ), UpSet.all(ZQ))


def test_open_cut_is_not_inside_the_height_one_cut():
    # (0, 1/6) has value > 0 but first coordinate 0 < 1
    M, P1 = gt(ZQ, 0, 0), ge(ZQ, 1, level=1)
    assert not cut_leq(M, P1)
    assert cut_leq(P1, M)
    verdict = oracle_set_op("leq", (M, P1))
    assert verdict.ok and verdict.expected is False
    assert verdict.detail["witness"] == ["0", "1/6"]


def test_meet_join_examples():
    assert cut_meet_join(ge(GZ, 2), ge(GZ, 5)) == (ge(GZ, 5), ge(GZ, 2))
    S = ge(GZ, 7)
    assert cut_meet_join(UpSet.empty(GZ), S) == (UpSet.empty(GZ), S)
    M, P1 = gt(ZQ, 0, 0), ge(ZQ, 1, level=1)
    assert cut_meet_join(M, P1) == (P1, M)


def test_add_examples():
    assert cut_add(ge(GZ, 2), ge(GZ, 3)) == ge(GZ, 5)
    M = gt(ZQ, 0, 0)
    assert cut_add(M, M) == M
    assert cut_add(ge(ZQ, 1, level=1), ge(ZQ, 0, F(1, 2))) == ge(ZQ, 1, level=1)


def test_add_absorption_and_rejection():
    S = ge(ZQ, 1, 0)
    assert cut_add(UpSet.empty(ZQ), S).is_empty
    assert cut_add(UpSet.all(ZQ), S).is_all
    with pytest.raises(GroupError):
        cut_add(UpSet.empty(ZQ), UpSet.all(ZQ))


def test_colon_examples():
    assert cut_colon(ge(GZ, 5), ge(GZ, 2)) == ge(GZ, 3)
    M = gt(GQ, 0)
    assert cut_colon(M, M) == ge(GQ, 0)
    assert cut_colon(gt(ZQ, 1, 0), ge(ZQ, 1, 0)) == gt(ZQ, 0, 0)


def test_colon_edge_cases():
    S = ge(ZQ, 1, 0)
    with pytest.raises(GroupError):
        cut_colon(S, UpSet.empty(ZQ))
    assert cut_colon(UpSet.all(ZQ), S).is_all
    assert cut_colon(UpSet.empty(ZQ), S).is_empty
    assert cut_colon(S, UpSet.all(ZQ)).is_empty


def test_mixed_level_tables():
    QQ = OrderedGroup((Q, Q))
    # divisor at a coarser level: only whole cosets strictly above fit
    assert cut_colon(ge(QQ, 1, 0), gt(QQ, 0, level=1)) == ge(QQ, 1, level=1)
    assert cut_colon(ge(QQ, 1, 0), ge(QQ, 0, level=1)) == gt(QQ, 1, level=1)
    # dividend at a coarser level keeps its flag
    assert cut_colon(gt(QQ, 0, level=1), ge(QQ, 2, 5)) == gt(QQ, -2, level=1)
    assert cut_add(gt(QQ, 0, level=1), gt(QQ, 1, 1)) == gt(QQ, 1, level=1)
    assert cut_add(ge(QQ, 0, level=1), gt(QQ, 1, 1)) == ge(QQ, 1, level=1)
    assert cut_add(gt(QQ, 0, 0), ge(QQ, 1, 1)) == gt(QQ, 1, 1)


def test_v_close_examples():
    assert cut_v_close(gt(GQ, 0)) == ge(GQ, 0)
    assert cut_v_close(ge(GZ, 3)) == ge(GZ, 3)
    P1 = UpSet.cut(ZQ, 1, (0,), False)
    assert cut_v_close(P1) == P1


def test_project_examples():
    assert cut_project(ge(ZQ, 2, F(1, 3)), 1) == ge(GZ, 2)
    assert cut_project(UpSet.cut(ZQ, 1, (0,), False), 1) == ge(GZ, 1)
    S = gt(ZQ, 1, F(1, 2))
    assert cut_project(S, 0) == S


def test_preimage_examples():
    assert cut_preimage(ge(GZ, 2), 1, ZQ) == ge(ZQ, 2, level=1)
    assert cut_preimage(gt(GZ, 0), 1, ZQ) == ge(ZQ, 1, level=1)
    assert cut_preimage(UpSet.all(GZ), 1, ZQ).is_all
    with pytest.raises(GroupError):
        cut_preimage(ge(GQ, 0), 1, ZQ)


def test_table_examples_pass_the_oracle():
    M = gt(ZQ, 0, 0)
    P1 = ge(ZQ, 1, level=1)
    cases = [
        ("member", (ge(ZQ, 1, level=1), ZQ.element(1, -100))),
        ("leq", (M, P1)),
        ("meet", (M, P1)),
        ("join", (M, P1)),
        ("add", (M, M)),
        ("add", (P1, ge(ZQ, 0, F(1, 2)))),
        ("colon", (gt(ZQ, 1, 0), ge(ZQ, 1, 0))),
        ("colon", (gt(GQ, 0), gt(GQ, 0))),
        ("v_close", (UpSet.cut(ZQ, 1, (0,), False),)),
        ("project", (ge(ZQ, 2, F(1, 3)), 1)),
        ("project", (UpSet.cut(ZQ, 1, (0,), False), 1)),
    ]
    for name, args in cases:
        assert oracle_set_op(name, args).ok, (name, args)


# -- properties ------------------------------------------------------------------


@given(group_and(upsets, upsets))
def test_chain_law(data):
    _, S, T = data
    assert cut_leq(S, T) or cut_leq(T, S)


@given(group_and(upsets, upsets))
def test_meet_and_join_are_min_and_max(data):
    _, S, T = data
    lo, hi = cut_meet(S, T), cut_join(S, T)
    assert cut_leq(lo, S) and cut_leq(lo, T) and cut_leq(S, hi) and cut_leq(T, hi)
    assert {lo, hi} <= {S, T}


@given(group_and(cuts), st.data())
def test_round_trip_through_a_quotient(data, draw):
    G, S = data
    d = draw.draw(st.integers(0, G.rank - 1))
    back = cut_preimage(cut_project(S, d), d, G)
    assert cut_leq(S, back)
    if S.level >= d:
        assert back == S


@given(group_and(upsets))
def test_v_is_a_closure(data):
    G, S = data
    V = cut_v_close(S)
    assert cut_leq(S, V)
    assert cut_v_close(V) == V
    moves = S.is_cut and S.level == 0 and not S.closed and G.factors[-1] == Q
    assert (V != S) == moves


@given(group_and(nonempty))
def test_v_agrees_with_double_colon(data):
    # S^v = (V : (V : S)) with V the valuation ring
    G, S = data
    V = UpSet.principal(G, G.zero())
    inner = cut_colon(V, S)
    if inner.is_empty:
        assert S.is_all
        return
    assert cut_colon(V, inner) == cut_v_close(S)


@given(group_and(nonempty, nonempty))
def test_add_is_commutative(data):
    _, S, T = data
    assert cut_add(S, T) == cut_add(T, S)


@given(group_and(nonempty, nonempty, nonempty))
def test_add_is_associative(data):
    _, S, T, U = data
    assert cut_add(cut_add(S, T), U) == cut_add(S, cut_add(T, U))


@given(group_and(nonempty, nonempty, nonempty))
def test_colon_is_right_adjoint_to_add(data):
    # U + T ⊆ S  iff  U ⊆ (S : T)
    _, U, T, S = data
    assert cut_leq(cut_add(U, T), S) == cut_leq(U, cut_colon(S, T))


@given(group_and(upsets, elements), st.data())
def test_translate_shifts_membership(data, draw):
    G, S, g = data
    h = draw.draw(elements(G))
    assert cut_member(cut_translate(S, g), h) == cut_member(S, h - g)


@given(group_and(elements, elements, elements))
def test_order_is_translation_invariant(data):
    _, g, h, k = data
    assert group_cmp(g, h) == group_cmp(g + k, h + k)
    assert g + (-g) == g.group.zero()


@given(group_and(upsets, upsets))
def test_canonical_cuts_are_separated_by_probes(data):
    # distinct canonical cuts disagree on a bound or bound ± ε probe point
    G, S, T = data
    box = SampleBox(radius=5, density=6)
    bounds = [X.bound.coords for X in (S, T) if X.is_cut]
    probes = box.probes(G, bounds)
    differ = any(raw_member(S, p) != raw_member(T, p) for p in probes)
    assert differ == (S != T)


BOX = SampleBox(radius=8, density=6)


@settings(max_examples=40, deadline=None)
@given(group_and(upsets, upsets, small=True))
def test_binary_ops_match_the_oracle(data):
    _, S, T = data
    for name in ("meet", "join", "leq"):
        assert oracle_set_op(name, (S, T), BOX).ok
    if not ((S.is_empty and T.is_all) or (S.is_all and T.is_empty)):
        assert oracle_set_op("add", (S, T), BOX).ok
    if not T.is_empty:
        assert oracle_set_op("colon", (S, T), BOX).ok


@settings(max_examples=40, deadline=None)
@given(group_and(upsets, small=True), st.data())
def test_unary_ops_match_the_oracle(data, draw):
    G, S = data
    assert oracle_set_op("v_close", (S,), BOX).ok
    d = draw.draw(st.integers(0, G.rank - 1))
    assert oracle_set_op("project", (S, d), BOX).ok
    small = draw.draw(upsets(G.quotient(d)))
    assert oracle_set_op("preimage", (small, d, G), BOX).ok
    g = draw.draw(elements(G))
    assert oracle_set_op("member", (S, g), BOX).ok
