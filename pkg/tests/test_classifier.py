from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rokhlin.action import ActionSpec, IntegerPolynomial, LevelRep, MultVector, Telescope, apply_telescope, model_action
from rokhlin.classifier import (
    Outcome,
    classify,
    classify_strict,
    classify_tracial,
    greedy_cuts,
    greedy_telescope,
    near_regular_block,
    near_regular_decompose,
    rank1_certificate,
    regular_multiple_check,
    subgroup_consistency,
    zero_pattern,
)
from rokhlin.cyclotomic import CyclotomicNumber
from rokhlin.errors import HorizonExhaustedError, InternalInconsistencyError
from rokhlin.groups import ClassFunction, make_cyclic, make_table

import corpus

Z2, Z3, Z4, Z6 = (make_cyclic(n) for n in (2, 3, 4, 6))


def mv(group, mults):
    return LevelRep(group, sum(mults), MultVector(tuple(mults)))


def cf(group, values):
    return ClassFunction(group, tuple(CyclotomicNumber.coerce(v) for v in values))


def periodic(group, *levels, prefix=()):
    return ActionSpec(group, tuple(mv(group, m) for m in prefix), tuple(mv(group, m) for m in levels))


def test_zero_pattern_examples():
    pat = zero_pattern(periodic(Z3, (1, 1, 1)))
    assert all(p.zeros == [1] for p in pat.classes.values())
    spec = periodic(Z2, (2, 1))
    pat = zero_pattern(spec)
    assert pat.classes[1].zeros == [] and pat.classes[1].below_one == [1]
    assert spec.level(1).normalized_character(1) == F(1, 3)
    pat = zero_pattern(periodic(Z2, (2, 0)))
    assert pat.classes[1].zeros == [] and pat.classes[1].below_one == []


def test_strict_examples():
    v = classify(model_action(Z2, [1], [0], period=1))
    assert v.outcome == Outcome.STRICT
    assert v.strict.telescope == Telescope((1,), (1,))
    v = classify(periodic(Z2, (2, 0), (1, 1)))
    assert v.outcome == Outcome.STRICT
    assert v.strict.telescope.cut_list(7) == [1, 3, 5, 7]
    v = classify(periodic(Z2, (2, 1)))
    assert v.strict.holds is False and v.strict.obstruction == 1
    assert v.outcome == Outcome.TRACIAL_ONLY


def test_greedy_examples():
    assert greedy_telescope(periodic(Z3, (1, 1, 1))).cut_list(5) == [1, 2, 3, 4, 5]
    assert greedy_telescope(periodic(Z2, (1, 1), (2, 0))).cut_list(6) == [1, 2, 4, 6]
    assert greedy_telescope(periodic(Z2, (2, 0), (1, 1))).cut_list(6) == [1, 3, 5]
    cuts, failure = greedy_cuts(periodic(Z2, (2, 1)), 10)
    assert cuts == [1] and failure == 1
    finite = ActionSpec(Z2, (mv(Z2, (1, 1)), mv(Z2, (2, 1))))
    with pytest.raises(HorizonExhaustedError):
        greedy_telescope(finite)


def test_greedy_on_trivial_group_advances():
    z1 = make_cyclic(1)
    spec = ActionSpec(z1, (mv(z1, (2,)), mv(z1, (3,))))
    assert greedy_telescope(spec).cuts == (1, 2)
    assert classify(spec).outcome == Outcome.STRICT


def test_tracial_examples():
    t = classify_tracial(periodic(Z2, (2, 1)))
    assert t.holds and t.decay[1].period_modulus_sq == F(1, 9)
    t = classify_tracial(periodic(Z2, (3, 0)))
    assert t.holds is False and t.obstruction == 1
    assert all(v == 1 for v in t.obstruction_values)
    v = classify(model_action(Z2, IntegerPolynomial((0, 0, 1)), IntegerPolynomial.constant(1)))
    assert v.outcome == Outcome.TRACIAL_ONLY


def test_model_tail_rule():
    def outcome(r, s):
        return classify(model_action(Z3, IntegerPolynomial(r), IntegerPolynomial(s))).outcome

    assert outcome((1,), ()) == Outcome.STRICT
    assert outcome((), (1,)) == Outcome.NEITHER
    assert outcome((1,), (0, 1)) == Outcome.TRACIAL_ONLY
    assert outcome((1,), (0, 0, 1)) == Outcome.NEITHER


def test_finite_specs():
    tiled = ActionSpec(Z2, (mv(Z2, (1, 1)), mv(Z2, (2, 0)), mv(Z2, (1, 1))))
    v = classify(tiled)
    assert v.outcome == Outcome.STRICT and v.strict.telescope.cuts == (1, 2)
    v = classify(ActionSpec(Z2, (mv(Z2, (1, 1)), mv(Z2, (2, 1)))))
    assert v.outcome == Outcome.INCONCLUSIVE and v.strict.failure_position == 2


def test_regular_multiple_check_examples():
    assert regular_multiple_check(Z3.regular_character, 3) == (True, 1)
    assert regular_multiple_check(cf(Z2, [4, 0]), 4) == (True, 2)
    assert regular_multiple_check(cf(Z2, [3, 1]), 3) == (False, None)
    with pytest.raises(InternalInconsistencyError):
        regular_multiple_check(cf(Z2, [3, 0]), 3)


def test_near_regular_examples():
    sp = near_regular_decompose(Z3.regular_character)
    assert sp.copies == 1 and sp.remainder_dim == 0
    sp = near_regular_decompose(cf(Z2, [4, 2]), F(1, 100))
    assert sp.multiplicities == (3, 1) and sp.copies == 1
    assert [complex(v) for v in sp.remainder.values] == [2, 2]
    assert sp.ratio == F(1, 2) and sp.below_epsilon is False
    spec = periodic(Z2, (2, 1))
    sp = near_regular_block(spec, 1, 4)
    # (2,1)^4 has multiplicities (41, 40)
    assert sp.multiplicities == (41, 40) and sp.ratio == F(1, 81)


def test_near_regular_on_table_group():
    s3 = make_table([1, 3, 2], 6, [(1, [1, 1, 1]), (1, [1, -1, 1]), (2, [2, 0, -1])])
    chi = s3.regular_character * 2 + s3.irreducibles[0]
    sp = near_regular_decompose(chi)
    assert sp.copies == 2 and sp.remainder_dim == 1 and sp.ratio == F(1, 13)


def test_rank1_examples():
    spec = periodic(Z2, (2, 1))
    m, _, gap = rank1_certificate(spec, 1, F(1, 100))
    assert (m, gap) == (4, F(1, 162))
    assert rank1_certificate(spec, 1, F(1, 100))[0] > 3  # gap at m = 3 is 1/54
    m, _, gap = rank1_certificate(periodic(Z2, (1, 1)), 1, F(1, 100))
    assert (m, gap) == (1, 0)
    # Z/3 with trace vector (1/2, 1/2, 0): |lambda| = 1/2 decay
    m, T, gap = rank1_certificate(periodic(Z3, (1, 0, 1)), 1, F(1, 10))
    assert gap < F(1, 10)
    prev = rank1_certificate(periodic(Z3, (1, 0, 1)), 1, F(1, 10), horizon=m)[2]
    assert prev == gap
    with pytest.raises(HorizonExhaustedError):
        rank1_certificate(periodic(Z3, (1, 0, 1)), 1, F(1, 10), horizon=m - 1)


def test_classify_attaches_rank1():
    v = classify(periodic(Z2, (2, 1)))
    assert v.rank1 == {"n": 1, "epsilon": F(1, 100), "m": 4, "gap": F(1, 162)}


def test_subgroup_consistency_examples():
    rep = subgroup_consistency(periodic(Z4, (1, 1, 1, 1)))
    assert rep["outcome"] == "Strict"
    assert {s["order"]: s["outcome"] for s in rep["subgroups"]}[2] == "Strict"
    rep = subgroup_consistency(periodic(Z6, (2, 1, 1, 1, 1, 1)))
    assert rep["outcome"] == "TracialOnly"
    by_order = {s["order"]: s["outcome"] for s in rep["subgroups"]}
    assert by_order[2] in ("TracialOnly", "Strict") and by_order[3] in ("TracialOnly", "Strict")
    rep = subgroup_consistency(periodic(Z4, (2, 0, 0, 0)))
    assert rep["outcome"] == "Neither" and rep["consistent"]


def test_strict_implies_tracial_on_corpus():
    for spec in corpus.periodic_spec_corpus(seed=9, count=25, max_order=6, max_dim=5):
        v = classify(spec)
        if v.outcome == Outcome.STRICT:
            assert classify_tracial(spec).holds
        if classify_strict(spec).holds:
            assert v.outcome == Outcome.STRICT


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([Z2, Z3, Z4]), st.data())
def test_verdict_invariant_under_telescoping(group, data):
    n = group.order
    lv = st.lists(st.integers(0, 2), min_size=n, max_size=n).filter(any)
    levels = data.draw(st.lists(lv, min_size=1, max_size=3))
    spec = periodic(group, *levels)
    k = data.draw(st.integers(1, 3))
    tele = apply_telescope(spec, Telescope((1,), (k,)))
    assert classify(tele).outcome == classify(spec).outcome
