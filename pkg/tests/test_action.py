from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rokhlin.action import (
    ActionSpec,
    CharValues,
    ExplicitMatrices,
    IntegerPolynomial,
    LevelRep,
    ModelLevel,
    MultVector,
    Telescope,
    apply_telescope,
    block_character,
    block_multiplicities,
    character_of,
    model_action,
    restrict_level,
    restrict_to_subgroup,
    tensor_levels,
)
from rokhlin.cyclotomic import CyclotomicNumber
from rokhlin.errors import (
    InvariantViolationError,
    OutOfRangeError,
    SpecValidationError,
)
from rokhlin.groups import ClassFunction, make_abelian, make_cyclic, make_table

import corpus
import oracles

Z2 = make_cyclic(2)
Z4 = make_cyclic(4)


def mv(group, mults):
    return LevelRep(group, sum(mults), MultVector(tuple(mults)))


def vals(chi):
    return [complex(v) for v in chi.values]


def test_character_examples():
    assert vals(character_of(mv(Z2, (2, 1)))) == [3, 1]
    reg = mv(Z4, (1, 1, 1, 1))
    assert character_of(reg) == Z4.regular_character
    triv = mv(Z4, (3, 0, 0, 0))
    assert character_of(triv) == Z4.constant(3)


def test_explicit_character_and_inexact_input():
    lv = LevelRep(Z2, 3, ExplicitMatrices((np.diag([1.0, 1.0, -1.0]),)))
    assert vals(lv.character) == [3, 1]
    assert lv.multiplicities == (2, 1)
    c, s = np.cos(0.3), np.sin(0.3)
    with pytest.raises(InvariantViolationError):
        LevelRep(Z2, 2, ExplicitMatrices((np.array([[c, -s], [s, c]]),)))
    z3 = make_cyclic(3)
    u = np.diag([1.0, np.exp(2j * np.pi / 3) * np.exp(1e-6j)])
    with pytest.raises(InvariantViolationError):
        LevelRep(z3, 2, ExplicitMatrices((u,)))


def test_level_invariants():
    with pytest.raises(InvariantViolationError):
        LevelRep(Z2, 4, MultVector((2, 1)))
    with pytest.raises(InvariantViolationError):
        LevelRep(Z2, 4, ModelLevel(1, 1, None))
    with pytest.raises(InvariantViolationError):
        LevelRep(Z2, 2, CharValues(ClassFunction(Z2, (CyclotomicNumber.rational(2), CyclotomicNumber.rational(3)))))


def test_block_character_examples():
    spec = ActionSpec(Z2, (mv(Z2, (2, 1)), mv(Z2, (2, 1))))
    chi, d = block_character(spec, 1, 2)
    assert vals(chi) == [9, 1] and d == 9
    spec = ActionSpec(Z2, (mv(Z2, (2, 0)), mv(Z2, (1, 1))))
    chi, d = block_character(spec, 1, 2)
    assert vals(chi) == [4, 0]
    chi, _ = block_character(spec, 2, 2)
    assert chi == Z2.regular_character
    with pytest.raises(OutOfRangeError):
        block_character(spec, 2, 3)


def test_model_action_examples():
    spec = model_action(Z2, [1, 1], [0, 0], period=1)
    assert spec.level(5).character == Z2.regular_character
    spec = model_action(Z2, IntegerPolynomial((0, 1)), IntegerPolynomial.constant(1))
    assert [spec.level(i).dim for i in (1, 2, 3)] == [3, 5, 7]
    spec = model_action(Z4, [0], [1], period=1)
    assert spec.level(3).character == Z4.constant(1)
    with pytest.raises(InvariantViolationError):
        model_action(Z2, [0], [0])


def test_model_level_character():
    lv = LevelRep(Z4, 9, ModelLevel(2, 1, MultVector((0, 1, 0, 0))))
    rem = mv(Z4, (0, 1, 0, 0)).character
    chi = lv.character
    assert chi(0) == 9
    assert all(chi(h) == rem(h) for h in range(1, 4))


def test_telescope_examples():
    spec = ActionSpec(Z2, (mv(Z2, (2, 0)), mv(Z2, (1, 1))))
    assert apply_telescope(spec, Telescope.identity()) is spec
    merged = apply_telescope(spec, Telescope((1,)))
    assert len(merged.prefix) == 1 and vals(merged.level(1).character) == [4, 0]
    periodic = ActionSpec(Z2, (), (mv(Z2, (2, 1)), mv(Z2, (1, 0))))
    t = apply_telescope(periodic, Telescope((1,), (2,)))
    assert t.period == 1 and t.level(1).multiplicities == (2, 1)
    with pytest.raises(SpecValidationError):
        apply_telescope(periodic, Telescope((1, 2)))
    with pytest.raises(ValueError):
        Telescope((2, 3))


def test_telescope_preserves_block_characters():
    spec = corpus.periodic_spec_corpus(seed=5, count=1, max_order=4, max_dim=3)[0]
    t = Telescope((1, 2, 4), (3,))
    tele = apply_telescope(spec, t)
    for i, (a, b) in enumerate(t.blocks(20), start=1):
        assert tele.level(i).character == block_character(spec, a, b)[0]


def test_restriction_examples():
    reg4 = ActionSpec(Z4, (mv(Z4, (1, 1, 1, 1)),))
    sub = restrict_to_subgroup(reg4, 2)
    assert sub.group.order == 2 and sub.level(1).multiplicities == (2, 2)
    trivial = restrict_to_subgroup(reg4, 1)
    assert trivial.group.order == 1 and trivial.level(1).character == trivial.group.constant(4)
    with pytest.raises(SpecValidationError):
        restrict_to_subgroup(reg4, 3)
    g = make_abelian([2, 2])
    reg = mv(g, (1, 1, 1, 1))
    h = restrict_level(reg, g.index((1, 1)))
    assert h.multiplicities == (2, 2)


def test_restriction_commutes_with_block_character():
    for spec in corpus.finite_spec_corpus(seed=7, count=15, levels=3, max_dim=3):
        if spec.group.order < 2:
            continue
        g = 1
        sub = restrict_to_subgroup(spec, list(spec.group.element(g)))
        chi, d = block_character(spec, 1, 3)
        chi_h, d_h = block_character(sub, 1, 3)
        k = sub.group.order
        assert d == d_h
        assert all(chi_h(j) == chi(spec.group.power(g, j)) for j in range(k))


def test_tensor_of_explicit_levels_matches_kron_traces():
    rng = np.random.default_rng(11)
    g = make_abelian([2, 2])
    a = corpus.random_level(rng, g, 3, ("matrices",))
    b = corpus.random_level(rng, g, 3, ("matrices",))
    t = tensor_levels([a, b])
    ma, mb = oracles.element_matrices(a), oracles.element_matrices(b)
    for h in range(g.order):
        assert abs(np.trace(np.kron(ma[h], mb[h])) - complex(t.character(h))) < 1e-9
    assert t.character == a.character * b.character


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(corpus.all_small_abelian(8)), st.data())
def test_convolution_matches_pointwise_product(group, data):
    n = group.order
    m1 = data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n).filter(any))
    m2 = data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n).filter(any))
    spec = ActionSpec(group, (mv(group, m1), mv(group, m2)))
    mults = block_multiplicities(spec, 1, 2)
    assert mv(group, mults).character == block_character(spec, 1, 2)[0]
    assert list(mults) == list(oracles.mults_by_brute_force([mv(group, m1), mv(group, m2)]))


def test_table_group_levels():
    s3 = make_table([1, 3, 2], 6, [(1, [1, 1, 1]), (1, [1, -1, 1]), (2, [2, 0, -1])])
    lv = LevelRep(s3, 7, ModelLevel(1, 1, CharValues(s3.irreducibles[0])))
    assert [complex(v) for v in lv.character.values] == [7, 1, 1]
    spec = model_action(s3, IntegerPolynomial.constant(1), IntegerPolynomial.constant(1))
    assert spec.level(4).dim == 7
