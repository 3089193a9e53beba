"""Deterministic random corpora shared by the unit and acceptance tests."""

from __future__ import annotations

import numpy as np

from rokhlin.action import (
    ActionSpec,
    CharValues,
    ExplicitMatrices,
    LevelRep,
    ModelLevel,
    MultVector,
    character_from_mults,
)
from rokhlin.groups import GroupModel, make_abelian, make_cyclic

ABELIAN_ORDERS = [(1,), (2,), (3,), (4,), (5,), (6,), (7,), (8,), (2, 2), (2, 4), (2, 2, 2)]
SMALL_ORDERS = [o for o in ABELIAN_ORDERS if np.prod(o) <= 6]


def group_of(orders) -> GroupModel:
    return make_cyclic(orders[0]) if len(orders) == 1 else make_abelian(orders)


def all_small_abelian(max_order: int = 8) -> list[GroupModel]:
    return [group_of(o) for o in ABELIAN_ORDERS if np.prod(o) <= max_order]


def random_mults(rng, n: int, d: int) -> tuple[int, ...]:
    cuts = np.sort(rng.integers(0, d + 1, size=n - 1))
    parts = np.diff(np.concatenate([[0], cuts, [d]]))
    return tuple(int(x) for x in parts)


def random_unitary(rng, d: int) -> np.ndarray:
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def explicit_from_mults(group: GroupModel, mults, rng=None) -> ExplicitMatrices:
    """Generator images diag(zeta(a, gen_k)), optionally conjugated by a random unitary."""
    labels = [a for a, m in enumerate(mults) for _ in range(m)]
    d = len(labels)
    u = random_unitary(rng, d) if rng is not None else np.eye(d)
    gens = []
    for k, n in enumerate(group.orders):
        phases = [group.element(a)[k] / n for a in labels]
        diag = np.exp(2j * np.pi * np.array(phases))
        gens.append(u @ np.diag(diag) @ u.conj().T)
    return ExplicitMatrices(tuple(gens))


def random_level(rng, group: GroupModel, max_dim: int = 16, kinds=("mults", "char", "model", "matrices")) -> LevelRep:
    kind = kinds[rng.integers(len(kinds))]
    n = group.order
    if kind == "model":
        r = int(rng.integers(0, max(1, max_dim // n) + 1))
        s = int(rng.integers(0 if r else 1, max(1, max_dim - r * n) + 1))
        if r * n + s > max_dim:
            r, s = 0, max(1, min(s, max_dim))
        rem = MultVector(random_mults(rng, n, s)) if s else None
        return LevelRep(group, r * n + s, ModelLevel(r, s, rem))
    d = int(rng.integers(1, max_dim + 1))
    mults = random_mults(rng, n, d)
    if kind == "mults":
        return LevelRep(group, d, MultVector(mults))
    if kind == "char":
        return LevelRep(group, d, CharValues(character_from_mults(group, mults)))
    return LevelRep(group, d, explicit_from_mults(group, mults, rng))


def random_spec(rng, group: GroupModel, prefix: int, period: int, max_dim: int, kinds=("mults", "char", "model")):
    levels = [random_level(rng, group, max_dim, kinds) for _ in range(prefix + period)]
    tail = tuple(levels[prefix:]) if period else None
    return ActionSpec(group, tuple(levels[:prefix]), tail)


def level_corpus(seed: int = 0, count: int = 120, max_order: int = 8, max_dim: int = 16) -> list[LevelRep]:
    rng = np.random.default_rng(seed)
    groups = all_small_abelian(max_order)
    return [random_level(rng, groups[rng.integers(len(groups))], max_dim) for _ in range(count)]


def finite_spec_corpus(seed: int = 1, count: int = 60, levels: int = 6, max_dim: int = 4) -> list[ActionSpec]:
    rng = np.random.default_rng(seed)
    groups = all_small_abelian(8)
    return [
        random_spec(rng, groups[rng.integers(len(groups))], levels, 0, max_dim, ("mults", "char", "model"))
        for _ in range(count)
    ]


def periodic_spec_corpus(seed: int = 2, count: int = 60, max_order: int = 6, max_dim: int = 6) -> list[ActionSpec]:
    """Eventually periodic specs: prefix <= 2, period 1..3, |G| <= max_order."""
    rng = np.random.default_rng(seed)
    groups = all_small_abelian(max_order)
    out = []
    for i in range(count):
        g = groups[1 + rng.integers(len(groups) - 1)]
        kinds = ("mults", "char", "model")
        spec = random_spec(rng, g, int(rng.integers(0, 3)), int(rng.integers(1, 4)), max_dim, kinds)
        out.append(spec)
    return out
