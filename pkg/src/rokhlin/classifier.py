"""Strict / tracial Rokhlin classification of product-type actions.

Everything runs through the normalized level characters nu_i = chi_i / d_i.
A block product prod nu_i(c) vanishes exactly when one factor vanishes, and
|nu_i(c)| <= 1 makes tail products of magnitudes monotone, so:

* strict: every non-trivial class has a vanishing level infinitely often;
* tracial: for every non-trivial class and every start n, the magnitudes
  |prod_(i=n..m) nu_i(c)| have infimum 0.

For periodic tails both conditions reduce to exact tests over one period.
For polynomial model tails (r(i) regular copies plus s(i) copies of a
one-dimensional character) |nu_i(c)| = s_i / d_i for every c != 1 and the
conditions reduce to degree comparisons.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .action import ActionSpec, ModelTail, Telescope, block_character
from .cyclotomic import ONE, CyclotomicNumber
from .groups import ClassFunction, compose_character, irreducible_decompose
from .errors import (
    HorizonExhaustedError,
    InternalInconsistencyError,
    UnsupportedOperationError,
)
from .spectral import TransferMatrix, simplex_gap, transfer_matrix


class Outcome(str, enum.Enum):
    STRICT = "Strict"
    TRACIAL_ONLY = "TracialOnly"
    NEITHER = "Neither"
    INCONCLUSIVE = "Inconclusive"


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("ROKHLIN_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    items = list(items)
    n = _workers()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# zero patterns ----------------------------------------------------------------


@dataclass
class ClassPattern:
    cls: int
    zeros: list[int]
    below_one: list[int]


@dataclass
class ZeroPattern:
    """Per non-trivial class: positions (1-indexed levels) where nu vanishes
    and where |nu| < 1, over the prefix and one tail period."""

    positions: list[int]
    classes: dict[int, ClassPattern]

    def tail_zeros(self, c: int, tail_start: int) -> list[int]:
        return [p for p in self.classes[c].zeros if p >= tail_start]

    def tail_below_one(self, c: int, tail_start: int) -> list[int]:
        return [p for p in self.classes[c].below_one if p >= tail_start]


def _scan_positions(spec: ActionSpec) -> list[int]:
    if spec.is_periodic:
        return list(range(1, len(spec.prefix) + len(spec.tail) + 1))
    return list(range(1, len(spec.prefix) + 1))


def zero_pattern(spec: ActionSpec) -> ZeroPattern:
    """Exact zero / sub-unit-modulus positions of nu_i(c) for every non-trivial class."""
    positions = _scan_positions(spec)
    group = spec.group
    chars = [spec.level(i).character for i in positions]

    def one(c: int) -> ClassPattern:
        zeros, below = [], []
        for i, chi in zip(positions, chars):
            v = chi(c)
            if v.is_zero():
                zeros.append(i)
                below.append(i)
            elif v.abs2() != spec.level(i).dim ** 2:
                below.append(i)
        return ClassPattern(c, zeros, below)

    pats = _map(one, range(1, group.num_classes))
    return ZeroPattern(positions, {p.cls: p for p in pats})


# regular blocks ---------------------------------------------------------------


def regular_multiple_check(chi: ClassFunction, dim: int) -> tuple[bool, int | None]:
    """Is chi a multiple of the regular character?  Returns (flag, copies)."""
    if any(not chi(c).is_zero() for c in range(1, chi.group.num_classes)):
        return False, None
    order = chi.group.order
    if dim % order:
        raise InternalInconsistencyError(
            f"character vanishes off the identity but |G| = {order} does not divide dim {dim}"
        )
    return True, dim // order


def _close_block(spec: ActionSpec, start: int, limit: int) -> int | None:
    """First i such that [start, i - 1] is regular, or None within ``limit``."""
    pending = set(range(1, spec.group.num_classes))
    i = start
    while True:
        if i > limit:
            return None
        chi = spec.level(i).character
        pending = {c for c in pending if not chi(c).is_zero()}
        i += 1
        if not pending:
            return i


def greedy_cuts(spec: ActionSpec, limit: int) -> tuple[list[int], int | None]:
    """Greedy cut positions within levels 1..limit.

    Returns the cuts (block starts plus the end of the last closed block)
    and the start of the first block that could not be closed, if any.
    """
    cuts = [1]
    start = 1
    while start <= limit:
        nxt = _close_block(spec, start, limit)
        if nxt is None:
            return cuts, start
        cuts.append(nxt)
        start = nxt
    return cuts, None


def _tail_phase(spec: ActionSpec, start: int) -> int | None:
    p = len(spec.prefix)
    if start <= p:
        return None
    if spec.is_periodic:
        return (start - p - 1) % len(spec.tail)
    return 0  # polynomial tails: only used when every tail level is regular


def greedy_telescope(spec: ActionSpec, horizon: int | None = None) -> Telescope:
    """Minimal cuts such that every block is a multiple of the regular representation.

    Each block closes as soon as every non-trivial class has vanished in it.
    On infinite specs the cut pattern is returned in closed form: explicit
    cuts plus a cycle of block lengths, found by detecting a repeated tail
    phase at a block start.  Raises :class:`HorizonExhaustedError` with the
    start of the first unclosable block.
    """
    horizon = spec.default_horizon() if horizon is None else horizon
    p = len(spec.prefix)
    if spec.is_finite:
        cuts, fail = greedy_cuts(spec, min(horizon, p) if horizon else p)
        if fail is not None or cuts[-1] != p + 1:
            pos = fail if fail is not None else cuts[-1]
            raise HorizonExhaustedError(f"no regular block starting at level {pos}", pos, cuts)
        return Telescope(tuple(cuts[:-1]), None)
    limit = horizon
    if spec.is_periodic:
        covered = all(
            any(spec.level(i).character(c).is_zero() for i in range(p + 1, p + len(spec.tail) + 1))
            for c in range(1, spec.group.num_classes)
        )
        if covered:
            # every block closes within one period once past the prefix
            k = len(spec.tail)
            limit = max(horizon, p + (p + k + 2) * k)
    elif spec.tail.s.is_zero:
        limit = max(horizon, 2 * p + 2)
    cuts = [1]
    seen: dict[int, int] = {}
    start = 1
    while True:
        phase = _tail_phase(spec, start)
        if phase is not None:
            if phase in seen:
                k = seen[phase]
                lengths = tuple(b - a for a, b in zip(cuts[k:], cuts[k + 1 :]))
                return Telescope(tuple(cuts[: k + 1]), lengths)
            seen[phase] = len(cuts) - 1
        nxt = _close_block(spec, start, limit)
        if nxt is None:
            raise HorizonExhaustedError(f"no regular block starting at level {start} within {limit} levels", start, cuts)
        cuts.append(nxt)
        start = nxt


# decisions --------------------------------------------------------------------


@dataclass
class StrictDecision:
    holds: bool | None
    telescope: Telescope | None = None
    obstruction: int | None = None
    failure_position: int | None = None


@dataclass
class ClassDecay:
    cls: int
    positions: list[int]
    period_product: CyclotomicNumber | None = None
    period_modulus_sq: CyclotomicNumber | None = None
    asymptotic: str | None = None


@dataclass
class TracialDecision:
    holds: bool | None
    decay: dict[int, ClassDecay] = field(default_factory=dict)
    obstruction: int | None = None
    obstruction_values: list[CyclotomicNumber] = field(default_factory=list)


def _model_tail_rule(spec: ActionSpec) -> tuple[bool, bool, str]:
    """(strict, tracial, reason) for a polynomial model tail."""
    mt: ModelTail = spec.tail
    if mt.s.is_zero:
        return True, True, "s = 0: every tail level is a multiple of the regular representation"
    if mt.r.is_zero:
        return False, False, "r = 0: every tail level has |nu(c)| = 1"
    ds, dr = mt.s.degree, mt.r.degree
    if ds <= dr + 1:
        return False, True, f"deg s = {ds} <= deg r + 1 = {dr + 1}: sum r_i/s_i diverges, tail products of s_i/d_i tend to 0"
    return False, False, f"deg s = {ds} > deg r + 1 = {dr + 1}: sum r_i/s_i converges, tail products stay positive"


def classify_strict(spec: ActionSpec, horizon: int | None = None) -> StrictDecision:
    horizon = spec.default_horizon() if horizon is None else horizon
    if isinstance(spec.tail, ModelTail):
        strict, _, _ = _model_tail_rule(spec)
        if not strict:
            return StrictDecision(False, obstruction=1)
        try:
            return StrictDecision(True, telescope=greedy_telescope(spec, horizon))
        except HorizonExhaustedError as exc:
            return StrictDecision(True, failure_position=exc.position)
    if spec.is_finite:
        try:
            return StrictDecision(True, telescope=greedy_telescope(spec, horizon))
        except HorizonExhaustedError as exc:
            return StrictDecision(None, failure_position=exc.position)
    pat = zero_pattern(spec)
    tail_start = len(spec.prefix) + 1
    for c in range(1, spec.group.num_classes):
        if not pat.tail_zeros(c, tail_start):
            return StrictDecision(False, obstruction=c)
    try:
        t = greedy_telescope(spec, horizon)
    except HorizonExhaustedError as exc:
        raise InternalInconsistencyError(
            f"every class vanishes in the period but greedy cutting failed at level {exc.position}"
        ) from exc
    return StrictDecision(True, telescope=t)


def classify_tracial(spec: ActionSpec, horizon: int | None = None) -> TracialDecision:
    group = spec.group
    if isinstance(spec.tail, ModelTail):
        _, tracial, reason = _model_tail_rule(spec)
        decay = {c: ClassDecay(c, [], asymptotic=reason) for c in range(1, group.num_classes)}
        if tracial:
            return TracialDecision(True, decay)
        return TracialDecision(False, obstruction=1)
    if spec.is_finite:
        return TracialDecision(None)
    pat = zero_pattern(spec)
    tail_start = len(spec.prefix) + 1
    tail_positions = range(tail_start, tail_start + len(spec.tail))
    decay = {}
    for c in range(1, group.num_classes):
        below = pat.tail_below_one(c, tail_start)
        if not below:
            vals = [spec.level(i).normalized_character(c) for i in tail_positions]
            return TracialDecision(False, obstruction=c, obstruction_values=vals)
        prod = ONE
        for i in tail_positions:
            prod = prod * spec.level(i).normalized_character(c)
        decay[c] = ClassDecay(c, below, prod, prod.abs2())
    return TracialDecision(True, decay)


@dataclass
class Verdict:
    outcome: Outcome
    strict: StrictDecision
    tracial: TracialDecision
    horizon: int
    rank1: dict | None = None


def classify(spec: ActionSpec, horizon: int | None = None, epsilon: Fraction | None = None) -> Verdict:
    horizon = spec.default_horizon() if horizon is None else horizon
    s = classify_strict(spec, horizon)
    t = classify_tracial(spec, horizon)
    if s.holds:
        if t.holds is False:
            raise InternalInconsistencyError("strict verdict without the tracial criterion")
        if t.holds is None:
            t = TracialDecision(True)
        outcome = Outcome.STRICT
    elif s.holds is None or t.holds is None:
        outcome = Outcome.INCONCLUSIVE
    elif t.holds:
        outcome = Outcome.TRACIAL_ONLY
    else:
        outcome = Outcome.NEITHER
    rank1 = None
    if outcome == Outcome.TRACIAL_ONLY and spec.group.is_abelian and spec.is_periodic:
        eps = Fraction(1, 100) if epsilon is None else Fraction(epsilon)
        m, _, gap = rank1_certificate(spec, 1, eps, horizon=max(horizon, 10_000))
        rank1 = {"n": 1, "epsilon": eps, "m": m, "gap": gap}
    return Verdict(outcome, s, t, horizon, rank1)


# near-regular decomposition -------------------------------------------------


@dataclass
class NearRegularSplit:
    block: tuple[int, int] | None
    copies: int
    regular_part: ClassFunction
    remainder: ClassFunction
    remainder_dim: int
    block_dim: int
    ratio: Fraction
    multiplicities: tuple[int, ...]
    epsilon: Fraction | None = None

    @property
    def below_epsilon(self) -> bool | None:
        return None if self.epsilon is None else self.ratio < self.epsilon


def near_regular_decompose(chi: ClassFunction, epsilon=None, block: tuple[int, int] | None = None) -> NearRegularSplit:
    """Split chi = d * chi_reg + chi'' with d = min_i floor(a_i / r_i)."""
    group = chi.group
    a = irreducible_decompose(chi)
    dims = group.dims
    d = min(ai // ri for ai, ri in zip(a, dims))
    reg = group.regular_character * d
    rest = chi - reg
    rest_mults = tuple(ai - d * ri for ai, ri in zip(a, dims))
    if any(m < 0 for m in rest_mults) or compose_character(group, rest_mults) != rest:
        raise InternalInconsistencyError("remainder of the near-regular split is not a character")
    block_dim = int(chi.degree.to_fraction())
    rest_dim = int(rest.degree.to_fraction())
    if block_dim != d * group.order + rest_dim:
        raise InternalInconsistencyError("near-regular split does not add up")
    eps = None if epsilon is None else Fraction(epsilon)
    return NearRegularSplit(block, d, reg, rest, rest_dim, block_dim, Fraction(rest_dim, block_dim), a, eps)


def near_regular_block(spec: ActionSpec, n: int, m: int, epsilon=None) -> NearRegularSplit:
    chi, _ = block_character(spec, n, m)
    return near_regular_decompose(chi, epsilon, (n, m))


# rank-one certificates -------------------------------------------------------


def rank1_certificate(spec: ActionSpec, n: int, epsilon, horizon: int | None = None) -> tuple[int, TransferMatrix, Fraction]:
    """Smallest m >= n with simplex_gap(T_n ... T_m) < epsilon, with the exact gap."""
    if not spec.group.is_abelian:
        raise UnsupportedOperationError("rank-one certificates need an abelian group")
    eps = Fraction(epsilon)
    horizon = spec.default_horizon() if horizon is None else horizon
    acc = None
    gap = None
    m = n
    while m <= horizon:
        t = transfer_matrix(spec.level(m))
        acc = t if acc is None else acc @ t
        gap = simplex_gap(acc)
        if gap < eps:
            return m, acc, gap
        m += 1
    raise HorizonExhaustedError(f"gap still {gap} after level {horizon}", horizon, gap)


# subgroup consistency --------------------------------------------------------

_STRENGTH = {Outcome.STRICT: 2, Outcome.TRACIAL_ONLY: 1, Outcome.NEITHER: 0}


def subgroup_consistency(spec: ActionSpec, horizon: int | None = None) -> dict:
    """Classify every restriction to a cyclic subgroup; a restriction must be
    at least as strong as the verdict on the whole group."""
    from .action import cyclic_subgroup_generators, restrict_to_subgroup

    group = spec.group
    if not group.is_abelian:
        raise UnsupportedOperationError("subgroup consistency needs an abelian group")
    top = classify(spec, horizon)
    report = {"outcome": top.outcome.value, "subgroups": []}
    for g in cyclic_subgroup_generators(group):
        sub = restrict_to_subgroup(spec, list(group.element(g)))
        v = classify(sub, horizon)
        report["subgroups"].append(
            {"generator": group.class_label(g), "order": sub.group.order, "outcome": v.outcome.value}
        )
        if top.outcome in _STRENGTH and v.outcome in _STRENGTH and top.outcome != Outcome.NEITHER:
            if _STRENGTH[v.outcome] < _STRENGTH[top.outcome]:
                raise InternalInconsistencyError(
                    f"restriction to <{group.class_label(g)}> is {v.outcome.value}, weaker than {top.outcome.value}"
                )
            if v.outcome == Outcome.INCONCLUSIVE:
                raise InternalInconsistencyError("restriction of a decided spec is inconclusive")
    report["consistent"] = True
    return report
