"""Explicit Rokhlin projection families and their verification.

For a block with spectral projections P^g, pick orthonormal bases U_g of
the ranges (Gram-Schmidt over the standard basis, truncated to the minimal
rank in tracial mode).  Then W^{g,h} = U_g U_h* is a system of matrix units
and

    Q^k = |G|^-1 sum_{g,h} zeta(k, g^-1 h) W^{g,h} = V_k V_k*,
    V_k = |G|^-1/2 sum_g conj(zeta(k, g)) U_g,

are mutually orthogonal projections permuted by Ad(pi(g)) as Q^k -> Q^{gk}.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .action import (
    ActionSpec,
    LevelRep,
    ModelLevel,
    bichar_matrix,
    representation_matrices,
)
from .errors import (
    DimensionMismatchError,
    EmptyBlockError,
    IdentityViolationError,
    InputError,
    InternalInconsistencyError,
    NoRegularSummandError,
    RankMismatchError,
    UnsupportedOperationError,
)
from .groups import GroupModel
from .spectral import MATRIX_TOL, SpectralFamily, block_spectral_projections


class Mode(str, enum.Enum):
    STRICT = "strict"
    TRACIAL = "tracial"


def opnorm(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def range_basis(p: np.ndarray, k: int) -> np.ndarray:
    """First k orthonormal vectors of ran p, Gram-Schmidt over e_1, e_2, ..."""
    d = p.shape[0]
    basis = np.zeros((d, k), dtype=complex)
    found = 0
    for j in range(d):
        if found == k:
            break
        v = p[:, j].astype(complex)
        if found:
            q = basis[:, :found]
            v = v - q @ (q.conj().T @ v)
            v = v - q @ (q.conj().T @ v)  # second pass for stability
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            basis[:, found] = v / nv
            found += 1
    if found < k:
        raise InternalInconsistencyError(f"range has only {found} independent columns, expected {k}")
    return basis


# partial isometries ---------------------------------------------------------


@dataclass(eq=False)
class PartialIsometrySystem:
    family: SpectralFamily
    mode: Mode
    rank: int
    bases: tuple[np.ndarray, ...]

    @property
    def group(self) -> GroupModel:
        return self.family.group

    @property
    def block(self) -> tuple[int, int]:
        return self.family.block

    def W(self, g: int, h: int) -> np.ndarray:
        return self.bases[g] @ self.bases[h].conj().T

    def defects(self) -> dict[str, float]:
        n = self.group.order
        unit = 0.0
        adj = 0.0
        diag = 0.0
        ws = {(g, h): self.W(g, h) for g in range(n) for h in range(n)}
        for (g, h), w in ws.items():
            adj = max(adj, opnorm(w.conj().T - ws[h, g]))
            for (k, l), x in ws.items():
                target = ws[g, l] if h == k else 0
                unit = max(unit, opnorm(w @ x - target))
        if self.mode == Mode.STRICT:
            for g in range(n):
                diag = max(diag, opnorm(ws[g, g] - self.family.matrices[g]))
        else:
            for g in range(n):
                p = self.family.matrices[g]
                diag = max(diag, opnorm(p @ ws[g, g] - ws[g, g]))
        return {"matrix_units": unit, "adjoint": adj, "diagonal": diag}


def build_partial_isometries(fam: SpectralFamily, mode: Mode | str = Mode.STRICT) -> PartialIsometrySystem:
    mode = Mode(mode)
    if fam.matrices is None:
        raise UnsupportedOperationError("spectral family was not materialized")
    ranks = fam.ranks
    if mode == Mode.STRICT:
        for g, r in enumerate(ranks):
            if r != ranks[0]:
                raise RankMismatchError(
                    f"rank of P^g at g = {fam.group.class_label(g)} is {r}, at the identity it is {ranks[0]}", g
                )
    k = min(ranks)
    if k == 0:
        raise EmptyBlockError(f"some P^g vanishes on block {fam.block}; no partial isometries exist")
    bases = tuple(range_basis(p, k) for p in fam.matrices)
    return PartialIsometrySystem(fam, mode, k, bases)


# Rokhlin families -----------------------------------------------------------


@dataclass(eq=False)
class RokhlinFamily:
    group: GroupModel
    mode: Mode
    projections: tuple[np.ndarray, ...]
    trace_defect: Fraction
    unitaries: tuple[np.ndarray, ...] | None = None
    block: tuple[int, int] | None = None
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.projections[0].shape[0]

    @property
    def total(self) -> np.ndarray:
        return sum(self.projections)

    def defects(self) -> dict[str, float]:
        qs = self.projections
        out = {
            "idempotent": max(opnorm(q @ q - q) for q in qs),
            "self_adjoint": max(opnorm(q - q.conj().T) for q in qs),
            "orthogonal": max(
                (opnorm(a @ b) for i, a in enumerate(qs) for j, b in enumerate(qs) if i != j), default=0.0
            ),
        }
        if self.mode == Mode.STRICT:
            out["sum"] = opnorm(self.total - np.eye(self.dim))
        if self.unitaries is not None:
            out["equivariance"] = equivariance_defect(self.group, self.unitaries, qs)
        return out


def equivariance_defect(group: GroupModel, unitaries: Sequence[np.ndarray], qs: Sequence[np.ndarray]) -> float:
    """max_{g,h} || pi(g) e_h pi(g)* - e_{gh} ||."""
    worst = 0.0
    for g, u in enumerate(unitaries):
        for h, q in enumerate(qs):
            worst = max(worst, opnorm(u @ q @ u.conj().T - qs[group.mul(g, h)]))
    return worst


def build_rokhlin_family(system: PartialIsometrySystem, tol: float = MATRIX_TOL) -> RokhlinFamily:
    group = system.group
    n = group.order
    z = bichar_matrix(group)
    bases = np.stack(system.bases)  # (|G|, d, k)
    qs = []
    for k in range(n):
        v = np.tensordot(z[k].conj(), bases, axes=1) / np.sqrt(n)
        qs.append(v @ v.conj().T)
    fam = system.family
    d = fam.dim
    defect = 1 - Fraction(n * system.rank, d)
    out = RokhlinFamily(group, system.mode, tuple(qs), defect, fam.unitaries, fam.block)
    worst = out.defects()
    for name, value in worst.items():
        if value > tol:
            raise IdentityViolationError(f"Rokhlin family {name} defect {value:.3e} exceeds {tol}", None, value)
    # exact trace bookkeeping against the float family
    if abs(float(defect) - (1 - np.trace(out.total).real / d)) > 1e-9:
        raise IdentityViolationError("trace of 1 - Q disagrees with 1 - |G| min tau(P^g)", None, float(defect))
    return out


def synthesize(spec: ActionSpec, n: int, m: int, mode: Mode | str = Mode.STRICT) -> RokhlinFamily:
    fam = block_spectral_projections(spec, n, m)
    if fam.matrices is None:
        raise DimensionMismatchError(f"block [{n}, {m}] is too large to materialize")
    return build_rokhlin_family(build_partial_isometries(fam, mode))


def model_action_family(level: LevelRep) -> RokhlinFamily:
    """e_g = sum over the regular summands of the projection onto delta_g."""
    body = level.body
    if not isinstance(body, ModelLevel):
        raise UnsupportedOperationError("model_action_family needs a model level")
    if body.r < 1:
        raise NoRegularSummandError("model level has no regular summand")
    group = level.group
    n = group.order
    d = level.dim
    es = []
    for g in range(n):
        diag = np.zeros(d)
        for c in range(body.r):
            diag[c * n + g] = 1.0
        es.append(np.diag(diag).astype(complex))
    unitaries = tuple(representation_matrices(level)) if group.is_abelian else None
    mode = Mode.STRICT if body.s == 0 else Mode.TRACIAL
    return RokhlinFamily(group, mode, tuple(es), Fraction(body.s, d), unitaries, meta={"regular_copies": body.r})


# verification ---------------------------------------------------------------


@dataclass
class VerificationReport:
    mode: Mode
    epsilon: float
    defects: dict[str, float]
    trace_defect: Fraction
    comparison: dict | None = None
    ebe_norm: float | None = None
    conditions: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())


def _rank(p: np.ndarray) -> int:
    return int(round(np.trace(p).real))


def _check_projection(p: np.ndarray, name: str) -> None:
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise DimensionMismatchError(f"{name} is not a square matrix")
    if opnorm(p @ p - p) > MATRIX_TOL or opnorm(p - p.conj().T) > MATRIX_TOL:
        raise InputError(f"{name} is not a projection to 1e-10")


def verify_family(
    family: RokhlinFamily,
    unitaries: Sequence[np.ndarray] | None = None,
    F: Sequence[np.ndarray] = (),
    epsilon: float = 1e-9,
    mode: Mode | str | None = None,
    comparison_target: np.ndarray | int | None = None,
    b: np.ndarray | None = None,
) -> VerificationReport:
    """Check a candidate family against the strict or tracial Rokhlin conditions.

    Tracial mode uses the comparison target when given (rank(1 - e) <=
    rank(target)) and the trace bound tau(1 - e) < epsilon otherwise.
    """
    mode = Mode(mode) if mode is not None else family.mode
    unitaries = family.unitaries if unitaries is None else unitaries
    d = family.dim
    for i, x in enumerate(list(F) + list(unitaries or [])):
        if x.shape != (d, d):
            raise DimensionMismatchError(f"matrix {i} has shape {x.shape}, family has dimension {d}")
    qs = family.projections
    defects = {
        "idempotent": max(opnorm(q @ q - q) for q in qs),
        "self_adjoint": max(opnorm(q - q.conj().T) for q in qs),
        "orthogonal": max((opnorm(a @ c) for i, a in enumerate(qs) for j, c in enumerate(qs) if i != j), default=0.0),
        "commutator": max((opnorm(q @ x - x @ q) for q in qs for x in F), default=0.0),
    }
    if unitaries is not None:
        defects["equivariance"] = equivariance_defect(family.group, unitaries, qs)
    e = family.total
    defects["sum"] = opnorm(e - np.eye(d))
    trace_defect = Fraction(d - _rank(e), d)
    cond = {k: v <= epsilon for k, v in defects.items() if k != "sum"}
    report = VerificationReport(mode, epsilon, defects, trace_defect)
    if mode == Mode.STRICT:
        cond["sum"] = defects["sum"] <= epsilon
    else:
        if comparison_target is not None:
            if isinstance(comparison_target, np.ndarray):
                _check_projection(comparison_target, "comparison target")
                target_rank = _rank(comparison_target)
            else:
                target_rank = int(comparison_target)
            rest = d - _rank(e)
            report.comparison = {"rank_defect": rest, "target_rank": target_rank}
            cond["comparison"] = rest <= target_rank
        else:
            cond["trace"] = trace_defect < Fraction(epsilon)
    if b is not None:
        if b.shape != (d, d):
            raise DimensionMismatchError("test element b has the wrong shape")
        report.ebe_norm = opnorm(e @ b @ e)
        cond["ebe"] = report.ebe_norm > (1 - epsilon) * opnorm(b)
    report.conditions = cond
    return report


class Comparison(str, enum.Enum):
    SUB = "subequivalent"
    SUPER = "superequivalent"
    EQUIVALENT = "equivalent"


def mvn_compare(p: np.ndarray, q: np.ndarray) -> Comparison:
    """Murray-von Neumann comparison of projections in a matrix algebra (by rank)."""
    _check_projection(p, "p")
    _check_projection(q, "q")
    if p.shape != q.shape:
        raise DimensionMismatchError("projections live in different matrix algebras")
    a, b = _rank(p), _rank(q)
    if a == b:
        return Comparison.EQUIVALENT
    return Comparison.SUB if a < b else Comparison.SUPER
