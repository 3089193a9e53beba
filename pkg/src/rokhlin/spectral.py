"""Spectral projections, trace vectors, circulant transfer matrices.

For an abelian group with bicharacter zeta and a unitary representation pi,

    P^g = |G|^-1 sum_h zeta(h, g) pi(h)

are mutually orthogonal invariant projections summing to 1.  With
pi = sum_a m_a zeta^a, the range of P^g is the zeta^(g^-1)-isotypic part, so
rank P^g = m_(g^-1).  Traces are always computed exactly from
multiplicities; float matrices are only used for the projections
themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .action import (
    MATERIALIZE_LIMIT,
    ActionSpec,
    LevelRep,
    bichar_matrix,
    block_multiplicities,
    representation_matrices,
)
from .cyclotomic import ZERO, CyclotomicNumber
from .groups import GroupModel, bichar
from .errors import DimensionMismatchError, IdentityViolationError, UnsupportedOperationError

MATRIX_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralFamily:
    group: GroupModel
    block: tuple[int, int]
    ranks: tuple[int, ...]
    matrices: tuple[np.ndarray, ...] | None = None
    unitaries: tuple[np.ndarray, ...] | None = None

    @property
    def dim(self) -> int:
        return sum(self.ranks)

    def defects(self) -> dict[str, float]:
        """Float defects of the projection axioms."""
        if self.matrices is None:
            raise UnsupportedOperationError("family was not materialized")
        mats = self.matrices
        eye = np.eye(self.dim)
        idem = max(np.abs(p @ p - p).max() for p in mats)
        adj = max(np.abs(p - p.conj().T).max() for p in mats)
        orth = 0.0
        for i, p in enumerate(mats):
            for j, q in enumerate(mats):
                if i != j:
                    orth = max(orth, np.abs(p @ q).max())
        total = np.abs(sum(mats) - eye).max()
        return {"idempotent": float(idem), "self_adjoint": float(adj), "orthogonal": float(orth), "sum": float(total)}


def _need_abelian(group: GroupModel) -> None:
    if not group.is_abelian:
        raise UnsupportedOperationError("spectral projections need an abelian group")


def rank_vector(group: GroupModel, mults: Sequence[int]) -> tuple[int, ...]:
    """rank P^g = m_(g^-1)."""
    return tuple(mults[group.inv(g)] for g in range(group.order))


def projections_from_unitaries(group: GroupModel, unitaries: Sequence[np.ndarray]) -> list[np.ndarray]:
    z = bichar_matrix(group)
    n = group.order
    return [sum(z[h, g] * unitaries[h] for h in range(n)) / n for g in range(n)]


def spectral_projections(level: LevelRep, block: tuple[int, int] = (1, 1), materialize: bool = True) -> SpectralFamily:
    group = level.group
    _need_abelian(group)
    ranks = rank_vector(group, level.multiplicities)
    if not materialize or level.dim > MATERIALIZE_LIMIT:
        return SpectralFamily(group, block, ranks)
    us = representation_matrices(level)
    mats = projections_from_unitaries(group, us)
    return SpectralFamily(group, block, ranks, tuple(mats), tuple(us))


def block_unitaries(spec: ActionSpec, n: int, m: int) -> list[np.ndarray]:
    """pi_n(h) (x) ... (x) pi_m(h) for every h."""
    group = spec.group
    _need_abelian(group)
    dim = math.prod(lv.dim for lv in spec.levels(n, m))
    if dim > MATERIALIZE_LIMIT:
        raise DimensionMismatchError(f"block [{n}, {m}] has dimension {dim} > {MATERIALIZE_LIMIT}")
    out = [np.ones((1, 1), dtype=complex) for _ in range(group.order)]
    for lv in spec.levels(n, m):
        mats = representation_matrices(lv)
        out = [np.kron(a, b) for a, b in zip(out, mats)]
    return out


def block_spectral_projections(spec: ActionSpec, n: int, m: int, materialize: bool = True) -> SpectralFamily:
    group = spec.group
    _need_abelian(group)
    ranks = rank_vector(group, block_multiplicities(spec, n, m))
    dim = sum(ranks)
    if not materialize or dim > MATERIALIZE_LIMIT:
        return SpectralFamily(group, (n, m), ranks)
    us = block_unitaries(spec, n, m)
    return SpectralFamily(group, (n, m), ranks, tuple(projections_from_unitaries(group, us)), tuple(us))


def recover_unitary(fam: SpectralFamily, g: int) -> np.ndarray:
    """pi(g) = sum_l zeta(g^-1, l) P^l."""
    if fam.matrices is None:
        raise UnsupportedOperationError("family was not materialized")
    group = fam.group
    z = bichar_matrix(group)
    gi = group.inv(g)
    return sum(z[gi, l] * fam.matrices[l] for l in range(group.order))


# traces ---------------------------------------------------------------------


@dataclass(frozen=True)
class TraceVector:
    group: GroupModel
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.group.order:
            raise ValueError("trace vector needs one entry per group element")
        if any(v < 0 for v in self.values) or sum(self.values) != 1:
            raise ValueError(f"not a point of the simplex: {self.values}")

    def __getitem__(self, g: int) -> Fraction:
        return self.values[g]

    @classmethod
    def uniform(cls, group: GroupModel) -> TraceVector:
        return cls(group, (Fraction(1, group.order),) * group.order)


def trace_vector_from_mults(group: GroupModel, mults: Sequence[int]) -> TraceVector:
    d = sum(mults)
    return TraceVector(group, tuple(Fraction(r, d) for r in rank_vector(group, mults)))


def trace_vector(level: LevelRep) -> TraceVector:
    """tau(P^g) = m_(g^-1) / d."""
    _need_abelian(level.group)
    return trace_vector_from_mults(level.group, level.multiplicities)


def block_trace_vector(spec: ActionSpec, n: int, m: int) -> TraceVector:
    _need_abelian(spec.group)
    return trace_vector_from_mults(spec.group, block_multiplicities(spec, n, m))


def trace_vector_from_character(chi, dim: int) -> TraceVector:
    """|G|^-1 sum_h zeta(h, g) chi(h) / d, evaluated in cyclotomic arithmetic."""
    group = chi.group
    _need_abelian(group)
    out = []
    for g in range(group.order):
        total = ZERO
        for h in range(group.order):
            if chi(h):
                total = total + bichar(group, h, g) * chi(h)
        out.append((total / (group.order * dim)).to_fraction())
    return TraceVector(group, tuple(out))


# transfer matrices ----------------------------------------------------------


@dataclass(frozen=True)
class TransferMatrix:
    """(h, g) entry tau(P^(h g^-1)); circulant over G and column stochastic."""

    group: GroupModel
    entries: tuple[tuple[Fraction, ...], ...]

    def _integer_form(self) -> tuple[list[list[int]], int]:
        den = math.lcm(*(x.denominator for row in self.entries for x in row))
        return [[x.numerator * (den // x.denominator) for x in row] for row in self.entries], den

    def __matmul__(self, other: TransferMatrix) -> TransferMatrix:
        # integer matrix product over a common denominator, normalized once per entry
        n = self.group.order
        a, da = self._integer_form()
        b, db = other._integer_form()
        den = da * db
        rows = tuple(
            tuple(Fraction(sum(a[i][k] * b[k][j] for k in range(n)), den) for j in range(n)) for i in range(n)
        )
        return TransferMatrix(self.group, rows)

    def apply(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        n = self.group.order
        return tuple(sum(self.entries[i][k] * v[k] for k in range(n)) for i in range(n))

    @property
    def first_column(self) -> tuple[Fraction, ...]:
        return tuple(row[0] for row in self.entries)

    def is_circulant(self) -> bool:
        g = self.group
        t = self.first_column
        return all(
            self.entries[h][k] == t[g.mul(h, g.inv(k))] for h in range(g.order) for k in range(g.order)
        )

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries])


def circulant(tv: TraceVector) -> TransferMatrix:
    g = tv.group
    n = g.order
    return TransferMatrix(g, tuple(tuple(tv[g.mul(h, g.inv(k))] for k in range(n)) for h in range(n)))


def transfer_matrix(level: LevelRep) -> TransferMatrix:
    return circulant(trace_vector(level))


def block_transfer(spec: ActionSpec, n: int, m: int) -> TransferMatrix:
    """Ordered product T_n ... T_m."""
    acc = None
    for lv in spec.levels(n, m):
        t = transfer_matrix(lv)
        acc = t if acc is None else acc @ t
    return acc


def bichar_table(group: GroupModel) -> list[list[CyclotomicNumber]]:
    n = group.order
    return [[bichar(group, a, b) for b in range(n)] for a in range(n)]


def fourier_eigenvalues(T: TransferMatrix) -> tuple[CyclotomicNumber, ...]:
    """lambda^g = sum_h zeta(g, h) tau(P^h)."""
    group = T.group
    _need_abelian(group)
    t = T.first_column
    out = []
    for g in range(group.order):
        total = ZERO
        for h in range(group.order):
            if t[h]:
                total = total + bichar(group, g, h) * t[h]
        out.append(total)
    return tuple(out)


def conjugate_by_characters(T: TransferMatrix) -> list[list[CyclotomicNumber]]:
    """X T X* with X = |G|^-1/2 (zeta(h, g)), computed exactly."""
    group = T.group
    n = group.order
    z = bichar_table(group)
    zt = [[sum((z[a][h] * T.entries[h][g] for h in range(n) if T.entries[h][g]), ZERO) for g in range(n)] for a in range(n)]
    return [
        [sum((zt[a][g] * z[b][g].conj() for g in range(n)), ZERO) / n for b in range(n)]
        for a in range(n)
    ]


def simplex_gap(T: TransferMatrix) -> Fraction:
    """max |T_(g,h) - 1/|G||; zero exactly when T has rank one."""
    u = Fraction(1, T.group.order)
    return max(abs(x - u) for row in T.entries for x in row)


def backward_trace(spec: ActionSpec, n: int, s_next: TraceVector) -> TraceVector:
    """s_n = T_(n+1) s_(n+1)."""
    t = transfer_matrix(spec.level(n + 1))
    return TraceVector(spec.group, t.apply(s_next.values))


# crossed-product direct system ----------------------------------------------


@dataclass(frozen=True)
class DirectSummandVector:
    """An element (y^g)_(g in G) of the direct sum of |G| copies of A_n."""

    group: GroupModel
    components: tuple

    def __post_init__(self):
        if len(self.components) != self.group.order:
            raise ValueError("need exactly |G| components")

    def __getitem__(self, g: int):
        return self.components[g]


def dual_shift(v: DirectSummandVector, g: int) -> DirectSummandVector:
    """Dual action: component h of the result is component hg of the input."""
    group = v.group
    return DirectSummandVector(group, tuple(v[group.mul(h, g)] for h in range(group.order)))


def connecting_map(y: Sequence[np.ndarray], fam: SpectralFamily) -> list[np.ndarray]:
    """(y^h)_h -> (sum_k y^k (x) P^(h k^-1))_h."""
    group = fam.group
    n = group.order
    idx = np.array([[group.mul(h, group.inv(k)) for k in range(n)] for h in range(n)])
    ys = np.stack(y)
    ps = np.stack(fam.matrices)[idx]  # (h, k, b, b)
    a, b = ys.shape[1], ps.shape[2]
    # out[h, i, a, j, b] = sum_k y[k, i, j] P[h, k, a, b]
    out = np.tensordot(ps, ys, axes=([1], [0])).transpose(0, 3, 1, 4, 2).reshape(n, a * b, a * b)
    return list(out)


def connecting_map_checks(spec: ActionSpec, n: int, m: int, tol: float = MATRIX_TOL) -> dict:
    """Check the direct-system identities for the block [n, m].

    (a) P_(n,m)^g = sum_l P_(n,m-1)^(g l^-1) (x) P_m^l;
    (b) phi_(n-1,m)(X_(n-1)^g) = X_m^g with X^g = (zeta(h, g) V^g)_h;
    (c) phi_(n-1,m)(I_k) = (1 (x) P^(g k^-1))_g with traces matching the exact trace vector.
    """
    group = spec.group
    _need_abelian(group)
    N = group.order
    fam = block_spectral_projections(spec, n, m)
    if fam.matrices is None:
        raise DimensionMismatchError(f"block [{n}, {m}] is too large to materialize")
    if n > 1:
        head = math.prod(lv.dim for lv in spec.levels(1, n - 1))
        if head * fam.dim > MATERIALIZE_LIMIT:
            raise DimensionMismatchError(f"levels 1..{m} exceed the materialization bound")
        V = block_unitaries(spec, 1, n - 1)
    else:
        V = [np.ones((1, 1), dtype=complex)] * N
    z = bichar_matrix(group)
    report = {"block": [n, m], "defects": {}}

    # (a) tensor identity
    defect_a = 0.0
    if m > n:
        left = block_spectral_projections(spec, n, m - 1)
        right = spectral_projections(spec.level(m))
        idx = np.array([[group.mul(g, group.inv(l)) for l in range(N)] for g in range(N)])
        ls, rs = np.stack(left.matrices)[idx], np.stack(right.matrices)
        a, b = ls.shape[2], rs.shape[1]
        rebuilt = np.tensordot(ls, rs, axes=([1], [0])).transpose(0, 1, 3, 2, 4).reshape(N, a * b, a * b)
        defect_a = float(np.abs(rebuilt - np.stack(fam.matrices)).max())
    report["defects"]["tensor_identity"] = defect_a

    # (b) generating unitaries are carried to generating unitaries
    defect_b = 0.0
    worst_b = None
    for g in range(N):
        X_prev = [z[h, g] * V[g] for h in range(N)]
        image = connecting_map(X_prev, fam)
        for h in range(N):
            expected = z[h, g] * np.kron(V[g], fam.unitaries[g])
            d = float(np.abs(image[h] - expected).max())
            if d > defect_b:
                defect_b, worst_b = d, g
    report["defects"]["unitaries"] = defect_b

    # (c) images of the minimal central projections I_k
    exact = block_trace_vector(spec, n, m)
    defect_c = 0.0
    worst_c = None
    eye_head = np.eye(V[0].shape[0])
    for k in range(N):
        I_k = [eye_head if h == k else np.zeros_like(eye_head) for h in range(N)]
        image = connecting_map(I_k, fam)
        for g in range(N):
            idx = group.mul(g, group.inv(k))
            expected = np.kron(eye_head, fam.matrices[idx])
            d = float(np.abs(image[g] - expected).max())
            tr = float(np.trace(image[g]).real) / image[g].shape[0]
            d = max(d, abs(tr - float(exact[idx])))
            if d > defect_c:
                defect_c, worst_c = d, (k, g)
    report["defects"]["central_projections"] = defect_c
    report["trace_components"] = {
        str(k): [exact[group.mul(g, group.inv(k))] for g in range(N)] for k in range(N)
    }

    for name, (d, where) in {
        "tensor_identity": (defect_a, None),
        "unitaries": (defect_b, worst_b),
        "central_projections": (defect_c, worst_c),
    }.items():
        if d > tol:
            raise IdentityViolationError(f"{name} identity fails with defect {d:.3e} at {where}", where, d)
    report["passed"] = True
    return report
