"""Product-type actions: per-level representations, specs, telescopes.

A product-type action is a sequence of unitary representations pi_1, pi_2, ...
of one finite group.  Each level is a :class:`LevelRep` carrying one of four
bodies (explicit generator matrices, a multiplicity vector over the dual
group, a character, or a model level ``r * regular + remainder``).  An
:class:`ActionSpec` is a finite prefix followed by an optional infinite tail,
either periodic or a polynomial model-action family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence, Union

import numpy as np

from .cyclotomic import CyclotomicNumber
from .groups import (
    ClassFunction,
    GroupModel,
    irreducible_decompose,
    make_cyclic,
)
from .errors import (
    InexactInputError,
    InvariantViolationError,
    NotACharacterError,
    OutOfRangeError,
    SpecValidationError,
    UnsupportedOperationError,
)

UNITARY_TOL = 1e-9
PROMOTION_TOL = 1e-9
MATERIALIZE_LIMIT = 4096


# level bodies --------------------------------------------------------------


@dataclass(frozen=True)
class MultVector:
    """Multiplicity m_g of the dual character zeta^g, for each g."""

    mults: tuple[int, ...]


@dataclass(frozen=True)
class CharValues:
    values: ClassFunction


@dataclass(frozen=True)
class ModelLevel:
    """r copies of the left regular representation plus an s-dim remainder."""

    r: int
    s: int
    remainder: MultVector | CharValues | None = None


@dataclass(frozen=True, eq=False)
class ExplicitMatrices:
    """Unitary image of each generator of Z/n_1 x ... x Z/n_k."""

    generators: tuple[np.ndarray, ...]

    def __eq__(self, other):
        if not isinstance(other, ExplicitMatrices):
            return NotImplemented
        return len(self.generators) == len(other.generators) and all(
            a.shape == b.shape and np.array_equal(a, b) for a, b in zip(self.generators, other.generators)
        )

    __hash__ = None


Body = Union[MultVector, CharValues, ModelLevel, ExplicitMatrices]


def _check_remainder(group: GroupModel, body, s: int) -> None:
    if body is None:
        if s:
            raise InvariantViolationError("remainder", f"s = {s} needs a remainder representation")
        return
    if isinstance(body, MultVector):
        _check_mults(group, body.mults, s, "remainder.mults")
    elif isinstance(body, CharValues):
        _check_char(group, body.values, s, "remainder.values")
    else:
        raise SpecValidationError("remainder", "remainder must be a mults or char body")


def _check_mults(group: GroupModel, mults: tuple[int, ...], dim: int, path: str) -> None:
    if not group.is_abelian:
        raise SpecValidationError(path, "multiplicity vectors need an abelian group")
    if len(mults) != group.order:
        raise SpecValidationError(path, f"expected {group.order} multiplicities, got {len(mults)}")
    if any((not isinstance(m, int)) or m < 0 for m in mults):
        raise SpecValidationError(path, "multiplicities must be non-negative integers")
    if sum(mults) != dim:
        raise InvariantViolationError(path, f"multiplicities sum to {sum(mults)}, expected dim {dim}")


def _check_char(group: GroupModel, chi: ClassFunction, dim: int, path: str) -> None:
    if chi.group != group:
        raise SpecValidationError(path, "character lives on a different group")
    if chi.degree != dim:
        raise InvariantViolationError(path, f"value at identity is {chi.degree}, expected dim {dim}")
    for c, v in enumerate(chi.values):
        if (CyclotomicNumber.rational(dim * dim) - v.abs2()).sign() < 0:
            raise InvariantViolationError(f"{path}[{c}]", f"|value| exceeds dim {dim}")
    try:
        irreducible_decompose(chi)
    except NotACharacterError as exc:
        raise InvariantViolationError(path, f"not a genuine character: {exc}") from None


@dataclass(frozen=True, eq=False)
class LevelRep:
    group: GroupModel
    dim: int
    body: Body

    def __post_init__(self):
        g, d, body = self.group, self.dim, self.body
        if not isinstance(d, int) or d < 1:
            raise SpecValidationError("dim", "dimension must be a positive integer")
        if isinstance(body, MultVector):
            _check_mults(g, body.mults, d, "mults")
        elif isinstance(body, CharValues):
            _check_char(g, body.values, d, "values")
        elif isinstance(body, ModelLevel):
            if body.r < 0 or body.s < 0 or (body.r == 0 and body.s == 0):
                raise InvariantViolationError("model", "need r, s >= 0, not both zero")
            if d != body.r * g.order + body.s:
                raise InvariantViolationError("model", f"dim {d} != r*|G| + s = {body.r * g.order + body.s}")
            _check_remainder(g, body.remainder, body.s)
        elif isinstance(body, ExplicitMatrices):
            _check_explicit(g, d, body)
        else:
            raise SpecValidationError("body", f"unknown body type {type(body).__name__}")

    def __eq__(self, other):
        if not isinstance(other, LevelRep):
            return NotImplemented
        return self.group == other.group and self.dim == other.dim and self.body == other.body

    __hash__ = None

    @cached_property
    def character(self) -> ClassFunction:
        return character_of(self)

    @cached_property
    def multiplicities(self) -> tuple[int, ...]:
        """Exact multiplicity of each dual character (abelian groups only)."""
        g = self.group
        if not g.is_abelian:
            raise UnsupportedOperationError("multiplicity vectors need an abelian group")
        body = self.body
        if isinstance(body, MultVector):
            return body.mults
        if isinstance(body, CharValues):
            return irreducible_decompose(body.values)
        if isinstance(body, ModelLevel):
            rem = _remainder_mults(g, body.remainder)
            return tuple(body.r + m for m in rem)
        return _explicit_mults(self)

    @cached_property
    def normalized_character(self) -> ClassFunction:
        return self.character / self.dim


def _remainder_mults(group: GroupModel, rem) -> tuple[int, ...]:
    if rem is None:
        return (0,) * group.order
    if isinstance(rem, MultVector):
        return rem.mults
    return irreducible_decompose(rem.values)


def _check_explicit(group: GroupModel, d: int, body: ExplicitMatrices) -> None:
    if not group.is_abelian:
        raise UnsupportedOperationError("explicit matrices are accepted only for abelian groups")
    if len(body.generators) != len(group.orders):
        raise SpecValidationError("generators", f"expected {len(group.orders)} generator matrices")
    eye = np.eye(d)
    for k, (m, n) in enumerate(zip(body.generators, group.orders)):
        path = f"generators[{k}]"
        if m.shape != (d, d):
            raise SpecValidationError(path, f"matrix shape {m.shape} != ({d}, {d})")
        if np.abs(m @ m.conj().T - eye).max() > UNITARY_TOL:
            raise InvariantViolationError(path, "matrix is not unitary to 1e-9")
        if np.abs(np.linalg.matrix_power(m, n) - eye).max() > UNITARY_TOL * max(1, n):
            raise InvariantViolationError(path, f"generator image does not have order dividing {n}")
    for a in range(len(body.generators)):
        for b in range(a):
            x, y = body.generators[a], body.generators[b]
            if np.abs(x @ y - y @ x).max() > UNITARY_TOL:
                raise InvariantViolationError("generators", f"generators {b} and {a} do not commute")


# explicit matrices ----------------------------------------------------------


def bichar_matrix(group: GroupModel) -> np.ndarray:
    """Float matrix Z[g, h] = zeta(g, h)."""
    e = group.exponent
    pairs = np.array(group._pair_table, dtype=float)
    return np.exp(2j * np.pi * pairs / e)


def regular_matrices(group: GroupModel) -> list[np.ndarray]:
    """Left regular representation lambda(h) delta_g = delta_{hg}."""
    n = group.order
    out = []
    for h in range(n):
        m = np.zeros((n, n), dtype=complex)
        for g in range(n):
            m[group.mul(h, g), g] = 1.0
        out.append(m)
    return out


def diagonal_matrices(group: GroupModel, mults: Sequence[int]) -> list[np.ndarray]:
    """pi(h) = diag(zeta(a, h)) with a repeated mults[a] times."""
    z = bichar_matrix(group)
    labels = [a for a, m in enumerate(mults) for _ in range(m)]
    return [np.diag(z[labels, h]) if labels else np.zeros((0, 0), complex) for h in range(group.order)]


def _explicit_element_matrices(level: LevelRep) -> list[np.ndarray]:
    group = level.group
    gens = level.body.generators
    out = []
    for x in group.elements:
        m = np.eye(level.dim, dtype=complex)
        for gen, a in zip(gens, x):
            if a:
                m = m @ np.linalg.matrix_power(gen.astype(complex), a)
        out.append(m)
    return out


def _block_diag(parts: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(p.shape[0] for p in parts)
    out = np.zeros((n, n), dtype=complex)
    i = 0
    for p in parts:
        k = p.shape[0]
        out[i : i + k, i : i + k] = p
        i += k
    return out


def representation_matrices(level: LevelRep) -> list[np.ndarray]:
    """pi(h) for every element index h (abelian groups).

    Model levels use the left regular representation on each l2(G) copy;
    multiplicity and character bodies use the diagonal realization.
    """
    group = level.group
    if not group.is_abelian:
        raise UnsupportedOperationError("explicit matrices need an abelian group")
    body = level.body
    if isinstance(body, ExplicitMatrices):
        return _explicit_element_matrices(level)
    if isinstance(body, ModelLevel):
        reg = regular_matrices(group)
        rem = diagonal_matrices(group, _remainder_mults(group, body.remainder))
        return [_block_diag([reg[h]] * body.r + [rem[h]]) for h in range(group.order)]
    return diagonal_matrices(group, level.multiplicities)


def _explicit_mults(level: LevelRep) -> tuple[int, ...]:
    group = level.group
    mats = _explicit_element_matrices(level)
    traces = np.array([np.trace(m) for m in mats])
    z = bichar_matrix(group)
    # multiplicity of zeta^a is <chi, zeta^a>
    raw = (traces[None, :] * z.conj()).sum(axis=1) / group.order
    mults = np.rint(raw.real).astype(int)
    if np.abs(raw - mults).max() > PROMOTION_TOL or (mults < 0).any():
        raise InexactInputError("explicit matrix traces are not recognizably a character to 1e-9")
    return tuple(int(m) for m in mults)


def character_from_mults(group: GroupModel, mults: Sequence[int]) -> ClassFunction:
    e = group.exponent
    vals = []
    for h in range(group.order):
        counts = [0] * e
        for a, m in enumerate(mults):
            if m:
                counts[group.pair(a, h)] += m
        vals.append(CyclotomicNumber(e, counts))
    return ClassFunction(group, tuple(vals))


def character_of(level: LevelRep) -> ClassFunction:
    group = level.group
    body = level.body
    if isinstance(body, CharValues):
        return body.values
    if isinstance(body, MultVector):
        return character_from_mults(group, body.mults)
    if isinstance(body, ModelLevel):
        reg = group.regular_character * body.r
        rem = body.remainder
        if rem is None:
            return reg
        rem_chi = rem.values if isinstance(rem, CharValues) else character_from_mults(group, rem.mults)
        return reg + rem_chi
    chi = character_from_mults(group, level.multiplicities)
    mats = _explicit_element_matrices(level)
    for h, m in enumerate(mats):
        if abs(np.trace(m) - complex(chi(h))) > PROMOTION_TOL:
            raise InexactInputError(f"trace at element {group.element(h)} is not within 1e-9 of a cyclotomic value")
    return chi


# tails ----------------------------------------------------------------------


@dataclass(frozen=True)
class IntegerPolynomial:
    """Integer-valued polynomial sequence i -> sum coeffs[k] * i**k, i >= 1."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        c = [Fraction(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))
        if c and c[-1] < 0:
            raise SpecValidationError("tail.model", "polynomial with negative leading coefficient goes negative")

    @classmethod
    def constant(cls, value: int) -> IntegerPolynomial:
        return cls((Fraction(value),))

    def __call__(self, i: int) -> int:
        v = sum(c * i**k for k, c in enumerate(self.coeffs))
        if v.denominator != 1 or v < 0:
            raise InvariantViolationError("tail.model", f"polynomial value {v} at level {i} is not a non-negative integer")
        return int(v)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, k: int) -> IntegerPolynomial:
        return IntegerPolynomial(tuple(c * k for c in self.coeffs))


@dataclass(frozen=True)
class ModelTail:
    """Levels i > len(prefix) are model levels with r(i) regular copies and
    s(i) copies of one fixed one-dimensional character."""

    r: IntegerPolynomial
    s: IntegerPolynomial
    character: int = 0


def _one_dim_remainder(group: GroupModel, character: int, s: int):
    if s == 0:
        return None
    if group.is_abelian:
        mults = [0] * group.order
        mults[character] = s
        return MultVector(tuple(mults))
    return CharValues(group.irreducibles[character] * s)


Tail = Union[tuple, ModelTail, None]


@dataclass(frozen=True, eq=False)
class ActionSpec:
    group: GroupModel
    prefix: tuple[LevelRep, ...]
    tail: Tail = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if isinstance(self.tail, list):
            object.__setattr__(self, "tail", tuple(self.tail))
        for i, lv in enumerate(self.levels_listed()):
            if lv.group != self.group:
                raise SpecValidationError(f"levels[{i}]", "level group differs from spec group")
        if isinstance(self.tail, tuple) and not self.tail:
            raise SpecValidationError("tail", "periodic tail must be non-empty")
        if isinstance(self.tail, ModelTail):
            mt = self.tail
            if mt.r.is_zero and mt.s.is_zero:
                raise InvariantViolationError("tail.model", "model tail levels would be empty")
            dims = self.group.dims
            if not 0 <= mt.character < len(dims) or dims[mt.character] != 1:
                raise SpecValidationError("tail.model.character", "must index a one-dimensional irreducible")
        if not self.prefix and self.tail is None:
            raise SpecValidationError("levels", "spec needs at least one level")

    def __eq__(self, other):
        if not isinstance(other, ActionSpec):
            return NotImplemented
        return self.group == other.group and self.prefix == other.prefix and self.tail == other.tail

    __hash__ = None

    def levels_listed(self) -> tuple[LevelRep, ...]:
        tail = self.tail if isinstance(self.tail, tuple) else ()
        return self.prefix + tail

    @property
    def is_periodic(self) -> bool:
        return isinstance(self.tail, tuple)

    @property
    def is_finite(self) -> bool:
        return self.tail is None

    @property
    def period(self) -> int | None:
        return len(self.tail) if self.is_periodic else None

    @property
    def num_levels(self) -> int | None:
        return len(self.prefix) if self.is_finite else None

    def default_horizon(self) -> int:
        if self.is_periodic:
            return len(self.prefix) + 8 * len(self.tail)
        if isinstance(self.tail, ModelTail):
            return len(self.prefix) + 8
        return len(self.prefix)

    def level(self, i: int) -> LevelRep:
        """Level i, 1-indexed."""
        if i < 1:
            raise OutOfRangeError(f"level index {i} < 1")
        p = len(self.prefix)
        if i <= p:
            return self.prefix[i - 1]
        if self.tail is None:
            raise OutOfRangeError(f"level {i} is past the {p}-level prefix and the spec has no tail")
        if isinstance(self.tail, tuple):
            return self.tail[(i - p - 1) % len(self.tail)]
        cached = self._cache.get(i)
        if cached is None:
            mt = self.tail
            r, s = mt.r(i), mt.s(i)
            if r == 0 and s == 0:
                raise InvariantViolationError("tail.model", f"level {i} has r = s = 0")
            body = ModelLevel(r, s, _one_dim_remainder(self.group, mt.character, s))
            cached = LevelRep(self.group, r * self.group.order + s, body)
            self._cache[i] = cached
        return cached

    def levels(self, n: int, m: int) -> list[LevelRep]:
        return [self.level(i) for i in range(n, m + 1)]


# block characters -----------------------------------------------------------


def convolve(group: GroupModel, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Multiplicities of the tensor product: zeta^x (x) zeta^y = zeta^(xy)."""
    out = [0] * group.order
    for x, mx in enumerate(a):
        if mx:
            row = group._mul_table[x]
            for y, my in enumerate(b):
                if my:
                    out[row[y]] += mx * my
    return tuple(out)


def block_character(spec: ActionSpec, n: int, m: int) -> tuple[ClassFunction, int]:
    """Pointwise product of the level characters over levels n..m and the block dimension."""
    if n > m:
        raise OutOfRangeError(f"empty block [{n}, {m}]")
    chi = None
    dim = 1
    for lv in spec.levels(n, m):
        chi = lv.character if chi is None else chi * lv.character
        dim *= lv.dim
    return chi, dim


def block_multiplicities(spec: ActionSpec, n: int, m: int) -> tuple[int, ...]:
    if n > m:
        raise OutOfRangeError(f"empty block [{n}, {m}]")
    acc = None
    for lv in spec.levels(n, m):
        acc = lv.multiplicities if acc is None else convolve(spec.group, acc, lv.multiplicities)
    return acc


def tensor_levels(levels: Sequence[LevelRep]) -> LevelRep:
    """A single level equivalent to the tensor product of ``levels``."""
    if len(levels) == 1:
        return levels[0]
    group = levels[0].group
    dim = math.prod(lv.dim for lv in levels)
    if group.is_abelian:
        if all(isinstance(lv.body, ExplicitMatrices) for lv in levels) and dim <= MATERIALIZE_LIMIT:
            gens = []
            for k in range(len(group.orders)):
                m = np.ones((1, 1), dtype=complex)
                for lv in levels:
                    m = np.kron(m, lv.body.generators[k])
                gens.append(m)
            return LevelRep(group, dim, ExplicitMatrices(tuple(gens)))
        acc = levels[0].multiplicities
        for lv in levels[1:]:
            acc = convolve(group, acc, lv.multiplicities)
        return LevelRep(group, dim, MultVector(acc))
    chi = levels[0].character
    for lv in levels[1:]:
        chi = chi * lv.character
    return LevelRep(group, dim, CharValues(chi))


# telescopes -----------------------------------------------------------------


@dataclass(frozen=True)
class Telescope:
    """Cut positions 1 = n_1 < n_2 < ...; block i is [n_i, n_{i+1} - 1].

    ``cuts`` lists the explicit cuts; if ``repeat`` is given, block lengths
    cycle through it forever after the last explicit cut.  Without
    ``repeat`` the last block runs to the end of a finite spec.
    """

    cuts: tuple[int, ...]
    repeat: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "cuts", tuple(int(c) for c in self.cuts))
        if self.repeat is not None:
            object.__setattr__(self, "repeat", tuple(int(c) for c in self.repeat))
            if not self.repeat or any(r < 1 for r in self.repeat):
                raise ValueError("repeat block lengths must be positive")
        if not self.cuts or self.cuts[0] != 1:
            raise ValueError("first cut must be 1")
        if any(b <= a for a, b in zip(self.cuts, self.cuts[1:])):
            raise ValueError("cuts must be strictly increasing")

    @classmethod
    def identity(cls) -> Telescope:
        return cls((1,), (1,))

    def starts(self) -> Iterator[int]:
        yield from self.cuts
        if self.repeat is None:
            return
        pos = self.cuts[-1]
        k = 0
        while True:
            pos += self.repeat[k % len(self.repeat)]
            k += 1
            yield pos

    def cut_list(self, limit: int) -> list[int]:
        out = []
        for c in self.starts():
            if c > limit:
                break
            out.append(c)
        return out

    def blocks(self, limit: int, last_level: int | None = None) -> Iterator[tuple[int, int]]:
        """Blocks starting at or before ``limit``; open final blocks end at ``last_level``."""
        it = self.starts()
        start = next(it)
        for nxt in it:
            if start > limit:
                return
            yield start, nxt - 1
            start = nxt
        if start <= limit:
            if last_level is None:
                raise OutOfRangeError("telescope has an open final block on an infinite spec")
            yield start, last_level


def apply_telescope(spec: ActionSpec, t: Telescope) -> ActionSpec:
    group = spec.group
    if t == Telescope.identity():
        return spec
    if isinstance(spec.tail, ModelTail):
        raise UnsupportedOperationError("only the identity telescope is supported on polynomial model tails")
    if spec.is_finite:
        n = len(spec.prefix)
        blocks = list(t.blocks(n, last_level=n if t.repeat is None else None))
        if blocks[-1][1] != n:
            raise SpecValidationError("telescope", f"blocks do not tile the {n} levels exactly")
        return ActionSpec(group, tuple(tensor_levels(spec.levels(a, b)) for a, b in blocks), None)
    if t.repeat is None:
        raise SpecValidationError("telescope", "an infinite spec needs a repeating cut pattern")
    p, k = len(spec.prefix), len(spec.tail)
    cycle_len = sum(t.repeat)
    span = math.lcm(cycle_len, k)
    # the block pattern is periodic from the first repeat-cycle start inside the tail
    start0 = t.cuts[-1]
    while start0 <= p:
        start0 += cycle_len
    prefix_blocks = []
    tail_blocks = []
    for a, b in t.blocks(start0 + span - 1):
        if a < start0:
            prefix_blocks.append((a, b))
        else:
            tail_blocks.append((a, b))
    new_prefix = tuple(tensor_levels(spec.levels(a, b)) for a, b in prefix_blocks)
    new_tail = tuple(tensor_levels(spec.levels(a, b)) for a, b in tail_blocks)
    return ActionSpec(group, new_prefix, new_tail)


# model actions --------------------------------------------------------------


def model_action(
    group: GroupModel,
    r,
    s,
    remainders: Sequence | None = None,
    period: int | None = None,
    character: int = 0,
) -> ActionSpec:
    """Model action alpha(r, s, pi).

    ``r`` and ``s`` are either equal-length integer sequences (the last
    ``period`` levels repeat forever when ``period`` is given) or
    :class:`IntegerPolynomial` sequences, in which case level i carries
    ``s(i)`` copies of the one-dimensional irreducible ``character`` as its
    remainder.  Omitted remainders are trivial.
    """
    if isinstance(r, IntegerPolynomial) or isinstance(s, IntegerPolynomial):
        rp = r if isinstance(r, IntegerPolynomial) else IntegerPolynomial.constant(r)
        sp = s if isinstance(s, IntegerPolynomial) else IntegerPolynomial.constant(s)
        return ActionSpec(group, (), ModelTail(rp, sp, character))
    r, s = list(r), list(s)
    if len(r) != len(s):
        raise SpecValidationError("model", "r and s must have equal length")
    levels = []
    for i, (ri, si) in enumerate(zip(r, s)):
        if ri < 0 or si < 0 or (ri == 0 and si == 0):
            raise InvariantViolationError(f"levels[{i}]", "model level needs r, s >= 0, not both zero")
        rem = remainders[i] if remainders is not None else None
        if rem is None:
            rem = _one_dim_remainder(group, 0, si)
        levels.append(LevelRep(group, ri * group.order + si, ModelLevel(ri, si, rem)))
    if period:
        return ActionSpec(group, tuple(levels[:-period]), tuple(levels[-period:]))
    return ActionSpec(group, tuple(levels), None)


# subgroup restriction ------------------------------------------------------


def subgroup_generator(group: GroupModel, descriptor) -> int:
    """Element index generating the cyclic subgroup named by ``descriptor``.

    A plain integer is a subgroup order for cyclic groups; a tuple/list is a
    generating element of an abelian group.
    """
    if not group.is_abelian:
        raise UnsupportedOperationError("subgroup restriction needs an abelian group")
    if isinstance(descriptor, int) and not isinstance(descriptor, bool):
        if group.kind != "cyclic":
            raise SpecValidationError("subgroup", "integer subgroup descriptors need a cyclic group")
        n = group.order
        if descriptor < 1 or n % descriptor:
            raise SpecValidationError("subgroup", f"{descriptor} does not divide |G| = {n}")
        return group.index(n // descriptor)
    try:
        return group.index(tuple(descriptor))
    except (TypeError, ValueError) as exc:
        raise SpecValidationError("subgroup", f"bad subgroup generator {descriptor!r}: {exc}") from None


def _restrict_mults(group: GroupModel, g: int, k: int, mults: Sequence[int]) -> tuple[int, ...]:
    step = group.exponent // k
    out = [0] * k
    for a, m in enumerate(mults):
        if m:
            out[group.pair(a, g) // step] += m
    return tuple(out)


def _restrict_body(group: GroupModel, sub: GroupModel, g: int, level: LevelRep):
    k = sub.order
    body = level.body
    if isinstance(body, MultVector):
        return MultVector(_restrict_mults(group, g, k, body.mults))
    if isinstance(body, CharValues):
        powers = [group.power(g, j) for j in range(k)]
        return CharValues(ClassFunction(sub, tuple(body.values(p) for p in powers)))
    if isinstance(body, ModelLevel):
        rem = body.remainder
        new_rem = None
        if rem is not None:
            new_rem = _restrict_body(group, sub, g, LevelRep(group, body.s, rem))
        return ModelLevel(body.r * (group.order // k), body.s, new_rem)
    x = group.element(g)
    m = np.eye(level.dim, dtype=complex)
    for gen, a in zip(body.generators, x):
        if a:
            m = m @ np.linalg.matrix_power(gen, a)
    return ExplicitMatrices((m,))


def restrict_level(level: LevelRep, g: int) -> LevelRep:
    group = level.group
    sub = make_cyclic(group.element_order(g))
    return LevelRep(sub, level.dim, _restrict_body(group, sub, g, level))


def restrict_to_subgroup(spec: ActionSpec, descriptor) -> ActionSpec:
    group = spec.group
    g = subgroup_generator(group, descriptor)
    k = group.element_order(g)
    sub = make_cyclic(k)

    def one(lv):
        return LevelRep(sub, lv.dim, _restrict_body(group, sub, g, lv))

    tail = spec.tail
    if isinstance(tail, tuple):
        tail = tuple(one(lv) for lv in tail)
    elif isinstance(tail, ModelTail):
        t = _restrict_mults(group, g, k, [1 if a == tail.character else 0 for a in range(group.order)])
        tail = ModelTail(tail.r * (group.order // k), tail.s, t.index(1))
    return ActionSpec(sub, tuple(one(lv) for lv in spec.prefix), tail)


def cyclic_subgroup_generators(group: GroupModel) -> list[int]:
    """One generator per non-trivial cyclic subgroup."""
    seen = set()
    gens = []
    for g in range(1, group.order):
        k = group.element_order(g)
        members = frozenset(group.power(g, j) for j in range(k))
        if members not in seen:
            seen.add(members)
            gens.append(g)
    return gens
