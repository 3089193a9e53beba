"""Finite groups, the bicharacter pairing, class functions and character tables.

Abelian groups (``cyclic`` / ``abelian`` kinds) are products of cyclic
factors Z/n_1 x ... x Z/n_k; elements are addressed by a mixed-radix index
0 .. |G|-1 with index 0 the identity.  Every element is its own conjugacy
class, so class indices and element indices coincide.

Non-abelian groups enter as ``table`` kind: class sizes plus the
irreducible character table, with class 0 the identity class.  No element
structure is available for them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

from .cyclotomic import ONE, ZERO, CyclotomicNumber, Rational
from .errors import (
    GroupMismatchError,
    InvalidOrderError,
    NotACharacterError,
    SpecValidationError,
    UnsupportedOperationError,
)


@dataclass(frozen=True)
class GroupModel:
    kind: str
    orders: tuple[int, ...] = ()
    class_sizes: tuple[int, ...] = ()
    exponent: int = 1
    irreducible_dims: tuple[int, ...] = ()
    irreducible_values: tuple[tuple[CyclotomicNumber, ...], ...] = field(default=(), repr=False)

    @property
    def is_abelian(self) -> bool:
        return self.kind in ("cyclic", "abelian")

    @cached_property
    def order(self) -> int:
        if self.is_abelian:
            return math.prod(self.orders)
        return sum(self.class_sizes)

    @property
    def num_classes(self) -> int:
        return self.order if self.is_abelian else len(self.class_sizes)

    @property
    def sizes(self) -> tuple[int, ...]:
        return (1,) * self.order if self.is_abelian else self.class_sizes

    # element structure (abelian only) ---------------------------------

    def _need_abelian(self, what: str) -> None:
        if not self.is_abelian:
            raise UnsupportedOperationError(f"{what} needs an abelian group, got kind {self.kind!r}")

    def element(self, index: int) -> tuple[int, ...]:
        self._need_abelian("element()")
        out = []
        for n in reversed(self.orders):
            index, r = divmod(index, n)
            out.append(r)
        return tuple(reversed(out))

    def index(self, element: Sequence[int] | int) -> int:
        self._need_abelian("index()")
        if isinstance(element, int):
            element = (element,)
        if len(element) != len(self.orders):
            raise ValueError(f"element {element} has wrong arity for orders {self.orders}")
        idx = 0
        for a, n in zip(element, self.orders):
            idx = idx * n + (a % n)
        return idx

    @cached_property
    def elements(self) -> tuple[tuple[int, ...], ...]:
        self._need_abelian("elements")
        return tuple(product(*(range(n) for n in self.orders)))

    @cached_property
    def _mul_table(self) -> tuple[tuple[int, ...], ...]:
        els = self.elements
        return tuple(
            tuple(self.index(tuple(a + b for a, b in zip(x, y))) for y in els) for x in els
        )

    def mul(self, g: int, h: int) -> int:
        return self._mul_table[g][h]

    @cached_property
    def _inv_table(self) -> tuple[int, ...]:
        return tuple(self.index(tuple(-a for a in x)) for x in self.elements)

    def inv(self, g: int) -> int:
        return self._inv_table[g]

    def power(self, g: int, k: int) -> int:
        return self.index(tuple(k * a for a in self.element(g)))

    def element_order(self, g: int) -> int:
        x = self.element(g)
        return math.lcm(*(n // math.gcd(a, n) for a, n in zip(x, self.orders))) if x else 1

    @cached_property
    def _pair_table(self) -> tuple[tuple[int, ...], ...]:
        e = self.exponent
        els = self.elements
        return tuple(
            tuple(sum(a * b * (e // n) for a, b, n in zip(x, y, self.orders)) % e for y in els)
            for x in els
        )

    def pair(self, g: int, h: int) -> int:
        """Exponent k with bichar(g, h) = zeta_e^k, e the group exponent."""
        self._need_abelian("the bicharacter")
        return self._pair_table[g][h]

    def __str__(self):
        if self.kind == "cyclic":
            return f"Z/{self.orders[0]}"
        if self.kind == "abelian":
            return " x ".join(f"Z/{n}" for n in self.orders)
        return f"table group of order {self.order} ({self.num_classes} classes)"

    def class_label(self, c: int):
        if self.is_abelian:
            x = self.element(c)
            return x[0] if self.kind == "cyclic" else list(x)
        return c

    # characters -------------------------------------------------------

    @cached_property
    def irreducibles(self) -> tuple[ClassFunction, ...]:
        """Irreducible characters; for abelian groups zeta^g indexed by g."""
        if self.is_abelian:
            return tuple(
                ClassFunction(self, tuple(bichar(self, g, h) for h in range(self.order)))
                for g in range(self.order)
            )
        return tuple(ClassFunction(self, vals) for vals in self.irreducible_values)

    @property
    def dims(self) -> tuple[int, ...]:
        return (1,) * self.order if self.is_abelian else self.irreducible_dims

    @cached_property
    def regular_character(self) -> ClassFunction:
        return ClassFunction(self, (CyclotomicNumber.rational(self.order),) + (ZERO,) * (self.num_classes - 1))

    def constant(self, value: Rational) -> ClassFunction:
        return ClassFunction(self, (CyclotomicNumber.rational(value),) * self.num_classes)

    def delta(self) -> ClassFunction:
        """Indicator of the identity class."""
        return ClassFunction(self, (ONE,) + (ZERO,) * (self.num_classes - 1))


def make_cyclic(n: int) -> GroupModel:
    if not isinstance(n, int) or n < 1:
        raise InvalidOrderError(f"cyclic group order must be a positive integer, got {n!r}")
    return GroupModel(kind="cyclic", orders=(n,), exponent=n)


def make_abelian(orders: Sequence[int]) -> GroupModel:
    orders = tuple(orders)
    if not orders or any(not isinstance(n, int) or n < 1 for n in orders):
        raise InvalidOrderError(f"abelian factor orders must be positive integers, got {orders!r}")
    if len(orders) == 1:
        return make_cyclic(orders[0])
    return GroupModel(kind="abelian", orders=orders, exponent=math.lcm(*orders))


def make_table(
    class_sizes: Sequence[int],
    exponent: int,
    irreducibles: Sequence[tuple[int, Sequence[CyclotomicNumber]]],
) -> GroupModel:
    """Build a table-kind group and check the character table exactly."""
    sizes = tuple(int(s) for s in class_sizes)
    if not sizes or any(s < 1 for s in sizes):
        raise SpecValidationError("group.classes", "class sizes must be positive")
    if sizes[0] != 1:
        raise SpecValidationError("group.classes[0]", "first class must be the identity (size 1)")
    if exponent < 1:
        raise SpecValidationError("group.exponent", "exponent must be positive")
    order = sum(sizes)
    dims = []
    values = []
    for i, (dim, vals) in enumerate(irreducibles):
        vals = tuple(CyclotomicNumber.coerce(v) for v in vals)
        if len(vals) != len(sizes):
            raise SpecValidationError(f"group.irreducibles[{i}].values", "one value per class required")
        if vals[0] != dim:
            raise SpecValidationError(f"group.irreducibles[{i}].values[0]", "value at identity must equal dim")
        for j, v in enumerate(vals):
            if exponent % v.conductor and not v.is_rational():
                raise SpecValidationError(
                    f"group.irreducibles[{i}].values[{j}]", f"conductor {v.conductor} does not divide exponent {exponent}"
                )
        dims.append(int(dim))
        values.append(vals)
    if sum(r * r for r in dims) != order:
        raise SpecValidationError("group.irreducibles", f"sum of squared dims {sum(r * r for r in dims)} != order {order}")
    if len(dims) != len(sizes):
        raise SpecValidationError("group.irreducibles", "number of irreducibles must equal number of classes")
    for a in range(len(sizes)):
        for b in range(len(sizes)):
            s = ZERO
            for vals in values:
                s = s + vals[a] * vals[b].conj()
            expected = Fraction(order, sizes[a]) if a == b else 0
            if s != expected:
                raise SpecValidationError(
                    "group.irreducibles", f"column orthogonality fails for classes {a}, {b}"
                )
    return GroupModel(
        kind="table",
        class_sizes=sizes,
        exponent=int(exponent),
        irreducible_dims=tuple(dims),
        irreducible_values=tuple(values),
    )


def bichar(group: GroupModel, g: int, h: int) -> CyclotomicNumber:
    """zeta(g, h) = prod_k exp(2 pi i g_k h_k / n_k)."""
    return CyclotomicNumber.root_of_unity(group.exponent, group.pair(g, h))


def dual_delta_sum(group: GroupModel, h: int) -> CyclotomicNumber:
    total = ZERO
    for g in range(group.order):
        total = total + bichar(group, g, h)
    return total


@dataclass(frozen=True)
class ClassFunction:
    group: GroupModel
    values: tuple[CyclotomicNumber, ...]

    def __post_init__(self):
        if len(self.values) != self.group.num_classes:
            raise ValueError(
                f"class function needs {self.group.num_classes} values, got {len(self.values)}"
            )

    def __call__(self, c: int) -> CyclotomicNumber:
        return self.values[c]

    def _check(self, other: ClassFunction) -> None:
        if self.group is not other.group and self.group != other.group:
            raise GroupMismatchError("class functions live on different groups")

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            self._check(other)
            return ClassFunction(self.group, tuple(a * b for a, b in zip(self.values, other.values)))
        return ClassFunction(self.group, tuple(a * other for a in self.values))

    __rmul__ = __mul__

    def __add__(self, other: ClassFunction):
        self._check(other)
        return ClassFunction(self.group, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: ClassFunction):
        self._check(other)
        return ClassFunction(self.group, tuple(a - b for a, b in zip(self.values, other.values)))

    def __truediv__(self, q: Rational):
        return ClassFunction(self.group, tuple(a / q for a in self.values))

    def conj(self) -> ClassFunction:
        return ClassFunction(self.group, tuple(a.conj() for a in self.values))

    @property
    def degree(self) -> CyclotomicNumber:
        return self.values[0]

    def __iter__(self):
        return iter(self.values)


def inner_product(chi: ClassFunction, psi: ClassFunction) -> CyclotomicNumber:
    """|G|^-1 sum_h chi(h) conj(psi(h)), weighting each class by its size."""
    if chi.group is not psi.group and chi.group != psi.group:
        raise GroupMismatchError("inner product of class functions on different groups")
    g = chi.group
    total = ZERO
    for size, a, b in zip(g.sizes, chi.values, psi.values):
        if a and b:
            total = total + a * b.conj() * size
    return total / g.order


def irreducible_decompose(chi: ClassFunction) -> tuple[int, ...]:
    """Multiplicities of the irreducibles in a genuine character."""
    group = chi.group
    mults = []
    for i, iota in enumerate(group.irreducibles):
        a = inner_product(chi, iota)
        if not a.is_rational() or a.to_fraction().denominator != 1 or a.to_fraction() < 0:
            raise NotACharacterError(f"multiplicity of irreducible {i} is {a}, not a non-negative integer")
        mults.append(int(a.to_fraction()))
    recon = compose_character(group, mults)
    if recon != chi:
        raise NotACharacterError("class function is not in the span of the irreducibles")
    return tuple(mults)


def compose_character(group: GroupModel, mults: Sequence[int]) -> ClassFunction:
    """sum_i mults[i] * iota_i."""
    vals = [ZERO] * group.num_classes
    for m, iota in zip(mults, group.irreducibles):
        if m:
            vals = [v + w * m for v, w in zip(vals, iota.values)]
    return ClassFunction(group, tuple(vals))
