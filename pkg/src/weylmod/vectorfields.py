"""Polynomial and Laurent vector fields: bracket, divergence, generators.

A vector field is a Weyl element whose every monomial has total derivative
degree exactly one, i.e. sum_i f_i d_i with f_i (Laurent) polynomials.
"""

from __future__ import annotations

from .errors import ArgumentError, DomainError, StructureError
from .indices import mi_add, mi_unit, mi_zero
from .weyl import WeylElement


class VectorField:
    """Degree-one Weyl element together with the vector-field operations."""

    __slots__ = ("element",)

    def __init__(self, element: WeylElement):
        for _, d_exp in element.terms:
            if sum(d_exp) != 1:
                raise StructureError(
                    "vector field monomials must have derivative degree one"
                )
        object.__setattr__(self, "element", element)

    def __setattr__(self, name, value):
        raise AttributeError("VectorField is immutable")

    @property
    def rank(self) -> int:
        return self.element.rank

    @property
    def laurent(self) -> bool:
        return self.element.laurent

    @classmethod
    def from_components(cls, components, laurent: bool = False) -> VectorField:
        """Build sum_i f_i d_i from the coefficient polynomials f_i."""
        n = len(components)
        terms = {}
        for i, f in enumerate(components):
            for (t_exp, _), coeff in f.terms.items():
                key = (t_exp, tuple(1 if k == i else 0 for k in range(n)))
                terms[key] = terms.get(key, 0) + coeff
        lau = laurent or any(f.laurent for f in components)
        return cls(WeylElement(n, terms, lau))

    def components(self):
        """Coefficient polynomials f_1..f_n with self = sum f_i d_i."""
        out = [dict() for _ in range(self.rank)]
        for (t_exp, d_exp), coeff in self.element.terms.items():
            i = d_exp.index(1)
            out[i][(t_exp, mi_zero(self.rank))] = coeff
        return [WeylElement(self.rank, terms, self.element.laurent) for terms in out]

    def __add__(self, other: VectorField) -> VectorField:
        return VectorField(self.element + other.element)

    def __sub__(self, other: VectorField) -> VectorField:
        return VectorField(self.element - other.element)

    def __neg__(self) -> VectorField:
        return VectorField(-self.element)

    def __mul__(self, scalar) -> VectorField:
        return VectorField(self.element * scalar)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, VectorField):
            return self.element == other.element
        return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return self.element.is_zero()

    def demote(self) -> VectorField:
        return VectorField(self.element.demote())

    def __str__(self) -> str:
        return str(self.element)

    __repr__ = __str__


def bracket(x: VectorField, y: VectorField) -> VectorField:
    """Lie bracket of vector fields.

    Computed componentwise, [x, y]_i = sum_j (f_j d_j(g_i) - g_j d_j(f_i)),
    which agrees with the commutator x*y - y*x in the Weyl algebra.
    """
    if x.rank != y.rank:
        raise StructureError(f"rank mismatch: {x.rank} vs {y.rank}")
    n = x.rank
    fs = x.components()
    gs = y.components()
    comps = []
    for i in range(n):
        acc = WeylElement.zero(n, x.laurent or y.laurent)
        for j in range(n):
            acc = acc + fs[j] * _derivative(gs[i], j) - gs[j] * _derivative(fs[i], j)
        comps.append(acc)
    return VectorField.from_components(comps, x.laurent or y.laurent)


def _derivative(f: WeylElement, j: int) -> WeylElement:
    """d/dt_j of a (Laurent) polynomial, 0-based j."""
    terms = {}
    for (t_exp, d_exp), coeff in f.terms.items():
        if t_exp[j] == 0:
            continue
        new = list(t_exp)
        new[j] -= 1
        terms[(tuple(new), d_exp)] = coeff * t_exp[j]
    return WeylElement(f.rank, terms, f.laurent)


def divergence(x: VectorField) -> WeylElement:
    """sum_i d_i(f_i) as a polynomial in t."""
    if x.laurent:
        raise DomainError("divergence expects a polynomial-mode field")
    total = WeylElement.zero(x.rank)
    for i, f in enumerate(x.components()):
        total = total + _derivative(f, i)
    return total


def is_divergence_free(x: VectorField) -> bool:
    """Membership test for the simple subalgebra of divergence-zero fields."""
    return divergence(x).is_zero()


def has_constant_divergence(x: VectorField) -> bool:
    div = divergence(x)
    zero = mi_zero(x.rank)
    return all(key == (zero, zero) for key in div.terms)


def L_op(i: int, j: int, alpha, laurent: bool = False) -> VectorField:
    """The divergence-free generator attached to (i, j, alpha):

        t^alpha ((1+alpha_j) d_i - (1+alpha_i) d_j)   with d_i = t_i * d/dt_i,

    expanded to (1+alpha_j) t^(alpha+e_i) d/dt_i - (1+alpha_i) t^(alpha+e_j) d/dt_j.

    In polynomial mode the final exponents of the surviving terms must be
    nonnegative (alpha entries of -1 at i or j are fine: the matching
    coefficient vanishes).
    """
    alpha = tuple(alpha)
    n = len(alpha)
    if i == j:
        raise ArgumentError("indices must differ")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ArgumentError(f"indices out of range 1..{n}")
    ci = 1 + alpha[j - 1]
    cj = 1 + alpha[i - 1]
    terms = {}
    if ci != 0:
        exp = mi_add(alpha, mi_unit(i, n))
        terms[(exp, tuple(mi_unit(i, n)))] = ci
    if cj != 0:
        exp = mi_add(alpha, mi_unit(j, n))
        key = (exp, tuple(mi_unit(j, n)))
        terms[key] = terms.get(key, 0) - cj
    if not laurent:
        for (t_exp, _), coeff in list(terms.items()):
            if coeff != 0 and any(b < 0 for b in t_exp):
                raise DomainError(
                    f"alpha={alpha} yields a Laurent monomial in polynomial mode"
                )
    return VectorField(WeylElement(n, terms, laurent))


def monomial_field(t_exp, i: int, coeff=1, laurent=None) -> VectorField:
    """The field coeff * t^exp * d/dt_i, 1-based i."""
    t_exp = tuple(t_exp)
    n = len(t_exp)
    return VectorField(
        WeylElement.monomial(t_exp, tuple(mi_unit(i, n)), coeff, laurent)
    )


def commutator_in_weyl(x: VectorField, y: VectorField) -> WeylElement:
    """x*y - y*x computed by Weyl normal ordering (cross-check for bracket)."""
    return x.element * y.element - y.element * x.element
