"""Operators in (Laurent-)Weyl tensor U(gl_n) and the embedding identities.

This module hosts the algebra map iota from vector fields into the tensor
algebra, its Laurent extension, the named operators built from degree-two
matrix-unit products, and the exact interpolation identities that express
t^alpha tensor E_ij^2 (and the g operator) through products of images of
divergence-free generators.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ArgumentError, StructureError
from .indices import mi_add, mi_sub, mi_unit, mi_zero
from .linalg import invert
from .ugl import E, UglElement
from .vectorfields import L_op, VectorField, bracket, monomial_field
from .weyl import WeylElement, _d_on_t


class TensorOperator:
    """Sparse element of (Laurent-)Weyl tensor U(gl_n).

    Terms map (weyl monomial, PBW monomial) pairs to exact coefficients;
    both factors are kept in their canonical orders, so a residual that
    cancels term-by-term leaves an empty map and equality is bit-exact.
    """

    __slots__ = ("rank", "laurent", "terms")

    def __init__(self, rank: int, terms=None, laurent: bool = False):
        cleaned = {}
        if terms:
            for (wmono, pmono), coeff in terms.items():
                if coeff == 0:
                    continue
                t_exp, d_exp = wmono
                if len(t_exp) != rank or len(d_exp) != rank:
                    raise StructureError("weyl factor rank mismatch")
                if not laurent and any(b < 0 for b in t_exp):
                    raise StructureError("negative t exponent in polynomial mode")
                cleaned[(wmono, pmono)] = coeff
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "laurent", laurent)
        object.__setattr__(self, "terms", dict(sorted(cleaned.items(), key=_term_key)))

    def __setattr__(self, name, value):
        raise AttributeError("TensorOperator is immutable")

    @property
    def mode(self) -> str:
        return "laurent" if self.laurent else "polynomial"

    @classmethod
    def zero(cls, rank: int, laurent: bool = False) -> TensorOperator:
        return cls(rank, {}, laurent)

    @classmethod
    def one(cls, rank: int, laurent: bool = False) -> TensorOperator:
        z = mi_zero(rank)
        return cls(rank, {((z, z), ()): 1}, laurent)

    def _combine(self, other: TensorOperator, sign: int) -> TensorOperator:
        if self.rank != other.rank:
            raise StructureError(f"rank mismatch: {self.rank} vs {other.rank}")
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            new = terms.get(key, 0) + sign * coeff
            if new == 0:
                terms.pop(key, None)
            else:
                terms[key] = new
        return TensorOperator(self.rank, terms, self.laurent or other.laurent)

    def __add__(self, other: TensorOperator) -> TensorOperator:
        return self._combine(other, 1)

    def __sub__(self, other: TensorOperator) -> TensorOperator:
        return self._combine(other, -1)

    def __neg__(self) -> TensorOperator:
        return TensorOperator(
            self.rank, {k: -c for k, c in self.terms.items()}, self.laurent
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TensorOperator(
                self.rank,
                {k: c * other for k, c in self.terms.items()},
                self.laurent,
            )
        if self.rank != other.rank:
            raise StructureError(f"rank mismatch: {self.rank} vs {other.rank}")
        n = self.rank
        out = {}
        for ((b1, g1), p1), c1 in self.terms.items():
            left_ugl = UglElement(n, {p1: 1})
            for ((b2, g2), p2), c2 in other.terms.items():
                base = c1 * c2
                pbw = (left_ugl * UglElement(n, {p2: 1})).terms
                for wcoeff, k in _d_on_t(g1, b2):
                    t_exp = tuple(x + y - z for x, y, z in zip(b1, b2, k))
                    d_exp = tuple(x + y - z for x, y, z in zip(g1, g2, k))
                    for pmono, pcoeff in pbw.items():
                        key = ((t_exp, d_exp), pmono)
                        new = out.get(key, 0) + base * wcoeff * pcoeff
                        if new == 0:
                            out.pop(key, None)
                        else:
                            out[key] = new
        return TensorOperator(n, out, self.laurent or other.laurent)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorOperator):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def demote(self) -> TensorOperator:
        """Polynomial-mode copy when every t exponent allows it, else self."""
        if not self.laurent:
            return self
        if all(all(b >= 0 for b in wm[0]) for wm, _ in self.terms):
            return TensorOperator(self.rank, self.terms, laurent=False)
        return self

    def weyl_factors(self):
        """The distinct Weyl monomials with their U(gl) cofactors."""
        out = {}
        for (wmono, pmono), coeff in self.terms.items():
            out.setdefault(wmono, {})[pmono] = coeff
        return {w: UglElement(self.rank, part) for w, part in out.items()}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for ((t_exp, d_exp), pmono), coeff in self.terms.items():
            weyl = WeylElement(self.rank, {(t_exp, d_exp): 1}, laurent=True)
            ugl = UglElement(self.rank, {pmono: 1})
            body = f"{weyl} (x) {ugl}"
            if coeff == 1:
                parts.append(body)
            elif coeff == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{coeff}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__

    def to_json_obj(self):
        return {
            "rank": self.rank,
            "mode": self.mode,
            "terms": [
                {
                    "tExp": list(te),
                    "dExp": list(de),
                    "factors": [[i, j, e] for (i, j), e in pmono],
                    "coeff": str(Fraction(c)),
                }
                for ((te, de), pmono), c in self.terms.items()
            ],
        }


def _term_key(item):
    (wmono, pmono), _ = item
    return (wmono, tuple((g, e) for g, e in pmono))


def tensor(a: WeylElement, u: UglElement) -> TensorOperator:
    """The simple tensor a (x) u, extended bilinearly over the terms."""
    if a.rank != u.rank:
        raise StructureError(f"rank mismatch: {a.rank} vs {u.rank}")
    terms = {}
    for wmono, wc in a.terms.items():
        for pmono, pc in u.terms.items():
            terms[(wmono, pmono)] = wc * pc
    return TensorOperator(a.rank, terms, a.laurent)


def from_weyl(a: WeylElement) -> TensorOperator:
    return tensor(a, UglElement.one(a.rank))


def shen_iota(x: VectorField) -> TensorOperator:
    """The embedding of vector fields into Weyl tensor U(gl_n):

        t^alpha d_i  |->  t^alpha d_i (x) 1 + sum_s d_s(t^alpha) (x) E_si.

    Polynomial fields land in polynomial mode; Laurent fields go through the
    Laurent extension of the same formula.
    """
    n = x.rank
    terms = {}

    def bump(key, coeff):
        new = terms.get(key, 0) + coeff
        if new == 0:
            terms.pop(key, None)
        else:
            terms[key] = new

    for (t_exp, d_exp), coeff in x.element.terms.items():
        i = d_exp.index(1) + 1
        bump(((t_exp, d_exp), ()), coeff)
        for s in range(1, n + 1):
            a_s = t_exp[s - 1]
            if a_s == 0:
                continue
            shifted = mi_sub(t_exp, mi_unit(s, n))
            bump(((shifted, mi_zero(n)), (((s, i), 1),)), coeff * a_s)
    return TensorOperator(n, terms, x.laurent)


def iota_hom_residual(x: VectorField, y: VectorField) -> TensorOperator:
    """iota([x, y]) - (iota(x) iota(y) - iota(y) iota(x)); zero by contract."""
    lhs = shen_iota(bracket(x, y))
    ix = shen_iota(x)
    iy = shen_iota(y)
    return lhs - (ix * iy - iy * ix)


def _special_indices(alpha, i: int):
    n = len(alpha)
    if not 1 <= i <= n - 2:
        raise ArgumentError(f"index {i} out of range 1..{n - 2}")
    return n, mi_unit(i, n), mi_unit(i + 1, n), mi_unit(i + 2, n)


def special_operator(kind: str, alpha, i: int) -> TensorOperator:
    """The named operators built from the degree-two matrix-unit products.

    All four are Laurent-mode in general; beta below is
    alpha + e_(i+1) + e_(i+2) - e_i.
    """
    alpha = tuple(alpha)
    n, ei, ei1, ei2 = _special_indices(alpha, i)
    beta = mi_sub(mi_add(alpha, mi_add(ei1, ei2)), ei)
    lau = True
    if kind == "g":
        return _op_f(alpha, i, n, ei, ei1, ei2, lau) + _g_minus_f(
            alpha, i, n, ei, ei1, ei2, beta, lau
        )
    if kind == "f":
        return _op_f(alpha, i, n, ei, ei1, ei2, lau)
    if kind == "u":
        out = _op_h(alpha, i, n, beta, lau)
        for s in range(1, n + 1):
            prod = WeylElement.monomial(mi_zero(n), mi_unit(s, n)) * WeylElement.t_power(
                beta, laurent=True
            )
            out = out - tensor(prod, E(s, i + 2, n) * E(i, i + 1, n))
        return out
    if kind == "h":
        return _op_h(alpha, i, n, beta, lau)
    raise ArgumentError(f"unknown operator kind {kind!r}")


def _op_f(alpha, i, n, ei, ei1, ei2, lau) -> TensorOperator:
    a_i = alpha[i - 1]
    a_i2 = alpha[i + 1]
    out = tensor(
        WeylElement.t_power(mi_add(mi_sub(alpha, ei), ei1), 1 + a_i2, laurent=lau),
        E(i, i, n) * E(i, i + 1, n) - E(i, i + 1, n),
    )
    out = out - tensor(
        WeylElement.t_power(mi_add(mi_sub(alpha, ei), ei2), laurent=lau),
        E(i, i + 2, n) * E(i, i, n),
    )
    out = out - tensor(
        WeylElement.t_power(
            mi_sub(mi_add(alpha, mi_add(ei1, ei2)), mi_add(ei, ei)), a_i, laurent=lau
        ),
        E(i, i + 2, n) * E(i, i + 1, n),
    )
    return out


def _g_minus_f(alpha, i, n, ei, ei1, ei2, beta, lau) -> TensorOperator:
    out = tensor(
        WeylElement.monomial(beta, mi_unit(i + 1, n), laurent=lau), E(i, i + 2, n)
    )
    out = out - tensor(
        WeylElement.monomial(beta, mi_unit(i + 2, n), laurent=lau), E(i, i + 1, n)
    )
    for s in range(1, n + 1):
        a_s = alpha[s - 1]
        if a_s != 0:
            out = out - tensor(
                WeylElement.t_power(mi_sub(beta, mi_unit(s, n)), a_s, laurent=lau),
                E(s, i + 2, n) * E(i, i + 1, n),
            )
    out = out - tensor(
        WeylElement.t_power(mi_add(mi_sub(alpha, ei), ei1), laurent=lau),
        E(i + 2, i + 2, n) * E(i, i + 1, n),
    )
    out = out + tensor(
        WeylElement.t_power(mi_add(mi_sub(alpha, ei), ei2), laurent=lau),
        E(i, i + 2, n) * E(i + 1, i + 1, n),
    )
    return out


def _op_h(alpha, i, n, beta, lau) -> TensorOperator:
    out = tensor(
        WeylElement.monomial(beta, mi_unit(i + 1, n), laurent=lau), E(i, i + 2, n)
    )
    out = out - tensor(
        WeylElement.monomial(beta, mi_unit(i + 2, n), laurent=lau), E(i, i + 1, n)
    )
    for s in range(1, n + 1):
        out = out + tensor(
            WeylElement.monomial(beta, mi_unit(s, n), laurent=lau),
            E(s, i + 2, n) * E(i, i + 1, n),
        )
    return out


def iota_hat_L(i: int, j: int, alpha) -> TensorOperator:
    """Laurent-mode image of the generator attached to (i, j, alpha)."""
    return shen_iota(L_op(i, j, alpha, laurent=True))


def cubic_m_product(alpha, i: int, j: int, m: int) -> TensorOperator:
    """iota_hat(L_ij^(alpha - m e_i)) * iota_hat(t^(m e_i) d_j)."""
    alpha = tuple(alpha)
    n = len(alpha)
    left = iota_hat_L(i, j, mi_sub(alpha, tuple(m * x for x in mi_unit(i, n))))
    right = shen_iota(
        monomial_field(tuple(m * x for x in mi_unit(i, n)), j, laurent=True)
    )
    return left * right


def cubic_identity_residual(alpha, i: int, j: int) -> TensorOperator:
    """Residual of the four-point identity expressing t^(alpha+e_j-2e_i) E_ij^2.

    Zero for every integer alpha; the right-hand side is the fixed rational
    combination of the products at m = 3, 2, 1, 0.
    """
    alpha = tuple(alpha)
    n = len(alpha)
    if i == j:
        raise ArgumentError("indices must differ")
    target_exp = mi_sub(mi_add(alpha, mi_unit(j, n)), tuple(2 * x for x in mi_unit(i, n)))
    target = tensor(
        WeylElement.t_power(target_exp, laurent=True), E(i, j, n) * E(i, j, n)
    )
    rhs = (
        cubic_m_product(alpha, i, j, 3) * Fraction(-1, 6)
        + cubic_m_product(alpha, i, j, 2) * Fraction(1, 2)
        + cubic_m_product(alpha, i, j, 1) * Fraction(-1, 2)
        + cubic_m_product(alpha, i, j, 0) * Fraction(1, 6)
    )
    return target - rhs


def quartic_m_product(alpha, i: int, m: int) -> TensorOperator:
    """iota_hat(L_(i,i+2)^(alpha - m e_i)) * iota_hat(L_(i,i+1)^(m e_i))."""
    alpha = tuple(alpha)
    n = len(alpha)
    shift = tuple(m * x for x in mi_unit(i, n))
    left = iota_hat_L(i, i + 2, mi_sub(alpha, shift))
    right = iota_hat_L(i, i + 1, shift)
    return left * right


def quartic_identity_residual(alpha, i: int) -> TensorOperator:
    """Residual of the five-point identity recovering the g operator.

    Zero for every integer alpha; the right-hand side combines the products
    at m = 3, 2, 1, 0, -1 with the fixed rational weights.
    """
    alpha = tuple(alpha)
    _special_indices(alpha, i)
    rhs = (
        quartic_m_product(alpha, i, 3) * Fraction(-1, 12)
        + quartic_m_product(alpha, i, 2) * Fraction(1, 2)
        + quartic_m_product(alpha, i, 1) * Fraction(-1)
        + quartic_m_product(alpha, i, 0) * Fraction(5, 6)
        + quartic_m_product(alpha, i, -1) * Fraction(-1, 4)
    )
    return special_operator("g", alpha, i) - rhs


def interpolate_coefficients(values, nodes):
    """Exact polynomial interpolation over tensor operators.

    Given operator values P(m) at pairwise-distinct integer nodes, return the
    coefficient operators [c_0, ..., c_(deg)] with P(m) = sum c_k m^k.  The
    solve inverts the Vandermonde matrix over the rationals, which also
    certifies it nonsingular.
    """
    if len(values) != len(nodes) or not values:
        raise ArgumentError("need one value per node")
    deg = len(nodes) - 1
    vander = [[Fraction(m) ** k for k in range(deg + 1)] for m in nodes]
    inv = invert(vander)
    rank = values[0].rank
    coeffs = []
    for k in range(deg + 1):
        acc = TensorOperator.zero(rank, laurent=True)
        for t_idx, val in enumerate(values):
            acc = acc + val * inv[k][t_idx]
        coeffs.append(acc)
    return coeffs
