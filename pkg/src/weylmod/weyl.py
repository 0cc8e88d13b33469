"""The Weyl algebra in n variables with normal-ordered sparse elements.

An element is a finite sum of monomials t^beta * d^gamma (all t factors to
the left of all derivative factors) with exact rational coefficients.
``laurent=True`` admits negative t exponents; derivative exponents are always
nonnegative.  Values are immutable once built: every operation allocates a
fresh element, so sharing across threads is safe.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import DomainError, StructureError
from .indices import binomial, falling, mi_zero


def _d_on_t(gamma, beta):
    """Normal ordering of d^gamma * t^beta.

    Yields (coeff, k) with k componentwise <= gamma so that

        d^gamma t^beta = sum coeff * t^(beta-k) d^(gamma-k).

    Expanding by the closed product formula (binomials times falling
    factorials per coordinate) instead of one-step rewriting keeps
    intermediate results linear in the output size.
    """
    per_coord = []
    for g, b in zip(gamma, beta):
        top = g if b < 0 else min(g, b)
        choices = []
        for k in range(top + 1):
            c = binomial(g, k) * falling(b, k)
            if c != 0:
                choices.append((k, c))
        per_coord.append(choices)
    for combo in itertools.product(*per_coord):
        coeff = 1
        for _, c in combo:
            coeff *= c
        yield coeff, tuple(k for k, _ in combo)


class WeylElement:
    """Sparse normal-ordered element of the (Laurent) Weyl algebra.

    Terms are stored sorted lexicographically on (tExp, dExp), so equal
    elements have identical representations and serialization is
    deterministic.
    """

    __slots__ = ("rank", "laurent", "terms")

    def __init__(self, rank: int, terms=None, laurent: bool = False):
        cleaned = {}
        if terms:
            for (t_exp, d_exp), coeff in terms.items():
                if coeff == 0:
                    continue
                if len(t_exp) != rank or len(d_exp) != rank:
                    raise StructureError("monomial rank does not match element rank")
                if any(g < 0 for g in d_exp):
                    raise StructureError(f"negative derivative exponent in {d_exp}")
                if not laurent and any(b < 0 for b in t_exp):
                    raise StructureError(
                        f"negative t exponent {t_exp} in polynomial mode"
                    )
                cleaned[(tuple(t_exp), tuple(d_exp))] = coeff
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "laurent", laurent)
        object.__setattr__(self, "terms", dict(sorted(cleaned.items())))

    def __setattr__(self, name, value):
        raise AttributeError("WeylElement is immutable")

    @property
    def mode(self) -> str:
        return "laurent" if self.laurent else "polynomial"

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, rank: int, laurent: bool = False) -> WeylElement:
        return cls(rank, {}, laurent)

    @classmethod
    def one(cls, rank: int, laurent: bool = False) -> WeylElement:
        z = mi_zero(rank)
        return cls(rank, {(z, z): 1}, laurent)

    @classmethod
    def monomial(cls, t_exp, d_exp, coeff=1, laurent=None) -> WeylElement:
        t_exp = tuple(t_exp)
        d_exp = tuple(d_exp)
        if laurent is None:
            laurent = any(b < 0 for b in t_exp)
        return cls(len(t_exp), {(t_exp, d_exp): coeff}, laurent)

    @classmethod
    def t_power(cls, t_exp, coeff=1, laurent=None) -> WeylElement:
        return cls.monomial(tuple(t_exp), mi_zero(len(t_exp)), coeff, laurent)

    # -- arithmetic ---------------------------------------------------------

    def _combine(self, other: WeylElement, sign: int) -> WeylElement:
        _check_same_rank(self, other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            new = terms.get(key, 0) + sign * coeff
            if new == 0:
                terms.pop(key, None)
            else:
                terms[key] = new
        return WeylElement(self.rank, terms, self.laurent or other.laurent)

    def __add__(self, other: WeylElement) -> WeylElement:
        return self._combine(other, 1)

    def __sub__(self, other: WeylElement) -> WeylElement:
        return self._combine(other, -1)

    def __neg__(self) -> WeylElement:
        return WeylElement(
            self.rank, {k: -c for k, c in self.terms.items()}, self.laurent
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return WeylElement(
                self.rank, {k: c * other for k, c in self.terms.items()}, self.laurent
            )
        _check_same_rank(self, other)
        out = {}
        for (b1, g1), c1 in self.terms.items():
            for (b2, g2), c2 in other.terms.items():
                base = c1 * c2
                for coeff, k in _d_on_t(g1, b2):
                    t_exp = tuple(x + y - z for x, y, z in zip(b1, b2, k))
                    d_exp = tuple(x + y - z for x, y, z in zip(g1, g2, k))
                    key = (t_exp, d_exp)
                    new = out.get(key, 0) + base * coeff
                    if new == 0:
                        out.pop(key, None)
                    else:
                        out[key] = new
        return WeylElement(self.rank, out, self.laurent or other.laurent)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, k: int) -> WeylElement:
        if k < 0:
            raise DomainError("negative powers are not defined")
        out = WeylElement.one(self.rank, self.laurent)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylElement):
            return NotImplemented
        # mode flags are bookkeeping, not part of the value
        return self.rank == other.rank and self.terms == other.terms

    __hash__ = None

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_polynomial_in_t(self) -> bool:
        return all(all(g == 0 for g in d_exp) for _, d_exp in self.terms)

    def d_degrees(self):
        return [sum(d_exp) for _, d_exp in self.terms]

    def demote(self) -> WeylElement:
        """Polynomial-mode copy when every t exponent allows it, else self."""
        if not self.laurent:
            return self
        if all(all(b >= 0 for b in t_exp) for t_exp, _ in self.terms):
            return WeylElement(self.rank, self.terms, laurent=False)
        return self

    def apply_poly(self, p: WeylElement) -> WeylElement:
        """Natural action on a polynomial: t multiplies, d differentiates.

        ``p`` must be a polynomial in t (no derivative factors, exponents
        >= 0).  This is the brute-force oracle for the product: it never goes
        through the normal-ordering expansion used by ``__mul__``.
        """
        if self.laurent:
            raise DomainError("laurent-mode operator cannot act on polynomials")
        _check_same_rank(self, p)
        if p.laurent or not p.is_polynomial_in_t():
            raise DomainError("operand is not a polynomial in t")
        out = {}
        zero = mi_zero(self.rank)
        for (beta, gamma), c in self.terms.items():
            for (mu, _), cp in p.terms.items():
                coeff = c * cp
                for m, g in zip(mu, gamma):
                    coeff *= falling(m, g)
                    if coeff == 0:
                        break
                if coeff == 0:
                    continue
                exp = tuple(m - g + b for m, g, b in zip(mu, gamma, beta))
                key = (exp, zero)
                new = out.get(key, 0) + coeff
                if new == 0:
                    out.pop(key, None)
                else:
                    out[key] = new
        return WeylElement(self.rank, out, laurent=False)

    # -- formatting ---------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (t_exp, d_exp), coeff in self.terms.items():
            factors = []
            for i, b in enumerate(t_exp):
                if b == 1:
                    factors.append(f"t[{i + 1}]")
                elif b != 0:
                    factors.append(f"t[{i + 1}]^{b}")
            for i, g in enumerate(d_exp):
                if g == 1:
                    factors.append(f"d[{i + 1}]")
                elif g != 0:
                    factors.append(f"d[{i + 1}]^{g}")
            body = "*".join(factors)
            if not body:
                parts.append(str(coeff))
            elif coeff == 1:
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
                {"tExp": list(te), "dExp": list(de), "coeff": str(Fraction(c))}
                for (te, de), c in self.terms.items()
            ],
        }

    @staticmethod
    def from_json_obj(obj) -> WeylElement:
        terms = {
            (tuple(rec["tExp"]), tuple(rec["dExp"])): Fraction(rec["coeff"])
            for rec in obj["terms"]
        }
        return WeylElement(obj["rank"], terms, obj["mode"] == "laurent")


def _check_same_rank(a: WeylElement, b: WeylElement) -> None:
    if a.rank != b.rank:
        raise StructureError(f"rank mismatch: {a.rank} vs {b.rank}")


def t(i: int, n: int) -> WeylElement:
    """The generator t_i, 1-based."""
    exp = tuple(1 if k == i - 1 else 0 for k in range(n))
    return WeylElement.monomial(exp, mi_zero(n))


def d(i: int, n: int) -> WeylElement:
    """The derivative generator, 1-based."""
    exp = tuple(1 if k == i - 1 else 0 for k in range(n))
    return WeylElement.monomial(mi_zero(n), exp)


def fourier(a: WeylElement) -> WeylElement:
    """Algebra automorphism with t_i -> d_i and d_i -> -t_i.

    Extended multiplicatively on monomials and re-normal-ordered, so
    fourier(a*b) == fourier(a)*fourier(b) and the fourth power is the
    identity.
    """
    if a.laurent:
        raise DomainError("fourier is defined on polynomial-mode elements")
    out = {}
    for (beta, gamma), c in a.terms.items():
        sign = -1 if sum(gamma) % 2 else 1
        base = c * sign
        # the image of the monomial is (+/-) d^beta t^gamma, normal-ordered
        for coeff, k in _d_on_t(beta, gamma):
            t_exp = tuple(g - x for g, x in zip(gamma, k))
            d_exp = tuple(b - x for b, x in zip(beta, k))
            key = (t_exp, d_exp)
            new = out.get(key, 0) + base * coeff
            if new == 0:
                out.pop(key, None)
            else:
                out[key] = new
    return WeylElement(a.rank, out, laurent=False)
