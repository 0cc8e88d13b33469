"""Weight modules over the Weyl algebra, finite-dimensional gl_n-modules,
and the tensor modules that combine them.

A simple weight module factors coordinatewise into three kinds: the shifted
Laurent line t^lambda C[t,1/t], the polynomial line C[t], and the twisted
quotient C[t,1/t]/C[t].  Basis keys store only the integer offset; the
lambda shift lives in the factor descriptor, so all arithmetic stays exact.

Finite-dimensional modules carry explicit exact action matrices for every
matrix unit plus a scalar for the identity matrix.  Fundamental modules are
exterior powers of the natural module; general dominant weights are realized
by closing a highest-weight vector under the lowering operators inside a
tensor power, with the Weyl dimension formula as an independent check.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .errors import ArgumentError, DomainError, StructureError
from .indices import falling
from .linalg import RowBasis
from .tensorop import TensorOperator, shen_iota
from .vectorfields import VectorField, is_divergence_free
from .weyl import WeylElement

POLY = "poly"
TWIST = "twist"
LAURENT = "laurent"


class Factor:
    """One coordinate factor of a weight module."""

    __slots__ = ("kind", "shift")

    def __init__(self, kind: str, shift=None):
        if kind not in (POLY, TWIST, LAURENT):
            raise ArgumentError(f"unknown factor kind {kind!r}")
        if kind == LAURENT:
            shift = Fraction(shift if shift is not None else Fraction(1, 2))
            if shift.denominator == 1:
                raise StructureError("laurent shift must not be an integer")
        elif shift is not None:
            raise ArgumentError(f"{kind} factor takes no shift")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "shift", shift)

    def __setattr__(self, name, value):
        raise AttributeError("Factor is immutable")

    def supports(self, k: int) -> bool:
        if self.kind == POLY:
            return k >= 0
        if self.kind == TWIST:
            return k <= -1
        return True

    def exponent(self, k: int):
        """The true t exponent of basis key k (lambda + k on a Laurent line)."""
        return k + self.shift if self.kind == LAURENT else k

    def __eq__(self, other):
        return (
            isinstance(other, Factor)
            and self.kind == other.kind
            and self.shift == other.shift
        )

    def __hash__(self):
        return hash((self.kind, self.shift))

    def __repr__(self):
        if self.kind == LAURENT:
            return f"laurent({self.shift})"
        return self.kind


class WeightModuleP:
    """A simple weight module presented as a product of coordinate factors."""

    __slots__ = ("rank", "factors")

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise ArgumentError("need at least one factor")
        object.__setattr__(self, "rank", len(factors))
        object.__setattr__(self, "factors", factors)

    def __setattr__(self, name, value):
        raise AttributeError("WeightModuleP is immutable")

    @classmethod
    def polynomial(cls, n: int) -> WeightModuleP:
        return cls([Factor(POLY)] * n)

    @classmethod
    def twisted(cls, n: int) -> WeightModuleP:
        return cls([Factor(TWIST)] * n)

    @classmethod
    def laurent(cls, n: int, shift=Fraction(1, 2)) -> WeightModuleP:
        return cls([Factor(LAURENT, shift)] * n)

    def supports_key(self, key) -> bool:
        return all(f.supports(k) for f, k in zip(self.factors, key))

    def exponents(self, key):
        return tuple(f.exponent(k) for f, k in zip(self.factors, key))

    def basis_vector(self, key) -> PVector:
        key = tuple(key)
        if not self.supports_key(key):
            raise DomainError(f"key {key} outside the support")
        return PVector(self, {key: 1})

    def __eq__(self, other):
        return isinstance(other, WeightModuleP) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return "[" + ",".join(repr(f) for f in self.factors) + "]"


def parse_module_descriptor(text: str) -> WeightModuleP:
    """Parse descriptors like "[poly, twist, laurent(1/2)]"."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    factors = []
    depth = 0
    piece = ""
    for ch in body + ",":
        if ch == "," and depth == 0:
            token = piece.strip()
            piece = ""
            if not token:
                continue
            if token == POLY:
                factors.append(Factor(POLY))
            elif token == TWIST:
                factors.append(Factor(TWIST))
            elif token.startswith("laurent"):
                inner = token[len("laurent"):].strip()
                if inner.startswith("(") and inner.endswith(")"):
                    factors.append(Factor(LAURENT, Fraction(inner[1:-1])))
                elif not inner:
                    factors.append(Factor(LAURENT))
                else:
                    raise ArgumentError(f"bad factor token {token!r}")
            else:
                raise ArgumentError(f"bad factor token {token!r}")
        else:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            piece += ch
    if not factors:
        raise ArgumentError(f"empty module descriptor {text!r}")
    return WeightModuleP(factors)


def _monomial_on_key(module: WeightModuleP, key, t_exp, d_exp):
    """Apply t^b d^g to the basis vector at key.  Returns (coeff, key) or None.

    Boundary rules per factor: a polynomial line kills keys that would turn
    negative, a twisted quotient kills keys that would reach zero or above,
    and the coefficient is the product of falling factorials of the true
    exponents.
    """
    coeff = 1
    out = []
    for f, k, b, g in zip(module.factors, key, t_exp, d_exp):
        c = falling(f.exponent(k), g)
        if c == 0:
            return None
        new = k - g + b
        if f.kind == POLY and new < 0:
            return None
        if f.kind == TWIST and new > -1:
            return None
        coeff *= c
        out.append(new)
    return coeff, tuple(out)


class PVector:
    """Sparse vector in a weight module, keyed by integer offsets."""

    __slots__ = ("module", "terms")

    def __init__(self, module: WeightModuleP, terms=None):
        cleaned = {}
        if terms:
            for key, coeff in terms.items():
                if coeff == 0:
                    continue
                key = tuple(key)
                if not module.supports_key(key):
                    raise StructureError(f"key {key} outside the support")
                cleaned[key] = coeff
        object.__setattr__(self, "module", module)
        object.__setattr__(self, "terms", dict(sorted(cleaned.items())))

    def __setattr__(self, name, value):
        raise AttributeError("PVector is immutable")

    def __add__(self, other: PVector) -> PVector:
        if self.module != other.module:
            raise StructureError("vectors live in different modules")
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            new = terms.get(key, 0) + coeff
            if new == 0:
                terms.pop(key, None)
            else:
                terms[key] = new
        return PVector(self.module, terms)

    def __sub__(self, other: PVector) -> PVector:
        return self + (other * -1)

    def __mul__(self, scalar) -> PVector:
        return PVector(self.module, {k: c * scalar for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PVector):
            return NotImplemented
        return self.module == other.module and self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*t^{k}" for k, c in self.terms.items()).replace(
            "+ -", "- "
        )


def weyl_act(a: WeylElement, v: PVector, allow_laurent: bool = False) -> PVector:
    """Action of a Weyl element on a weight-module vector.

    Polynomial-mode operators act exactly; Laurent-mode operators are only
    admitted with allow_laurent=True, where keys pushed out of the support
    contribute zero (the quotient-module boundary rule).
    """
    if a.laurent and not allow_laurent:
        raise DomainError("laurent-mode operator acting on a module")
    if a.rank != v.module.rank:
        raise StructureError("rank mismatch")
    out = {}
    for (t_exp, d_exp), c in a.terms.items():
        for key, cv in v.terms.items():
            hit = _monomial_on_key(v.module, key, t_exp, d_exp)
            if hit is None:
                continue
            coeff, new_key = hit
            new = out.get(new_key, 0) + c * cv * coeff
            if new == 0:
                out.pop(new_key, None)
            else:
                out[new_key] = new
    return PVector(v.module, out)


# ---------------------------------------------------------------------------
# finite-dimensional gl_n-modules
# ---------------------------------------------------------------------------


class SLModule:
    """Finite-dimensional gl_n-module with exact matrix-unit action.

    ``matrices[(i, j)][src]`` lists (dst, coeff) pairs; ``weights[k]`` is the
    tuple of diagonal eigenvalues of basis vector k; ``central`` is the
    scalar action of the identity matrix.
    """

    __slots__ = ("rank", "labels", "weights", "matrices", "central", "name")

    def __init__(self, rank, labels, weights, matrices, central, name=""):
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "labels", list(labels))
        object.__setattr__(self, "weights", [tuple(w) for w in weights])
        object.__setattr__(self, "matrices", matrices)
        object.__setattr__(self, "central", central)
        object.__setattr__(self, "name", name or f"module(dim={len(self.labels)})")

    def __setattr__(self, name, value):
        raise AttributeError("SLModule is immutable")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def apply_gen(self, i: int, j: int, vec: dict) -> dict:
        cols = self.matrices[(i, j)]
        out = {}
        for src, c in vec.items():
            for dst, m in cols[src]:
                new = out.get(dst, 0) + c * m
                if new == 0:
                    out.pop(dst, None)
                else:
                    out[dst] = new
        return out

    def apply_pbw(self, pmono, vec: dict) -> dict:
        """Apply a PBW monomial, rightmost factor first."""
        gens = []
        for (i, j), e in pmono:
            gens.extend([(i, j)] * e)
        for i, j in reversed(gens):
            if not vec:
                return {}
            vec = self.apply_gen(i, j, vec)
        return vec

    def check_commutators(self) -> bool:
        """[E_ij, E_kl] = delta_jk E_il - delta_li E_kj on every basis vector."""
        n = self.rank
        idx = range(1, n + 1)
        for i, j, k, l in itertools.product(idx, repeat=4):
            for src in range(self.dim):
                vec = {src: 1}
                lhs = _dict_sub(
                    self.apply_gen(i, j, self.apply_gen(k, l, vec)),
                    self.apply_gen(k, l, self.apply_gen(i, j, vec)),
                )
                rhs = {}
                if j == k:
                    rhs = _dict_add(rhs, self.apply_gen(i, l, vec))
                if l == i:
                    rhs = _dict_sub(rhs, self.apply_gen(k, j, vec))
                if lhs != rhs:
                    return False
        return True

    def __repr__(self):
        return self.name


def _dict_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        new = out.get(k, 0) + v
        if new == 0:
            out.pop(k, None)
        else:
            out[k] = new
    return out


def _dict_sub(a: dict, b: dict) -> dict:
    return _dict_add(a, {k: -v for k, v in b.items()})


@lru_cache(maxsize=None)
def make_wedge_module(n: int, r: int) -> SLModule:
    """The r-th exterior power of the natural module, with I acting as r.

    Cached so the same (n, r) always yields the same instance; vectors over
    the same exterior power then compare by module identity.  Treat the
    returned module as read-only.
    """
    if not 0 <= r <= n:
        raise ArgumentError(f"wedge degree {r} out of range 0..{n}")
    labels = [tuple(c) for c in itertools.combinations(range(1, n + 1), r)]
    index = {lab: pos for pos, lab in enumerate(labels)}
    weights = [
        tuple(1 if s in lab else 0 for s in range(1, n + 1)) for lab in labels
    ]
    matrices = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            cols = [[] for _ in labels]
            for src, lab in enumerate(labels):
                if j not in lab:
                    continue
                if i != j and i in lab:
                    continue
                hit = wedge_replace(lab, j, i)
                if hit is None:
                    continue
                sign, new_lab = hit
                cols[src].append((index[new_lab], sign))
            matrices[(i, j)] = cols
    return SLModule(n, labels, weights, matrices, Fraction(r), name=f"wedge({n},{r})")


def wedge_replace(label, j: int, i: int):
    """Replace the factor e_j by e_i inside a sorted wedge label."""
    if j not in label:
        return None
    if i != j and i in label:
        return None
    rest = [x for x in label if x != j]
    crossings = sum(1 for x in rest if min(i, j) < x < max(i, j))
    sign = -1 if crossings % 2 else 1
    return sign, tuple(sorted(rest + [i]))


def tensor_module(m1: SLModule, m2: SLModule) -> SLModule:
    """Tensor product with the Leibniz action of every matrix unit."""
    if m1.rank != m2.rank:
        raise StructureError("rank mismatch")
    n = m1.rank
    labels = [(a, b) for a in m1.labels for b in m2.labels]
    weights = [
        tuple(x + y for x, y in zip(m1.weights[a], m2.weights[b]))
        for a in range(m1.dim)
        for b in range(m2.dim)
    ]
    matrices = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            cols = [[] for _ in labels]
            c1 = m1.matrices[(i, j)]
            c2 = m2.matrices[(i, j)]
            for a in range(m1.dim):
                for b in range(m2.dim):
                    src = a * m2.dim + b
                    for dst, coeff in c1[a]:
                        cols[src].append((dst * m2.dim + b, coeff))
                    for dst, coeff in c2[b]:
                        cols[src].append((a * m2.dim + dst, coeff))
            matrices[(i, j)] = cols
    return SLModule(
        n,
        labels,
        weights,
        matrices,
        m1.central + m2.central,
        name=f"{m1.name}(x){m2.name}",
    )


def weyl_dimension(psi, n: int) -> int:
    """Weyl dimension formula for the dominant weight sum psi_k delta_k.

    Independent oracle for the lowering-closure construction below: with
    partition coordinates lambda_i = sum_(k >= i) psi_k the dimension is
    prod_(i<j) (lambda_i - lambda_j + j - i) / (j - i).
    """
    if len(psi) != n - 1 or any(p < 0 for p in psi):
        raise ArgumentError("psi must be n-1 nonnegative integers")
    lam = [sum(psi[k] for k in range(i, n - 1)) for i in range(n)]
    num = 1
    den = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= lam[i] - lam[j] + j - i
            den *= j - i
    return num // den


def make_hw_module(psi, n: int) -> SLModule:
    """Simple module with highest weight sum psi_k delta_k, as a gl_n-module.

    Realized inside a tensor product of exterior powers: start from the
    product of the wedge highest-weight vectors and close under the lowering
    generators, echelonizing per weight.  The identity matrix acts by the
    total tensor degree.  Dimension is checked against the Weyl formula.
    """
    psi = tuple(psi)
    expected_dim = weyl_dimension(psi, n)
    if all(p == 0 for p in psi):
        return make_wedge_module(n, 0)
    ambient = None
    for k in range(1, n):
        for _ in range(psi[k - 1]):
            wedge = make_wedge_module(n, k)
            ambient = wedge if ambient is None else tensor_module(ambient, wedge)
    # the per-factor highest label (1..k) sits at position 0 of each wedge
    # basis, so the tensor index of the product of highest vectors is 0
    highest = {0: Fraction(1)}
    blocks: dict = {}
    w0 = _common_weight(ambient, highest)
    blocks[w0] = RowBasis(ambient.dim)
    _insert_dense(blocks[w0], highest, ambient.dim)
    # breadth-first lowering closure
    queue = [highest]
    while queue:
        vec = queue.pop()
        for i in range(1, n):
            low = ambient.apply_gen(i + 1, i, vec)
            if not low:
                continue
            w = _common_weight(ambient, low)
            basis = blocks.setdefault(w, RowBasis(ambient.dim))
            if _insert_dense(basis, low, ambient.dim):
                queue.append(low)
    total = sum(b.dim for b in blocks.values())
    if total != expected_dim:
        raise StructureError(
            f"closure found dimension {total}, Weyl formula gives {expected_dim}"
        )
    # canonical basis order: weights descending, then echelon order
    weight_order = sorted(blocks, reverse=True)
    flat_rows = []
    weights = []
    offsets = {}
    for w in weight_order:
        offsets[w] = len(flat_rows)
        for row in blocks[w].rows:
            flat_rows.append(row)
            weights.append(w)
    matrices = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            cols = [[] for _ in flat_rows]
            for src, row in enumerate(flat_rows):
                vec = {idx: c for idx, c in enumerate(row) if c != 0}
                image = ambient.apply_gen(i, j, vec)
                if not image:
                    continue
                w = _common_weight(ambient, image)
                basis = blocks.get(w)
                if basis is None:
                    raise StructureError("closure is not stable under gl action")
                dense = [0] * ambient.dim
                for idx, c in image.items():
                    dense[idx] = c
                if not basis.contains(dense):
                    raise StructureError("closure is not stable under gl action")
                coords = [dense[p] for p in basis.pivots]
                for k, c in enumerate(coords):
                    if c != 0:
                        cols[src].append((offsets[w] + k, c))
            matrices[(i, j)] = cols
    labels = [f"v{k}" for k in range(len(flat_rows))]
    central = ambient.central
    name = "V(" + "+".join(f"{p}d{k+1}" for k, p in enumerate(psi) if p) + f",{n})"
    return SLModule(n, labels, weights, matrices, central, name=name)


def _common_weight(module: SLModule, vec: dict):
    weights = {module.weights[idx] for idx in vec}
    if len(weights) != 1:
        raise StructureError("vector is not a weight vector")
    return next(iter(weights))


def _insert_dense(basis: RowBasis, vec: dict, ncols: int) -> bool:
    dense = [0] * ncols
    for idx, c in vec.items():
        dense[idx] = c
    return basis.insert(dense)


# ---------------------------------------------------------------------------
# tensor modules F(P, M)
# ---------------------------------------------------------------------------


class FVector:
    """Sparse vector of the tensor module built from P and M."""

    __slots__ = ("module_p", "module_m", "terms")

    def __init__(self, module_p: WeightModuleP, module_m: SLModule, terms=None):
        if module_p.rank != module_m.rank:
            raise StructureError("rank mismatch between the two factors")
        cleaned = {}
        if terms:
            for (key, midx), coeff in terms.items():
                if coeff == 0:
                    continue
                key = tuple(key)
                if not module_p.supports_key(key):
                    raise StructureError(f"key {key} outside the support")
                if not 0 <= midx < module_m.dim:
                    raise StructureError(f"bad basis index {midx}")
                cleaned[(key, midx)] = coeff
        object.__setattr__(self, "module_p", module_p)
        object.__setattr__(self, "module_m", module_m)
        object.__setattr__(self, "terms", dict(sorted(cleaned.items())))

    def __setattr__(self, name, value):
        raise AttributeError("FVector is immutable")

    @classmethod
    def basis(cls, module_p, module_m, key, label_or_index) -> FVector:
        if isinstance(label_or_index, int):
            midx = label_or_index
        else:
            midx = module_m.labels.index(label_or_index)
        return cls(module_p, module_m, {(tuple(key), midx): 1})

    def _check_same(self, other: FVector):
        if self.module_p != other.module_p or self.module_m is not other.module_m:
            raise StructureError("vectors live in different modules")

    def __add__(self, other: FVector) -> FVector:
        self._check_same(other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            new = terms.get(key, 0) + coeff
            if new == 0:
                terms.pop(key, None)
            else:
                terms[key] = new
        return FVector(self.module_p, self.module_m, terms)

    def __sub__(self, other: FVector) -> FVector:
        return self + (other * -1)

    def __mul__(self, scalar) -> FVector:
        return FVector(
            self.module_p,
            self.module_m,
            {k: c * scalar for k, c in self.terms.items()},
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FVector):
            return NotImplemented
        return (
            self.module_p == other.module_p
            and self.module_m is other.module_m
            and self.terms == other.terms
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def weight_of(self, key, midx):
        return tuple(k + w for k, w in zip(key, self.module_m.weights[midx]))

    def weights(self):
        return sorted({self.weight_of(key, midx) for key, midx in self.terms})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (key, midx), c in self.terms.items():
            parts.append(f"{c}*t^{key}(x){self.module_m.labels[midx]}")
        return " + ".join(parts).replace("+ -", "- ")


def tensor_act(T: TensorOperator, w: FVector, allow_laurent: bool = False) -> FVector:
    """Action of a tensor operator: (a (x) u)(p (x) v) = (a p) (x) (u v).

    Laurent-mode operators require allow_laurent=True; each tensor term is
    first demoted to polynomial mode when its exponents permit, otherwise the
    factor action applies with the support boundary sending escaped keys to
    zero.
    """
    if T.laurent and not allow_laurent:
        if T.demote().laurent:
            raise DomainError("laurent-mode operator acting on a module")
        T = T.demote()
    if T.rank != w.module_p.rank:
        raise StructureError("rank mismatch")
    module_p, module_m = w.module_p, w.module_m
    out = {}
    # group the module vector by M index so each PBW application is done once
    by_midx: dict = {}
    for (key, midx), cv in w.terms.items():
        by_midx.setdefault(midx, []).append((key, cv))
    for ((t_exp, d_exp), pmono), c in T.terms.items():
        for midx, entries in by_midx.items():
            mvec = module_m.apply_pbw(pmono, {midx: 1})
            if not mvec:
                continue
            for key, cv in entries:
                hit = _monomial_on_key(module_p, key, t_exp, d_exp)
                if hit is None:
                    continue
                coeff, new_key = hit
                base = c * cv * coeff
                for dst, mc in mvec.items():
                    k2 = (new_key, dst)
                    new = out.get(k2, 0) + base * mc
                    if new == 0:
                        out.pop(k2, None)
                    else:
                        out[k2] = new
    return FVector(module_p, module_m, out)


def sn_act(x: VectorField, w: FVector) -> FVector:
    """Action of a divergence-free field through the iota embedding."""
    x = x.demote()
    if x.laurent:
        raise DomainError("laurent-mode field acting on a module")
    if not is_divergence_free(x):
        raise DomainError("field is not divergence free")
    return tensor_act(shen_iota(x), w)
