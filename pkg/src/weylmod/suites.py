"""Named verification checks shared by the command line and the test suite.

Every check is a plain top-level function returning a JSON-ready dict with
at least {"check", "params", "pass"}; failures carry enough context to
reproduce.  Randomized checks draw from a seed (SHENWEYL_SEED or the given
value), so identical configurations produce identical reports.
"""

from __future__ import annotations

import itertools
import os
import random
from fractions import Fraction

from .derham import (
    partial_span,
    pi,
    pi_kernel,
    verify_g_equals_u,
    verify_h_annihilates,
)
from .indices import TruncationBox, mi_sub, mi_unit
from .structure import GeneratorSet, evidence_simplicity
from .tensorop import (
    TensorOperator,
    cubic_m_product,
    interpolate_coefficients,
    iota_hom_residual,
    quartic_m_product,
    special_operator,
    tensor,
)
from .ugl import E
from .vectorfields import L_op, monomial_field
from .weightmod import (
    Factor,
    FVector,
    WeightModuleP,
    make_wedge_module,
    sn_act,
)
from .weyl import WeylElement


DEFAULT_SEED = 20240801


def get_seed(seed=None) -> int:
    if seed is not None:
        return int(seed)
    return int(os.environ.get("SHENWEYL_SEED", DEFAULT_SEED))


def _monomial_fields(n: int, deg: int):
    out = []
    for exp in itertools.product(range(deg + 1), repeat=n):
        if sum(exp) > deg:
            continue
        for i in range(1, n + 1):
            out.append((exp, i))
    return out


def check_iota_hom(n: int, deg: int):
    """Residual of the embedding on all monomial field pairs up to degree."""
    fields = _monomial_fields(n, deg)
    failures = []
    checked = 0
    residual_terms = 0
    for (a_exp, i), (b_exp, j) in itertools.product(fields, repeat=2):
        x = monomial_field(a_exp, i)
        y = monomial_field(b_exp, j)
        checked += 1
        residual = iota_hom_residual(x, y)
        if not residual.is_zero():
            residual_terms += len(residual.terms)
            failures.append({"x": [list(a_exp), i], "y": [list(b_exp), j]})
    return {
        "check": "iota-hom",
        "params": {"n": n, "deg": deg},
        "checked": checked,
        "residual_terms": residual_terms,
        "failures": failures[:10],
        "pass": not failures,
    }


_CUBIC_WEIGHTS = {3: Fraction(-1, 6), 2: Fraction(1, 2), 1: Fraction(-1, 2), 0: Fraction(1, 6)}
_QUARTIC_WEIGHTS = {
    3: Fraction(-1, 12),
    2: Fraction(1, 2),
    1: Fraction(-1),
    0: Fraction(5, 6),
    -1: Fraction(-1, 4),
}


def check_eq_cubic(n: int, lo: int = -2, hi: int = 3, pairs=None):
    """The four-point identity for t^(alpha+e_j-2e_i) (x) E_ij^2.

    Checks the fixed rational combination and, node for node, the exact
    interpolation recovering the same leading operator; also records whether
    the right-hand factors demote to polynomial mode when alpha admits it.
    """
    if pairs is None:
        pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    failures = []
    checked = 0
    residual_terms = 0
    membership_checked = 0
    for i, j in pairs:
        for alpha in itertools.product(range(lo, hi + 1), repeat=n):
            products = {m: cubic_m_product(alpha, i, j, m) for m in range(4)}
            target = tensor(
                WeylElement.t_power(
                    mi_sub(
                        tuple(a + b for a, b in zip(alpha, mi_unit(j, n))),
                        tuple(2 * x for x in mi_unit(i, n)),
                    ),
                    laurent=True,
                ),
                E(i, j, n) * E(i, j, n),
            )
            rhs = TensorOperator.zero(n, laurent=True)
            for m, c in _CUBIC_WEIGHTS.items():
                rhs = rhs + products[m] * c
            checked += 1
            residual = target - rhs
            residual_terms += len(residual.terms)
            ok = residual.is_zero()
            coeffs = interpolate_coefficients(
                [products[m] for m in range(4)], list(range(4))
            )
            ok = ok and coeffs[3] == target * Fraction(-1)
            if ok and all(
                alpha[s] >= (2 if s == i - 1 else (-1 if s == j - 1 else 0))
                for s in range(n)
            ):
                membership_checked += 1
                for m in range(4):
                    shift = tuple(m * x for x in mi_unit(i, n))
                    left = L_op(i, j, mi_sub(alpha, shift), laurent=True)
                    right = monomial_field(shift, j, laurent=True)
                    if left.element.demote().laurent or right.element.demote().laurent:
                        ok = False
            if not ok:
                failures.append({"alpha": list(alpha), "i": i, "j": j})
    return {
        "check": "eq-cubic",
        "params": {"n": n, "window": [lo, hi]},
        "checked": checked,
        "residual_terms": residual_terms,
        "polynomialWitnesses": membership_checked,
        "failures": failures[:10],
        "pass": not failures,
    }


def check_eq_quartic(n: int, lo: int = -2, hi: int = 3, i_list=None):
    """The five-point identity recovering the g operator, plus the exact
    Vandermonde reconstruction from the same five products."""
    if i_list is None:
        i_list = list(range(1, n - 1))
    failures = []
    checked = 0
    residual_terms = 0
    membership_checked = 0
    nodes = [-1, 0, 1, 2, 3]
    for i in i_list:
        for alpha in itertools.product(range(lo, hi + 1), repeat=n):
            products = {m: quartic_m_product(alpha, i, m) for m in nodes}
            g = special_operator("g", alpha, i)
            rhs = TensorOperator.zero(n, laurent=True)
            for m, c in _QUARTIC_WEIGHTS.items():
                rhs = rhs + products[m] * c
            checked += 1
            residual = g - rhs
            residual_terms += len(residual.terms)
            ok = residual.is_zero()
            coeffs = interpolate_coefficients([products[m] for m in nodes], nodes)
            ok = ok and coeffs[3] == g
            if ok and all(
                alpha[s] >= (2 if s == i - 1 else (-1 if s == i + 1 else 0))
                for s in range(n)
            ):
                membership_checked += 1
                for m in nodes:
                    shift = tuple(m * x for x in mi_unit(i, n))
                    left = L_op(i, i + 2, mi_sub(alpha, shift), laurent=True)
                    right = L_op(i, i + 1, shift, laurent=True)
                    if left.element.demote().laurent or right.element.demote().laurent:
                        ok = False
            if not ok:
                failures.append({"alpha": list(alpha), "i": i})
    return {
        "check": "eq-quartic",
        "params": {"n": n, "window": [lo, hi]},
        "checked": checked,
        "residual_terms": residual_terms,
        "polynomialWitnesses": membership_checked,
        "failures": failures[:10],
        "pass": not failures,
    }


def standard_profiles(n: int, shift=Fraction(1, 2)):
    """The three weight-module profiles used throughout the evidence suites."""
    return {
        "poly": WeightModuleP.polynomial(n),
        "laurent": WeightModuleP.laurent(n, shift),
        "one-twist": WeightModuleP([Factor("twist")] + [Factor("poly")] * (n - 1)),
    }


def _profile_key_box(P: WeightModuleP, radius: int) -> TruncationBox:
    lower = []
    upper = []
    for f in P.factors:
        if f.kind == "poly":
            lower.append(0)
            upper.append(radius)
        elif f.kind == "twist":
            lower.append(-radius)
            upper.append(-1)
        else:
            lower.append(-radius)
            upper.append(radius)
    return TruncationBox(tuple(lower), tuple(upper))


def check_g_u(n: int, delta_hi: int = 2, key_radius: int = 3, profiles=None,
              shift="1/2"):
    """g = u on every p (x) v over the admissible alpha window."""
    if profiles is None:
        profiles = standard_profiles(n, Fraction(shift))
    sub = []
    ok = True
    for name, P in profiles.items():
        key_box = _profile_key_box(P, key_radius)
        for r in range(2, n):
            for i in range(1, n - 1):
                base = mi_sub(
                    tuple(2 * x for x in mi_unit(i, n)), mi_unit(i + 2, n)
                )
                for delta in itertools.product(range(delta_hi + 1), repeat=n):
                    alpha = tuple(b + d for b, d in zip(base, delta))
                    report = verify_g_equals_u(alpha, i, P, r, key_box)
                    ok = ok and report["pass"]
                    sub.append(
                        {
                            "profile": name,
                            "r": r,
                            "i": i,
                            "alpha": list(alpha),
                            "checked": report["checked"],
                            "pass": report["pass"],
                        }
                    )
    return {
        "check": "g-equals-u",
        "params": {"n": n, "deltaWindow": delta_hi, "keyRadius": key_radius},
        "cases": len(sub),
        "checked": sum(s["checked"] for s in sub),
        "failures": [s for s in sub if not s["pass"]][:10],
        "pass": ok,
    }


def check_h_ln(n: int, delta_hi: int = 2, key_radius: int = 3, profiles=None,
               shift="1/2"):
    """h annihilates the de Rham image over the admissible alpha window."""
    if profiles is None:
        profiles = standard_profiles(n, Fraction(shift))
    sub = []
    ok = True
    for name, P in profiles.items():
        key_box = _profile_key_box(P, key_radius)
        for r in range(2, n):
            for i in range(1, n - 1):
                base = mi_sub(
                    tuple(2 * x for x in mi_unit(i, n)), mi_unit(i + 2, n)
                )
                for delta in itertools.product(range(delta_hi + 1), repeat=n):
                    alpha = tuple(b + d for b, d in zip(base, delta))
                    report = verify_h_annihilates(alpha, i, P, r, key_box)
                    ok = ok and report["pass"]
                    sub.append(
                        {
                            "profile": name,
                            "r": r,
                            "i": i,
                            "alpha": list(alpha),
                            "checked": report["checked"],
                            "pass": report["pass"],
                        }
                    )
    return {
        "check": "h-annihilates",
        "params": {"n": n, "deltaWindow": delta_hi, "keyRadius": key_radius},
        "cases": len(sub),
        "checked": sum(s["checked"] for s in sub),
        "failures": [s for s in sub if not s["pass"]][:10],
        "pass": ok,
    }


def _random_fvector(rng, P, M, nterms=3, radius=3):
    terms = {}
    for _ in range(nterms):
        key = []
        for f in P.factors:
            if f.kind == "poly":
                key.append(rng.randint(0, radius))
            elif f.kind == "twist":
                key.append(rng.randint(-radius, -1))
            else:
                key.append(rng.randint(-radius, radius))
        terms[(tuple(key), rng.randrange(M.dim))] = rng.randint(-4, 4)
    return FVector(P, M, terms)


def check_derham(n: int, count: int = 100, seed=None, shift="1/2"):
    """Composite maps vanish; kernels at degree zero match the factor
    profile; the maps intertwine the generator action."""
    rng = random.Random(get_seed(seed))
    failures = []
    checked = 0
    profiles = standard_profiles(n, Fraction(shift))
    for k in range(n - 1):
        M = make_wedge_module(n, k)
        for _ in range(count):
            P = profiles[rng.choice(sorted(profiles))]
            w = _random_fvector(rng, P, M)
            checked += 1
            if not pi(pi(w)).is_zero():
                failures.append({"kind": "composite", "k": k})
    kernel_expect = {"poly": 1, "laurent": 0, "one-twist": 0}
    for name, P in profiles.items():
        box = _profile_key_box(P, 3)
        total = pi_kernel(P, 0, box).total_dim()
        checked += 1
        if total != kernel_expect[name]:
            failures.append({"kind": "kernel", "profile": name, "dim": total})
    gens = GeneratorSet.default(n)
    for k in range(n - 1):
        M = make_wedge_module(n, k)
        for name, P in profiles.items():
            for _ in range(3):
                w = _random_fvector(rng, P, M, nterms=2, radius=2)
                for g in gens.members:
                    checked += 1
                    if pi(sn_act(g.field, w)) != sn_act(g.field, pi(w)):
                        failures.append(
                            {"kind": "equivariance", "k": k, "gen": g.name}
                        )
    return {
        "check": "derham",
        "params": {"n": n, "count": count, "seed": get_seed(seed)},
        "checked": checked,
        "failures": failures[:10],
        "pass": not failures,
    }


def check_unique_submodule(n: int, side: int = 5, margin: int = 2, max_deg: int = 3):
    """The polynomial module: constants close to a line, anything else fills
    the inner box."""
    from .structure import ClosureEngine, closure

    A = WeightModuleP.polynomial(n)
    triv = make_wedge_module(n, 0)
    box = TruncationBox((0,) * n, (side,) * n, margin=margin)
    gens = GeneratorSet.default(n)
    engine = ClosureEngine(A, triv, gens, box)
    failures = []
    const = closure([FVector.basis(A, triv, (0,) * n, 0)], gens, box, engine=engine)
    if const.classification != "trivial-line" or const.total_dim() != 1:
        failures.append({"seed": [0] * n, "classification": const.classification})
    checked = 1
    target = {w: 1 for w in box.inner_keys()}
    for key in itertools.product(range(max_deg + 1), repeat=n):
        if sum(key) > max_deg or key == (0,) * n:
            continue
        report = closure(
            [FVector.basis(A, triv, key, 0)],
            gens,
            box,
            engine=engine,
            target_dims=target,
            stop_at_target=True,
        )
        checked += 1
        if not report.reached_target:
            failures.append(
                {"seed": list(key), "firstUnreached": list(report.first_unreached())}
            )
    return {
        "check": "unique-submodule",
        "params": {"n": n, "box": side, "margin": margin, "maxDeg": max_deg},
        "checked": checked,
        "failures": failures[:10],
        "pass": not failures,
    }


def check_delta_p(n: int, radius: int = 6, margin: int = 2, shift="1/2"):
    """Graded dimensions of the derivative span per profile, plus simplicity
    evidence for the twisted profile and the containment S_n p in deltaP."""
    failures = []
    profiles = standard_profiles(n, Fraction(shift))
    boxes = {
        "poly": TruncationBox((0,) * n, (radius,) * n, margin=margin),
        "laurent": TruncationBox((-radius // 2,) * n, (radius // 2,) * n, margin=margin),
        "one-twist": None,
    }
    checked = 0
    for name, P in profiles.items():
        if name == "one-twist":
            continue
        box = boxes[name]
        delta = partial_span(P, box)
        for w in box.keys():
            expected = 1 if P.supports_key(w) else 0
            checked += 1
            if delta.dim_at(w) != expected:
                failures.append({"kind": "dims", "profile": name, "weight": list(w)})
    AF = WeightModuleP.twisted(n)
    tbox = TruncationBox((-radius,) * n, (-1,) * n, margin=margin)
    delta = partial_span(AF, tbox)
    corner = (-1,) * n
    for w in tbox.keys():
        expected = 0 if w == corner else 1
        checked += 1
        if delta.dim_at(w) != expected:
            failures.append({"kind": "dims", "profile": "twist", "weight": list(w)})
    evidence = evidence_simplicity(AF, None, "deltaP", tbox)
    checked += len(evidence["seeds"])
    if not evidence["pass"]:
        failures.append({"kind": "simplicity", "profile": "twist"})
    # containment of the generator action inside the span
    triv = make_wedge_module(n, 0)
    A = WeightModuleP.polynomial(n)
    box = TruncationBox((0,) * n, (radius,) * n)
    span = partial_span(A, box)
    gens = GeneratorSet.default(n)
    for g in gens.members:
        for key in itertools.product(range(2), repeat=n):
            out = sn_act(g.field, FVector.basis(A, triv, key, 0))
            checked += 1
            if not out.is_zero() and not span.contains(out):
                failures.append({"kind": "containment", "gen": g.name, "key": list(key)})
    return {
        "check": "delta-p",
        "params": {"n": n, "radius": radius, "margin": margin},
        "checked": checked,
        "failures": failures[:10],
        "pass": not failures,
    }


def check_bounded_multiplicity(n: int, radius: int = 2, shift="1/2"):
    """Weight multiplicities of F(P, wedge^r) stay below the binomial bound."""
    import math

    failures = []
    checked = 0
    for r in range(n + 1):
        M = make_wedge_module(n, r)
        bound = math.comb(n, r)
        for name, P in standard_profiles(n, Fraction(shift)).items():
            for mu in itertools.product(range(-radius, radius + 1), repeat=n):
                count = sum(
                    1
                    for midx in range(M.dim)
                    if P.supports_key(
                        tuple(m - wt for m, wt in zip(mu, M.weights[midx]))
                    )
                )
                checked += 1
                if count > bound:
                    failures.append({"profile": name, "r": r, "mu": list(mu)})
    return {
        "check": "bounded-multiplicity",
        "params": {"n": n, "radius": radius},
        "checked": checked,
        "failures": failures[:10],
        "pass": not failures,
    }


SUITES = {
    "iota-hom": check_iota_hom,
    "eq-cubic": check_eq_cubic,
    "eq-quartic": check_eq_quartic,
    "g-u": check_g_u,
    "h-ln": check_h_ln,
    "derham": check_derham,
    "unique-submodule": check_unique_submodule,
    "delta-p": check_delta_p,
    "bounded": check_bounded_multiplicity,
}
