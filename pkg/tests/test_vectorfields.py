"""Vector-field bracket, divergence, and the divergence-free generators."""

import itertools
import random

import pytest

from weylmod.errors import ArgumentError, DomainError, StructureError
from weylmod.indices import mi_unit
from weylmod.linalg import RowBasis
from weylmod.vectorfields import (
    L_op,
    VectorField,
    bracket,
    commutator_in_weyl,
    divergence,
    has_constant_divergence,
    is_divergence_free,
    monomial_field,
)
from weylmod.weyl import WeylElement, d, t


def random_field(rng, n, deg=2, nterms=2):
    total = None
    for _ in range(nterms):
        exp = tuple(rng.randint(0, deg) for _ in range(n))
        f = monomial_field(exp, rng.randint(1, n), rng.randint(-3, 3))
        total = f if total is None else total + f
    return total


def test_degree_invariant_enforced():
    with pytest.raises(StructureError):
        VectorField(t(1, 2))
    with pytest.raises(StructureError):
        VectorField(d(1, 2) * d(2, 2))


def test_bracket_examples():
    n = 2
    x = VectorField(d(1, n))
    y = VectorField(t(1, n) * d(2, n))
    assert bracket(x, y).element == d(2, n)
    e = VectorField(t(1, n) * d(1, n))
    assert bracket(e, y).element == t(1, n) * d(2, n)
    assert bracket(y, y).is_zero()


def test_bracket_matches_weyl_commutator():
    rng = random.Random(3)
    for n in (2, 3):
        for _ in range(20):
            x = random_field(rng, n)
            y = random_field(rng, n)
            assert bracket(x, y).element == commutator_in_weyl(x, y)


def test_jacobi_identity():
    rng = random.Random(9)
    for n in (2, 3):
        for _ in range(12):
            x, y, z = (random_field(rng, n, deg=3) for _ in range(3))
            total = (
                bracket(bracket(x, y), z).element
                + bracket(bracket(y, z), x).element
                + bracket(bracket(z, x), y).element
            )
            assert total.is_zero()


def test_divergence_examples():
    n = 2
    assert divergence(VectorField(t(1, n) * d(1, n))) == WeylElement.one(n)
    field = VectorField(t(1, n) ** 2 * d(1, n) - 2 * t(1, n) * t(2, n) * d(2, n))
    assert divergence(field).is_zero()
    assert field == L_op(1, 2, (1, 0))
    assert divergence(VectorField(t(1, n) * d(2, n))).is_zero()


def test_membership_examples():
    assert is_divergence_free(L_op(1, 2, (1, 0)))
    assert not is_divergence_free(VectorField(t(1, 2) * d(1, 2)))
    assert is_divergence_free(VectorField(d(1, 2)))
    assert has_constant_divergence(VectorField(t(1, 2) * d(1, 2)))
    assert not has_constant_divergence(VectorField(t(1, 2) ** 2 * d(1, 2)))


def test_L_op_examples():
    n = 2
    assert L_op(1, 2, (0, 0)).element == t(1, n) * d(1, n) - t(2, n) * d(2, n)
    assert L_op(1, 2, (-1, -1)).is_zero()
    assert L_op(1, 2, (1, 0)).element == t(1, n) ** 2 * d(1, n) - 2 * t(1, n) * t(
        2, n
    ) * d(2, n)


def test_L_op_argument_checks():
    with pytest.raises(ArgumentError):
        L_op(1, 1, (0, 0))
    with pytest.raises(DomainError):
        L_op(1, 2, (-2, 0))
    assert L_op(1, 2, (-2, 0), laurent=True).element.laurent


def test_L_op_reduces_to_partial():
    # alpha = -e_i makes the generator a plain derivative
    assert L_op(1, 2, (-1, 0)).element == d(1, 2)
    assert L_op(2, 1, (-1, 0)).element == -d(1, 2)


def test_L_op_divergence_free_window():
    for n in (2, 3):
        window = range(-1, 3)
        for i, j in itertools.permutations(range(1, n + 1), 2):
            for alpha in itertools.product(window, repeat=n):
                if not all(
                    alpha[s] >= (-1 if s in (i - 1, j - 1) else 0) for s in range(n)
                ):
                    continue
                assert is_divergence_free(L_op(i, j, alpha))


def test_generator_antisymmetry():
    for alpha in itertools.product(range(-1, 2), repeat=2):
        gen = L_op(1, 2, alpha, laurent=True)
        flip = L_op(2, 1, alpha, laurent=True)
        assert (gen + flip).is_zero()


def test_divergence_free_closed_under_bracket():
    window = [
        L_op(i, j, alpha)
        for i, j in itertools.combinations(range(1, 3), 2)
        for alpha in itertools.product(range(-1, 2), repeat=2)
        if all(alpha[s] >= -1 for s in range(2)) and not L_op(i, j, alpha, laurent=True).is_zero()
    ]
    for x in window:
        for y in window:
            z = bracket(x, y)
            if not z.is_zero():
                assert is_divergence_free(z)


def _field_coordinates(field, slots):
    vec = [0] * len(slots)
    for key, coeff in field.element.terms.items():
        vec[slots[key]] = coeff
    return vec


def test_generators_span_divergence_free_fields():
    # every divergence-zero field of coefficient degree <= D is a combination
    # of the L generators, checked by echelon containment
    for n, cap in ((2, 4), (3, 3)):
        monos = [
            (exp, tuple(mi_unit(i, n)))
            for exp in itertools.product(range(cap + 1), repeat=n)
            if sum(exp) <= cap
            for i in range(1, n + 1)
        ]
        slots = {key: pos for pos, key in enumerate(monos)}
        gens = RowBasis(len(monos))
        for i, j in itertools.permutations(range(1, n + 1), 2):
            for alpha in itertools.product(range(-1, cap + 1), repeat=n):
                if not all(
                    alpha[s] >= (-1 if s in (i - 1, j - 1) else 0) for s in range(n)
                ):
                    continue
                if sum(alpha) + 1 > cap:
                    continue
                gen = L_op(i, j, alpha)
                if gen.is_zero():
                    continue
                gens.insert(_field_coordinates(gen, slots))
        checked = 0
        for exp, d_exp in monos:
            i = d_exp.index(1) + 1
            field = monomial_field(exp, i)
            if not is_divergence_free(field):
                continue
            assert gens.contains(_field_coordinates(field, slots))
            checked += 1
        assert checked > 0
        # binomial divergence-free combinations are covered as well
        rng = random.Random(17)
        for _ in range(40):
            exp = tuple(rng.randint(0, cap - 1) for _ in range(n))
            i, j = rng.sample(range(1, n + 1), 2)
            f = monomial_field(tuple(exp), i, 1 + exp[j - 1])
            g = monomial_field(tuple(exp), j, 1 + exp[i - 1])
            comb = VectorField(
                (t(i, n) * f.element - t(j, n) * g.element)
            )
            if sum(exp) + 1 > cap or comb.is_zero():
                continue
            assert is_divergence_free(comb)
            assert gens.contains(_field_coordinates(comb, slots))
