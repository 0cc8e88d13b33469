"""Normal-ordered multiplication, the polynomial action oracle, Fourier."""

import random
from fractions import Fraction

import pytest

from weylmod.errors import DomainError, StructureError
from weylmod.weyl import WeylElement, d, fourier, t


def random_element(rng, n, deg=3, laurent=False, nterms=3):
    lo = -deg if laurent else 0
    terms = {}
    for _ in range(nterms):
        t_exp = tuple(rng.randint(lo, deg) for _ in range(n))
        d_exp = tuple(rng.randint(0, deg) for _ in range(n))
        terms[(t_exp, d_exp)] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return WeylElement(n, terms, laurent)


def random_poly(rng, n, deg=3, nterms=3):
    terms = {}
    z = (0,) * n
    for _ in range(nterms):
        exp = tuple(rng.randint(0, deg) for _ in range(n))
        terms[(exp, z)] = rng.randint(-5, 5)
    return WeylElement(n, terms)


def test_defining_relation():
    assert d(1, 2) * t(1, 2) == t(1, 2) * d(1, 2) + WeylElement.one(2)
    assert d(1, 2) * t(2, 2) == t(2, 2) * d(1, 2)


def test_mul_euler_square():
    # (t1 d1)^2 applied to t1^k gives k^2, so the product is t1^2 d1^2 + t1 d1
    e = t(1, 1) * d(1, 1)
    prod = e * e
    expected = WeylElement(1, {((2,), (2,)): 1, ((1,), (1,)): 1})
    assert prod == expected
    for k in range(7):
        p = WeylElement.t_power((k,))
        assert prod.apply_poly(p) == k * k * p
        assert e.apply_poly(e.apply_poly(p)) == k * k * p


def test_mul_d2_t2():
    # d1^2 t1^2 applied to t1^k gives (k+1)(k+2)
    prod = d(1, 1) ** 2 * t(1, 1) ** 2
    expected = WeylElement(
        1, {((2,), (2,)): 1, ((1,), (1,)): 4, ((0,), (0,)): 2}
    )
    assert prod == expected
    for k in range(7):
        p = WeylElement.t_power((k,))
        assert prod.apply_poly(p) == (k + 1) * (k + 2) * p


def test_mul_rank_mismatch():
    with pytest.raises(StructureError):
        t(1, 2) * t(1, 3)


def test_laurent_mode_contagion():
    a = WeylElement.t_power((-1, 0))
    assert a.laurent
    b = t(1, 2)
    assert (a * b).laurent
    assert (a * b).demote() == WeylElement.one(2)
    assert not (a * b).demote().laurent


def test_apply_poly_examples():
    op = t(1, 2) ** 2 * d(1, 2) - 2 * t(1, 2) * t(2, 2) * d(2, 2)
    assert d(1, 2).apply_poly(t(1, 2) ** 2) == 2 * t(1, 2)
    assert op.apply_poly(t(2, 2)) == -2 * t(1, 2) * t(2, 2)
    rng = random.Random(7)
    for _ in range(10):
        a = random_element(rng, 2)
        assert a.apply_poly(WeylElement.zero(2)).is_zero()


def test_apply_poly_rejects_laurent():
    a = WeylElement.t_power((-1,))
    with pytest.raises(DomainError):
        a.apply_poly(WeylElement.one(1))


def test_mul_associative_random():
    rng = random.Random(23)
    for n in (1, 2, 3):
        for _ in range(8):
            a = random_element(rng, n, deg=2, nterms=2)
            b = random_element(rng, n, deg=2, nterms=2)
            c = random_element(rng, n, deg=2, nterms=2)
            assert (a * b) * c == a * (b * c)


def test_mul_associative_laurent():
    rng = random.Random(29)
    for _ in range(8):
        a = random_element(rng, 2, deg=2, laurent=True, nterms=2)
        b = random_element(rng, 2, deg=2, laurent=True, nterms=2)
        c = random_element(rng, 2, deg=2, laurent=True, nterms=2)
        assert (a * b) * c == a * (b * c)


def test_action_is_module_homomorphism():
    rng = random.Random(31)
    for _ in range(15):
        a = random_element(rng, 2, deg=2, nterms=2)
        b = random_element(rng, 2, deg=2, nterms=2)
        p = random_poly(rng, 2, deg=3, nterms=3)
        assert (a * b).apply_poly(p) == a.apply_poly(b.apply_poly(p))


def test_normal_order_canonical():
    rng = random.Random(37)
    one = WeylElement.one(2)
    for _ in range(10):
        a = random_element(rng, 2)
        again = a * one
        assert list(again.terms.items()) == list(a.terms.items())


def test_fourier_generators():
    assert fourier(t(1, 2)) == d(1, 2)
    assert fourier(d(1, 2)) == -t(1, 2)


def test_fourier_euler():
    e = t(1, 1) * d(1, 1)
    assert fourier(e) == -e - WeylElement.one(1)


def test_fourier_is_automorphism():
    rng = random.Random(41)
    for _ in range(10):
        a = random_element(rng, 2, deg=2, nterms=2)
        b = random_element(rng, 2, deg=2, nterms=2)
        assert fourier(a * b) == fourier(a) * fourier(b)


def test_fourier_order_four():
    for n in (1, 2):
        for gen in [t(i, n) for i in range(1, n + 1)] + [d(i, n) for i in range(1, n + 1)]:
            twice = fourier(fourier(gen))
            assert twice == -gen
            assert fourier(fourier(twice)) == gen


def test_json_round_trip():
    rng = random.Random(43)
    for laurent in (False, True):
        a = random_element(rng, 3, deg=2, laurent=laurent)
        assert WeylElement.from_json_obj(a.to_json_obj()) == a
