import itertools

import pytest

from movoids.fields import FieldSpec, galois_field, gf2h_make, is_irreducible_gf2, prime_field, prime_power

from oracles import is_irreducible_bruteforce

FIELDS = [prime_field(p) for p in (2, 3, 5, 7)] + [gf2h_make(h) for h in (1, 2, 3, 4)]


def test_moduli():
    assert gf2h_make(1).modulus == 0b11
    assert gf2h_make(1).order == 2
    assert gf2h_make(2).modulus == 0b111
    assert gf2h_make(4).modulus == 0b10011


def test_h4_modulus_is_smallest_irreducible_quartic():
    quartics = [f for f in range(16, 32) if is_irreducible_bruteforce(f)]
    assert quartics == [0b10011, 0b11001, 0b11111]
    assert gf2h_make(4).modulus == min(quartics)


@pytest.mark.parametrize("h", range(1, 9))
def test_irreducibility_test_agrees_with_bruteforce(h):
    for f in range(1 << h, 1 << (h + 1)):
        if h <= 6 or f % 7 == 0:
            assert is_irreducible_gf2(f) == is_irreducible_bruteforce(f), bin(f)


def test_gf2h_range():
    with pytest.raises(ValueError):
        gf2h_make(0)
    with pytest.raises(ValueError):
        gf2h_make(17)
    assert gf2h_make(16).order == 65536


def test_invalid_specs():
    with pytest.raises(ValueError):
        FieldSpec(4)
    with pytest.raises(ValueError):
        FieldSpec(2, 2, 0b101)  # x^2 + 1 = (x + 1)^2
    with pytest.raises(ValueError):
        FieldSpec(3, 2, 0b111)
    with pytest.raises(ValueError):
        prime_power(12)
    with pytest.raises(ValueError):
        galois_field(9)


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: f"GF{F.order}")
def test_field_axioms_exhaustive(F):
    els = F.elements()
    zero, one = F.zero, F.one
    for a in els:
        assert a + zero == a and a * one == a
        assert a + (-a) == zero
        if a:
            assert a * a.inverse() == one
    for a, b, c in itertools.product(els, repeat=3):
        assert (a * b) * c == a * (b * c)
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
    for a, b in itertools.product(els, repeat=2):
        assert a * b == b * a and a + b == b + a


@pytest.mark.parametrize("h", range(1, 5))
def test_frobenius(h):
    F = gf2h_make(h)
    for a, b in itertools.product(F.elements(), repeat=2):
        assert (a + b) ** 2 == a**2 + b**2


def test_cube_map():
    F4 = gf2h_make(2)
    assert all(a**3 == F4.one for a in F4.elements() if a)
    F8 = gf2h_make(3)
    cubes = {(a**3).value for a in F8.elements() if a}
    assert cubes == set(range(1, 8))


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        gf2h_make(2)(1) + gf2h_make(3)(1)


def test_int_coercion_and_division():
    F = prime_field(7)
    a = F(3)
    assert a + 5 == F(1)
    assert a / 3 == F.one
    assert 2 - a == F(6)
    assert a ** -1 == F(5)
    with pytest.raises(ZeroDivisionError):
        F.zero.inverse()
