import itertools

import pytest

from laurentcf.algebra import NEG_INF, FieldSpec, Poly, divrem, enumerate_polys, gcd
from laurentcf.errors import FieldMismatchError, ParseError, ZeroDivisionPolyError
from laurentcf.testing import random_poly, rng

F2 = FieldSpec(2)
F3 = FieldSpec(3)


class TestFieldSpec:
    @pytest.mark.parametrize("q", [2, 3, 5, 7, 11])
    def test_prime_fields(self, q):
        field = FieldSpec(q)
        for a in range(1, q):
            assert field.mul(a, field.inv(a)) == 1

    @pytest.mark.parametrize("q", [0, 1, 4, 6, 9, -3, 561, 7907 * 7919, 2**31 + 1, 3.0])
    def test_rejects_non_prime(self, q):
        with pytest.raises(ValueError, match="must be prime"):
            FieldSpec(q)

    @pytest.mark.parametrize("q", [7919, 1_000_003, 2**31 - 1])
    def test_large_primes(self, q):
        field = FieldSpec(q)
        assert field.mul(2, field.inv(2)) == 1

    def test_zero_has_no_inverse(self):
        with pytest.raises(ZeroDivisionError):
            F3.inv(0)


class TestParse:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("z^2+1", "z^2+1"),
            ("1 + z^2", "z^2+1"),
            ("2*z^3 + z + 1", "2*z^3+z+1"),
            ("2z^3+z+1", "2*z^3+z+1"),
            ("z - 1", "z+2"),
            ("z + z", "2*z"),
            ("0", "0"),
        ],
    )
    def test_roundtrip_text(self, text, expected):
        assert str(Poly.parse(F3, text)) == expected

    @pytest.mark.parametrize("text", ["", "z^", "3z", "z**2", "x+1", "+"])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            Poly.parse(F3, text)

    def test_parse_error_is_value_error(self):
        with pytest.raises(ValueError):
            Poly.parse(F2, "2")


class TestArithmetic:
    def test_degree_of_zero(self):
        zero = Poly.zero(F2)
        assert zero.degree is NEG_INF
        assert zero.degree < 0
        assert zero.degree + 5 is NEG_INF
        assert str(zero) == "0"

    def test_characteristic_two(self):
        a = Poly.parse(F2, "z+1")
        assert str(a * a) == "z^2+1"
        assert (a + a).is_zero()

    def test_int_coercion(self):
        a = Poly.parse(F3, "z")
        assert str(a + 1) == "z+1"
        assert str(2 * a) == "2*z"

    def test_field_mismatch(self):
        with pytest.raises(FieldMismatchError):
            Poly.parse(F2, "z") + Poly.parse(F3, "z")
        with pytest.raises(TypeError):
            Poly.parse(F2, "z") * Poly.parse(F3, "z")

    def test_divide_by_zero(self):
        with pytest.raises(ZeroDivisionPolyError):
            divrem(Poly.parse(F2, "z"), Poly.zero(F2))
        with pytest.raises(ZeroDivisionError):
            Poly.parse(F2, "z") // Poly.zero(F2)

    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_division_identity(self, q):
        """a = b * quot + rem with deg rem < deg b, for random operands."""
        field = FieldSpec(q)
        gen = rng(q)
        for _ in range(50):
            a = random_poly(field, int(gen.integers(1, 9)), gen)
            b = random_poly(field, int(gen.integers(1, 5)), gen)
            quot, rem = divrem(a, b)
            assert b * quot + rem == a
            assert rem.degree < b.degree

    def test_pow(self):
        a = Poly.parse(F3, "z+1")
        assert a**3 == Poly.parse(F3, "z^3+1")
        assert a**0 == Poly.one(F3)


class TestGcd:
    def test_monic(self):
        a = Poly.parse(F3, "2*z^2+1")
        b = Poly.parse(F3, "z+1")
        g = gcd(a, b)
        assert g.is_monic()
        assert str(g) == "z+1"

    def test_coprime(self):
        assert gcd(Poly.parse(F2, "z"), Poly.parse(F2, "z^2+1")) == Poly.one(F2)

    def test_zero_operands(self):
        assert gcd(Poly.zero(F2), Poly.zero(F2)).is_zero()
        assert gcd(Poly.zero(F3), Poly.parse(F3, "2*z")) == Poly.parse(F3, "z")


class TestEnumerate:
    @pytest.mark.parametrize("q,d", [(2, 1), (2, 3), (3, 1), (3, 2), (5, 1)])
    def test_count_and_distinct(self, q, d):
        field = FieldSpec(q)
        polys = list(enumerate_polys(field, d))
        assert len(polys) == (q - 1) * q**d
        assert len(set(polys)) == len(polys)
        assert all(p.degree == d for p in polys)

    @pytest.mark.parametrize("d", [0, -1])
    def test_rejects_degree_below_one(self, d):
        with pytest.raises(ValueError):
            list(enumerate_polys(F2, d))
