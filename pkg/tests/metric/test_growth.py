import math
from fractions import Fraction

import pytest

from laurentcf.errors import ParseError
from laurentcf.metric import GrowthFunction, growth_invariants


@pytest.mark.parametrize(
    "text,B,b,a",
    [
        ("linear:3", Fraction(3), 1, 1),
        ("linear:1/2", Fraction(1, 2), 1, 1),
        ("power:2", math.inf, 1, 1),
        ("power:1:5", Fraction(5), 1, 1),
        ("power:1/2", Fraction(0), 1, 1),
        ("exp:2", math.inf, 2, 2),
        ("log", Fraction(0), 1, 1),
        ("log:2", Fraction(0), 1, 1),
        ("superexp:2:2", math.inf, math.inf, math.inf),
        ("superexp:2:3/2", math.inf, math.inf, math.inf),
        ("superexp:2:1", math.inf, Fraction(2), Fraction(2)),
        ("superexp:3:1", math.inf, Fraction(3), Fraction(3)),
        ("superexp:2:1/2", math.inf, 1, 1),
        ("superexp:2:0", Fraction(0), 1, 1),
    ],
)
def test_preset_invariants(text, B, b, a):
    inv = GrowthFunction.parse(text).invariants()
    assert (inv.B, inv.b, inv.a) == (B, b, a)
    assert not inv.estimate


def test_bounded_families():
    assert growth_invariants(GrowthFunction.parse("const:5")).bounded
    assert GrowthFunction.parse("linear:0").invariants().bounded
    assert not GrowthFunction.parse("log").invariants().bounded
    assert GrowthFunction.parse("superexp:2:0").invariants().bounded
    assert GrowthFunction.parse("superexp:2:-1").invariants().bounded
    assert not GrowthFunction.parse("superexp:2:1/2").invariants().bounded


@pytest.mark.parametrize(
    "text",
    ["quadratic:2", "linear", "linear:1:2", "exp:1", "exp:x", "superexp:2", "table:"],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        GrowthFunction.parse(text)


def test_str_roundtrip():
    for text in ("linear:3", "exp:2", "superexp:2:2", "power:2:1"):
        assert str(GrowthFunction.parse(text)) == text


def test_evaluation():
    assert GrowthFunction.parse("linear:3")(4) == 12.0
    assert GrowthFunction.parse("exp:2")(10) == 1024.0
    assert GrowthFunction.parse("power:2:3")(2) == 12.0
    assert GrowthFunction.parse("log")(0) == pytest.approx(math.log(2))
    assert GrowthFunction.parse("superexp:10:3")(1000) == math.inf
    assert GrowthFunction.parse("superexp:2:1")(5) == 32.0
    assert GrowthFunction.parse("superexp:4:1/2")(4) == 16.0
    assert GrowthFunction.parse("superexp:2:-1")(0) == math.inf
    assert GrowthFunction.parse("superexp:2:-1")(2) == pytest.approx(math.sqrt(2))


def test_clamped():
    phi = GrowthFunction.parse("linear:1").clamped(5)
    assert phi(1) == 5.0
    assert phi(9) == 9.0


class TestTable:
    def test_exponential_values(self):
        phi = GrowthFunction.from_values({n: 2.0**n for n in range(1, 21)})
        inv = phi.invariants()
        assert inv.estimate
        assert inv.B == math.inf
        assert inv.b == pytest.approx(2.0)

    def test_linear_values(self):
        phi = GrowthFunction.from_values({n: 3.0 * n for n in range(1, 21)})
        inv = phi.invariants()
        assert inv.B == pytest.approx(3.0)
        assert not inv.inconclusive

    def test_short_table_is_inconclusive(self):
        inv = GrowthFunction.from_values({n: float(n) for n in range(1, 5)}).invariants()
        assert inv.inconclusive

    def test_must_be_total(self):
        with pytest.raises(ValueError):
            GrowthFunction.from_values({1: 1.0, 3: 3.0})

    def test_undefined_argument(self):
        phi = GrowthFunction.from_values({n: float(n) for n in range(1, 10)})
        with pytest.raises(ValueError, match="undefined at n=20"):
            phi(20)

    def test_from_csv(self, tmp_path):
        path = tmp_path / "phi.csv"
        path.write_text("n,phi\n" + "".join(f"{n},{2 * n}\n" for n in range(1, 13)))
        phi = GrowthFunction.parse(f"table:{path}")
        assert phi(6) == 12.0
        assert str(phi) == "table[1..12]"

    def test_from_csv_missing_column(self, tmp_path):
        path = tmp_path / "phi.csv"
        path.write_text("n,value\n1,2\n")
        with pytest.raises(ParseError):
            GrowthFunction.from_csv(path)
