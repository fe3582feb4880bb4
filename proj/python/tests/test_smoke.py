from fractions import Fraction
import math

import pytest

import cuspbasis as cb


def test_embedded_forms():
    assert set(cb.embedded_names()) == {"delta", "11a"}
    info = cb.form_info("11a")
    assert (info["level"], info["weight"]) == (11, 2)
    assert cb.coefficients("delta", 5) == [1, -24, 252, -1472, 4830]
    assert cb.eigenvalue("delta", 4) == -2496


def test_exact_gram_and_basis():
    assert cb.gram_entry("delta", 1, 2) == Fraction(-1, 256)
    g = cb.gram("11a", 44)
    assert g["entries"][0][0] == 1
    assert len(g["entries"]) == 3
    elements = cb.basis(44, 2)
    assert len(elements) == 3
    rep = cb.orthogonality("delta", 48)
    assert rep["exact"] and rep["all_zero"] and rep["count"] == 10


def test_numeric_products():
    value, err = cb.petersson_norm("delta")
    assert value == pytest.approx(1.0353620568043209e-6, rel=1e-10)
    assert err < 1e-12
    assert value >= cb.petersson_lower_bound(1)
    ratio, _ = cb.petersson_gram_entry("delta", 2, 1, 2)
    assert ratio.real == pytest.approx(-1 / 256, rel=1e-9)


def test_bounds_and_halfint():
    assert round(cb.bound_constant(), 2) == 1898.27
    assert cb.hi_bound(1, 12, 1) == pytest.approx(2 * math.sqrt(math.pi) * math.exp(2 * math.pi))
    assert cb.hi_bound(7, 2, 11, coprime=True) < cb.hi_bound(7, 2, 11)
    assert cb.halfint_predict("V", 3, 1, 4) == Fraction(1, 9)
    assert cb.halfint_predict("U", 3, 1, Fraction(-2, 3)) == -6
    assert "double coset" in cb.normalization_note


def test_errors_map_to_python():
    with pytest.raises(cb.PreconditionError):
        cb.hi_bound(11, 2, 11, coprime=True)
    with pytest.raises(cb.Error):
        cb.form_info("nope")
    with pytest.raises(cb.PreconditionError):
        cb.basis(4, 2, mode="sideways")
