import os
import pathlib
from fractions import Fraction

import mpmath
import pytest

import qradial

SPECS = pathlib.Path(os.environ.get("QRADIAL_SPEC_DIR", pathlib.Path(__file__).parents[2] / "specs"))
mpmath.mp.prec = 256

ALTERNATING_N2 = (SPECS / "alternating_n2.json").read_text()


def test_closed_form_limit_is_one_half():
    re, im = qradial.closed_form_limit(ALTERNATING_N2)
    assert mpmath.mpf(re) == mpmath.mpf("0.5")
    assert mpmath.mpf(im) == 0


def test_sixth_root_diverges():
    doc = (SPECS / "alternating_n2_sixth_root.json").read_text()
    assert qradial.classification(doc) == "Diverges"
    with pytest.raises(ValueError):
        qradial.closed_form_limit(doc)


def test_evaluate_matches_mpmath():
    # sum (-1)^n q^{n^2} at q = e^{-1/10}, summed directly in mpmath
    q = mpmath.exp(mpmath.mpf("-0.1"))
    expected = mpmath.nsum(lambda n: (-1) ** int(n) * q ** (n * n), [0, mpmath.inf])
    (re, im), tail, terms = qradial.evaluate_at(ALTERNATING_N2, "0.1", "1e-60")
    assert abs(mpmath.mpf(re) - expected) < mpmath.mpf("1e-55")
    assert terms > 0


def test_q_integral_power():
    assert abs(mpmath.mpf(qradial.q_integral_power("1", "0.9")) - mpmath.mpf(10) / 19) < mpmath.mpf("1e-70")


def test_lemma_limit_and_bernoulli():
    assert Fraction(qradial.lemma_limit("t", "2t")) == Fraction(1, 3)
    b = [Fraction(x) for x in qradial.bernoulli(12)]
    assert b[1] == Fraction(-1, 2)
    assert b[12] == Fraction(-691, 2730)


def test_document_round_trip_and_errors():
    text = qradial.normalize_document(ALTERNATING_N2)
    assert qradial.normalize_document(text) == text
    with pytest.raises(qradial.InvalidArgument):
        qradial.normalize_document('{"coefficients": {"period": 0, "values": []}}')


def test_cli_report():
    code, rep = qradial.report("asympt", SPECS / "geometric.json", "--order", "3")
    assert code == 0
    assert rep["schema"] == "1"
    assert [t["exact"] for t in rep["results"]["terms"]] == ["1/2", "1/4", "0", "-1/48"]
    code, rep = qradial.report("lacunary", SPECS / "lacunary_nonzero_mean.json")
    assert code == 2
    assert rep["error"]["kind"] == "invalid_spec"
