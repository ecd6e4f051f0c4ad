import cmath
import json
import math

import pytest

import sparsepot as sp


def test_lambert_w_defining_equation():
    for n in (-2, 0, 3):
        w = sp.lambert_w(n, 2 + 1j)
        assert abs(w * cmath.exp(w) - (2 + 1j)) < 1e-12


def test_construct_bump_round_trip():
    rep = sp.construct_bump(1 + 0.05j)
    assert rep.residual < 1e-10
    pot = sp.PiecewisePotential.from_bump(rep.bump)
    assert abs(sp.global_secular(pot, 1 + 0.05j)) < 1e-8


def test_square_well_eigenvalues():
    pot = sp.PiecewisePotential([(-1.0, 1.0, -10.0)])
    eigs = sp.eigenvalues(pot, (-10.5, -0.002, -0.5, 0.5), workers=2)
    assert len(eigs) == 3
    assert all(m == 1 for _, m in eigs)
    assert all(abs(z.imag) < 1e-12 for z, _ in eigs)


def test_winding_count_with_python_callable():
    assert sp.winding_count(lambda z: z * z, (-1.0, 1.0, -1.0, 1.0)) == 2


def test_envelopes_and_census():
    assert sp.kappa_tilde() == pytest.approx(51.0)
    assert sp.sep([1.0, 2.0, 3.0], 1.0) == pytest.approx(sum(math.exp(-k) for k in (1, 2, 3)))
    count, ratio = sp.census(8)
    assert count == 6
    assert ratio == pytest.approx(6 * math.log(8) / 64)


def test_sparse_report_is_json():
    doc = json.loads(sp.build_sparse_report([1 + 0.08j, 1.3 + 0.06j], workers=2))
    assert doc["mode"] == "desk"
    assert all(e["found"] for e in doc["per_n"])


def test_errors_map_to_python_exceptions():
    with pytest.raises(sp.DomainError):
        sp.construct_bump(1 - 0.1j)
    with pytest.raises(sp.Error):
        sp.lambert_w(1, 0)
