import math

import numpy as np
import pytest

import conetorsion as ct


def test_anomaly_unit_t2():
    r = ct.res_term(ct.unit_torus(2))
    assert r.anomaly_integral == pytest.approx(-1 / (8 * math.pi), rel=1e-12)


def test_report_parts():
    rep = ct.log_torsion_cone(ct.unit_torus(2))
    assert rep["log_T"] == pytest.approx(rep["top"] + rep["tors"] + rep["res"], rel=1e-14)
    assert rep["tors"] == pytest.approx(0.31113072554288917, rel=1e-9)


def test_tors_duality_t4():
    t = ct.tors_term(ct.unit_torus(4))
    assert t.residual < 1e-8


def test_cross_route():
    cs = ct.unit_torus(2)
    cone = ct.log_torsion_cone(cs)["log_T"]
    for eps in (0.1, 0.25, 0.5):
        d = ct.torsion_difference(cs, eps).value
        assert d == pytest.approx(ct.log_torsion_truncated(cs, eps) - cone, abs=1e-8)


def test_basis_and_betti():
    cs = ct.flat_torus(np.array([[1.0, 0.4], [0.0, 1.3]]))
    assert cs.dim == 2
    assert cs.volume == pytest.approx(1.3)
    assert list(cs.betti) == [1, 2, 1]


def test_bessel_half_integer():
    i, _, k, _ = ct.modified_bessel(0.5, 2.0)
    assert i == pytest.approx(math.sqrt(2 / (math.pi * 2)) * math.sinh(2), rel=1e-13)
    assert k == pytest.approx(math.sqrt(math.pi / 4) * math.exp(-2), rel=1e-13)


def test_det_and_regularization():
    assert ct.harmonic_det(0.5, 0.25) == pytest.approx(1.5)
    assert ct.model_det_ratio("psi_truncated", 2.0, 0.5, 0.25, 1e-6) == pytest.approx(1.0, abs=1e-8)
    _, p = ct.t_eta_lambda(2.5, 0.5, 0.25, -1e-8, 2)
    assert abs(p) < 1e-6


def test_errors_map_to_python():
    with pytest.raises(ct.PoleError):
        ct.model_det_ratio("psi_truncated", 0.5, 0.5, 0.25, 1.0)
    with pytest.raises(ct.InvalidArgument):
        ct.log_torsion_truncated(ct.unit_torus(2), 1.5)
    with pytest.raises(ValueError):
        ct.model_det_ratio("nope", 2.0, 0.5, 0.25, 1.0)


def test_olver_strings():
    assert ct.olver_u(0) == "1"
