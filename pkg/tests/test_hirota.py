"""Gauge-image fields: map consistency, residuals, Lax pair, bilinear forms."""
import numpy as np
import pytest

from nlsoliton import presets
from nlsoliton.hirota import (bilinear_constraint_defect,
                              hirota_fields, hirota_fields_dx,
                              hirota_from_spectral,
                              hirota_one_soliton_nonlocal,
                              hirota_reference_local,
                              hirota_reference_local_dx,
                              hirota_reference_nonlocal,
                              hirota_reference_nonlocal_dx, hirota_residual,
                              nonlocality_constant, nonlocality_defect_hirota,
                              reduction_identity_defects,
                              zero_curvature_residual)
from nlsoliton.verification import GridSpec

GRID = GridSpec(-5.0, 5.0, 41, -2.0, 2.0, 41)
SMALL = GridSpec(-4.0, 4.0, 17, -1.5, 1.5, 11)


def _spectral_samplers(cfg):
    qf = lambda x, t: hirota_fields(cfg, x, t)[0]
    rf = lambda x, t: hirota_fields(cfg, x, t)[1]
    dxp = lambda x, t: hirota_fields_dx(cfg, x, t)[:2]
    return qf, rf, dxp


def test_map_matches_printed_one_soliton():
    cfg = presets.NONLOCAL_ONE
    rng = np.random.default_rng(7)
    for _ in range(50):
        x, t = rng.uniform(-3, 3), rng.uniform(-1.5, 1.5)
        p = hirota_from_spectral(cfg, x, t)
        if p.singular:
            continue
        q, r = hirota_one_soliton_nonlocal(cfg, x, t)
        assert abs(p.q - q) < 1e-9
        assert abs(p.r - r) < 1e-9


@pytest.mark.parametrize("name", ["nonlocal-one", "nonlocal-two", "nonlocal-three"])
def test_nonlocality_on_grid(name):
    assert nonlocality_defect_hirota(presets.SOLITON_CONFIGS[name], GRID) < 1e-10


def test_nonlocality_constant_value():
    cfg = presets.NONLOCAL_ONE
    assert nonlocality_constant(cfg) == pytest.approx(
        cfg.kappa / (cfg.c * cfg.mu[-1]) ** 2)


def test_analytic_derivatives_match_fd():
    cfg = presets.NONLOCAL_TWO
    xs = np.linspace(-2, 2, 9)
    ts = np.full_like(xs, 0.3)
    h = 1e-5
    qp, rp, _ = hirota_fields(cfg, xs + h, ts)
    qm, rm, _ = hirota_fields(cfg, xs - h, ts)
    qx, rx, _ = hirota_fields_dx(cfg, xs, ts)
    np.testing.assert_allclose(qx, (qp - qm) / (2 * h), rtol=1e-6)
    np.testing.assert_allclose(rx, (rp - rm) / (2 * h), rtol=1e-6)


@pytest.mark.parametrize("name", ["nonlocal-one", "nonlocal-two"])
def test_spectral_residuals(name):
    cfg = presets.SOLITON_CONFIGS[name]
    qf, rf, dxp = _spectral_samplers(cfg)
    rq, rr = hirota_residual(qf, rf, cfg.alpha, 1j * cfg.delta, SMALL,
                             dx_pair=dxp)
    assert rq.max_relative < 1e-5
    assert rr.max_relative < 1e-5


def test_printed_nonlocal_pair_residual():
    cfg = presets.NONLOCAL_ONE
    qf = lambda x, t: hirota_one_soliton_nonlocal(cfg, x, t)[0]
    rf = lambda x, t: hirota_one_soliton_nonlocal(cfg, x, t)[1]
    rq, rr = hirota_residual(qf, rf, cfg.alpha, 1j * cfg.delta, SMALL)
    assert rq.max_relative < 1e-5
    assert rr.max_relative < 1e-5


@pytest.mark.parametrize("name", ["local-periodic", "local-third-order"])
def test_reference_local_residual(name):
    ref = presets.REFERENCE_SOLITONS[name]
    qf = lambda x, t: hirota_reference_local(ref.mu, ref.gamma, ref.alpha,
                                             ref.beta, x, t)
    rf = lambda x, t: -np.conj(qf(x, t))
    rq, rr = hirota_residual(qf, rf, ref.alpha, ref.beta, SMALL)
    assert rq.max_relative < 1e-5
    assert rr.max_relative < 1e-5


def test_reference_nonlocal_residual():
    ref = presets.REFERENCE_SOLITONS["nonlocal-reference"]
    qf = lambda x, t: hirota_reference_nonlocal(ref.mu, ref.gamma, ref.alpha,
                                                ref.delta, x, t)
    rf = lambda x, t: -np.conj(qf(-np.asarray(x), t))
    rq, rr = hirota_residual(qf, rf, ref.alpha, 1j * ref.delta, SMALL)
    assert rq.max_relative < 1e-6
    assert rr.max_relative < 1e-6


def test_reference_derivative_forms():
    ref = presets.REFERENCE_SOLITONS["local-third-order"]
    h = 1e-6
    xs = np.linspace(-2, 2, 9)
    fd = (hirota_reference_local(ref.mu, ref.gamma, ref.alpha, ref.beta, xs + h, 0.4)
          - hirota_reference_local(ref.mu, ref.gamma, ref.alpha, ref.beta, xs - h, 0.4)) / (2 * h)
    qx = hirota_reference_local_dx(ref.mu, ref.gamma, ref.alpha, ref.beta, xs, 0.4)
    np.testing.assert_allclose(qx, fd, rtol=1e-8)

    refn = presets.REFERENCE_SOLITONS["nonlocal-reference"]
    fd = (hirota_reference_nonlocal(refn.mu, refn.gamma, refn.alpha, refn.delta, xs + h, 0.4)
          - hirota_reference_nonlocal(refn.mu, refn.gamma, refn.alpha, refn.delta, xs - h, 0.4)) / (2 * h)
    qx = hirota_reference_nonlocal_dx(refn.mu, refn.gamma, refn.alpha, refn.delta, xs, 0.4)
    np.testing.assert_allclose(qx, fd, rtol=1e-8)


def test_reference_parameter_guards():
    with pytest.raises(ValueError):
        hirota_reference_local(0.5j, 0.0, 1.0, 0.1, 0.0, 0.0)
    with pytest.raises(ValueError):
        hirota_reference_nonlocal(0.5, 0.0, 1.0, 0.1, 0.0, 0.0)


LAMBDAS = (0.7 + 0j, 1.0 + 0.5j, -0.3j)


def test_zero_curvature_local():
    ref = presets.REFERENCE_SOLITONS["local-periodic"]
    qf = lambda x, t: hirota_reference_local(ref.mu, ref.gamma, ref.alpha,
                                             ref.beta, x, t)
    rf = lambda x, t: -np.conj(qf(x, t))
    vals = [zero_curvature_residual(qf, rf, ref.alpha, ref.beta, lam,
                                    SMALL).max_relative for lam in LAMBDAS]
    assert max(vals) < 1e-5
    assert max(vals) - min(vals) < 1e-6


def test_zero_curvature_nonlocal():
    cfg = presets.NONLOCAL_ONE
    qf = lambda x, t: hirota_one_soliton_nonlocal(cfg, x, t)[0]
    rf = lambda x, t: hirota_one_soliton_nonlocal(cfg, x, t)[1]
    vals = [zero_curvature_residual(qf, rf, cfg.alpha, 1j * cfg.delta, lam,
                                    SMALL).max_relative for lam in LAMBDAS]
    assert max(vals) < 1e-5
    assert max(vals) - min(vals) < 1e-6


def test_bilinear_local_with_paired_sign():
    ref = presets.REFERENCE_SOLITONS["local-periodic"]
    qf = lambda x, t: hirota_reference_local(ref.mu, ref.gamma, ref.alpha,
                                             ref.beta, x, t)
    assert bilinear_constraint_defect(qf, SMALL, "local", -1.0) < 1e-6


def test_bilinear_nonlocal_reference():
    ref = presets.REFERENCE_SOLITONS["nonlocal-reference"]
    qf = lambda x, t: hirota_reference_nonlocal(ref.mu, ref.gamma, ref.alpha,
                                                ref.delta, x, t)
    assert bilinear_constraint_defect(qf, SMALL, "nonlocal", 1.0) < 1e-6


def test_bilinear_restrictive_for_generic_two_soliton():
    cfg = presets.NONLOCAL_TWO
    qf = lambda x, t: hirota_fields(cfg, x, t)[0]
    assert bilinear_constraint_defect(qf, SMALL, "nonlocal", cfg.kappa) > 1e-2


def test_reduction_identities():
    d1, d2 = reduction_identity_defects(presets.NONLOCAL_ONE, 0.6, 0.2)
    assert d1 < 1e-7
    assert d2 < 1e-7
