"""End-to-end acceptance gate.

Each test covers one acceptance criterion at its stated tolerance and
prints a single PASS/FAIL line so the gate can be read off the log.
"""
import numpy as np
import pytest

from nlsoliton import darboux, heisenberg, hirota, landau, presets
from nlsoliton.spectral import SolitonConfig
from nlsoliton.verification import GridSpec, masked_max

GRID_41 = GridSpec(-5.0, 5.0, 41, -2.0, 2.0, 41)
GRID_21 = GridSpec(-5.0, 5.0, 21, -2.0, 2.0, 21)
RESIDUAL_GRID = GridSpec(-4.0, 4.0, 17, -1.5, 1.5, 11)
ZC_LAMBDAS = (0.7 + 0j, 1.0 + 0.5j, -0.3j)


def _report(name: str, ok: bool, detail: str):
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"{name}: {detail}"


def _random_config(rng, n):
    lams = [complex(rng.uniform(0.2, 0.8) * rng.choice([-1, 1]),
                    rng.uniform(-0.6, 0.6)) for _ in range(n)]
    gams = [complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
            for _ in range(2 * n)]
    return SolitonConfig(n=n, lambdas=lams, gammas=gams,
                         kappa=float(rng.choice([1.0, 3.0, -2.0])),
                         alpha=1.2, delta=0.2)


def test_01_oracle_equivalence():
    rng = np.random.default_rng(101)
    worst_entry = worst_det = 0.0
    for n in (1, 2, 3):
        done = 0
        while done < 50:
            cfg = _random_config(rng, n)
            x, t = rng.uniform(-2, 2), rng.uniform(-1, 1)
            try:
                closed = darboux.lgen_closed(cfg, x, t)
                state = darboux.darboux_iterate(cfg, x, t)
            except (darboux.SingularPointError, ArithmeticError, OverflowError):
                continue
            done += 1
            scale = np.max(np.abs(closed))
            worst_entry = max(worst_entry,
                              float(np.max(np.abs(closed - state.accumulated)) / scale))
            det = closed[0, 0] * closed[1, 1] - closed[0, 1] * closed[1, 0]
            worst_det = max(worst_det, abs(det - cfg.chi) / abs(cfg.chi))
    ok = worst_entry < 1e-9 and worst_det < 1e-9
    _report("criterion-01 dressing-vs-determinants", ok,
            f"entry defect {worst_entry:.3e}, det defect {worst_det:.3e} "
            f"(50 trials each for orders 1..3, tol 1e-9)")


def test_02_closed_form_equivalence():
    rng = np.random.default_rng(102)
    worst1 = worst2 = 0.0
    n1 = n2 = 0
    while min(n1, n2) < 100:
        x, t = rng.uniform(-3, 3), rng.uniform(-1.5, 1.5)
        p1 = heisenberg.ech_solution(presets.NONLOCAL_ONE, x, t)
        if not p1.singular and n1 < 100:
            u, v, w = heisenberg.one_soliton_closed(presets.NONLOCAL_ONE, x, t)
            worst1 = max(worst1, abs(p1.u - u), abs(p1.v - v), abs(p1.omega - w))
            n1 += 1
        p2 = heisenberg.ech_solution(presets.NONLOCAL_TWO, x, t)
        if not p2.singular and n2 < 100:
            u, v = heisenberg.two_soliton_closed(presets.NONLOCAL_TWO, x, t)
            worst2 = max(worst2, abs(p2.u - u), abs(p2.v - v))
            n2 += 1
    ok = worst1 < 1e-9 and worst2 < 1e-9
    _report("criterion-02 closed-forms", ok,
            f"order-1 defect {worst1:.3e}, order-2 defect {worst2:.3e} "
            f"(100 random points each, tol 1e-9)")


def test_03_constraint_and_nonlocality():
    worst_c = worst_n = 0.0
    for name in ("nonlocal-one", "nonlocal-two", "nonlocal-three"):
        cfg = presets.SOLITON_CONFIGS[name]
        worst_c = max(worst_c, heisenberg.constraint_defect(cfg, GRID_41))
        worst_n = max(worst_n, heisenberg.nonlocality_defect_ech(cfg, GRID_41)[0])
    ok = worst_c < 1e-10 and worst_n < 1e-10
    _report("criterion-03 constraint-and-mirror-coupling", ok,
            f"constraint {worst_c:.3e}, mirror coupling {worst_n:.3e} "
            f"(41x41 grid, orders 1..3, tol 1e-10)")


def test_04_pde_residuals():
    worst = 0.0
    for name in ("nonlocal-one", "nonlocal-two"):
        cfg = presets.SOLITON_CONFIGS[name]
        rep_u, rep_v = heisenberg.ech_residual(cfg, RESIDUAL_GRID)
        worst = max(worst, rep_u.max_relative, rep_v.max_relative)
    worst = max(worst, heisenberg.st_residual(
        presets.NONLOCAL_ONE, RESIDUAL_GRID).max_relative)
    for name in ("nonlocal-one", "nonlocal-two"):
        cfg = presets.SOLITON_CONFIGS[name]
        qf = lambda x, t, c=cfg: hirota.hirota_fields(c, x, t)[0]
        rf = lambda x, t, c=cfg: hirota.hirota_fields(c, x, t)[1]
        dxp = lambda x, t, c=cfg: hirota.hirota_fields_dx(c, x, t)[:2]
        rq, rr = hirota.hirota_residual(qf, rf, cfg.alpha, 1j * cfg.delta,
                                        RESIDUAL_GRID, dx_pair=dxp)
        worst = max(worst, rq.max_relative, rr.max_relative)
    cfg = presets.NONLOCAL_ONE
    qf = lambda x, t: hirota.hirota_one_soliton_nonlocal(cfg, x, t)[0]
    rf = lambda x, t: hirota.hirota_one_soliton_nonlocal(cfg, x, t)[1]
    rq, rr = hirota.hirota_residual(qf, rf, cfg.alpha, 1j * cfg.delta,
                                    RESIDUAL_GRID)
    worst = max(worst, rq.max_relative, rr.max_relative)
    for name in ("local-periodic", "local-third-order"):
        ref = presets.REFERENCE_SOLITONS[name]
        qf = lambda x, t, r=ref: hirota.hirota_reference_local(
            r.mu, r.gamma, r.alpha, r.beta, x, t)
        rf = lambda x, t, q=qf: -np.conj(q(x, t))
        rq, rr = hirota.hirota_residual(qf, rf, ref.alpha, ref.beta,
                                        RESIDUAL_GRID)
        worst = max(worst, rq.max_relative, rr.max_relative)
    ref = presets.REFERENCE_SOLITONS["nonlocal-reference"]
    qf = lambda x, t: hirota.hirota_reference_nonlocal(
        ref.mu, ref.gamma, ref.alpha, ref.delta, x, t)
    rf = lambda x, t: -np.conj(qf(-np.asarray(x), t))
    rq, rr = hirota.hirota_residual(qf, rf, ref.alpha, 1j * ref.delta,
                                    RESIDUAL_GRID)
    worst = max(worst, rq.max_relative, rr.max_relative)
    ok = worst < 1e-5
    _report("criterion-04 pde-residuals", ok,
            f"worst relative residual {worst:.3e} over both component "
            f"equations, the matrix flow and all gauge-image pairs "
            f"(h=1e-3, order 4, tol 1e-5)")


def test_05_gauge_image_nonlocality():
    worst = 0.0
    for name in ("nonlocal-one", "nonlocal-two", "nonlocal-three"):
        worst = max(worst, hirota.nonlocality_defect_hirota(
            presets.SOLITON_CONFIGS[name], GRID_41))
    ok = worst < 1e-10
    _report("criterion-05 gauge-image-mirror-coupling", ok,
            f"defect {worst:.3e} (orders 1..3, tol 1e-10)")


def test_06_entry_derivative_identity():
    xg, tg = GRID_21.mesh()
    worst = 0.0
    for name in ("nonlocal-one", "nonlocal-two"):
        worst = max(worst, darboux.ab_identity_defect(
            presets.SOLITON_CONFIGS[name], xg, tg))
    ok = worst < 1e-7
    _report("criterion-06 entry-derivative-identity", ok,
            f"normalized defect {worst:.3e} (21x21 grid, tol 1e-7)")


def test_07_zero_curvature():
    ref = presets.REFERENCE_SOLITONS["local-periodic"]
    qf = lambda x, t: hirota.hirota_reference_local(
        ref.mu, ref.gamma, ref.alpha, ref.beta, x, t)
    rf = lambda x, t: -np.conj(qf(x, t))
    cfg = presets.NONLOCAL_ONE
    qn = lambda x, t: hirota.hirota_one_soliton_nonlocal(cfg, x, t)[0]
    rn = lambda x, t: hirota.hirota_one_soliton_nonlocal(cfg, x, t)[1]
    worst = spread = 0.0
    for q, r, alpha, beta in ((qf, rf, ref.alpha, ref.beta),
                              (qn, rn, cfg.alpha, 1j * cfg.delta)):
        vals = [hirota.zero_curvature_residual(q, r, alpha, beta, lam,
                                               RESIDUAL_GRID).max_relative
                for lam in ZC_LAMBDAS]
        worst = max(worst, max(vals))
        spread = max(spread, max(vals) - min(vals))
    ok = worst < 1e-5 and spread < 1e-6
    _report("criterion-07 zero-curvature", ok,
            f"worst residual {worst:.3e} (tol 1e-5), spectral-parameter "
            f"spread {spread:.3e} (tol 1e-6) at 3 values each")


def test_08_spin_flows():
    xg, tg = RESIDUAL_GRID.mesh()
    alg = 0.0
    for name in ("nonlocal-one", "nonlocal-two", "nonlocal-three", "local-limit"):
        cfg = presets.SOLITON_CONFIGS[name]
        s, _ = landau.spin_fields(cfg, xg, tg)
        m, l, _ = landau.split_fields(cfg, xg, tg)
        alg = max(alg, masked_max(landau.dot(s, s) - 1),
                  masked_max(landau.dot(m, l)),
                  masked_max(landau.dot(m, m) - landau.dot(l, l) - 1))
    cfg = presets.LOCAL_LIMIT
    elle = landau.elle_residual(landau.ech_spin_sampler(cfg), cfg.alpha, 0.0,
                                RESIDUAL_GRID).max_relative
    nelle = 0.0
    ref = presets.REFERENCE_SOLITONS["nonlocal-reference"]
    qf = lambda x, t: hirota.hirota_reference_nonlocal(
        ref.mu, ref.gamma, ref.alpha, ref.delta, x, t)
    qxf = lambda x, t: hirota.hirota_reference_nonlocal_dx(
        ref.mu, ref.gamma, ref.alpha, ref.delta, x, t)
    sampler = landau.nonlocal_spin_sampler(qf, qxf)
    mf = lambda x, t: np.real(np.moveaxis(sampler(x, t), -1, 0))
    lf = lambda x, t: np.imag(np.moveaxis(sampler(x, t), -1, 0))
    rm, rl = landau.nelle_residual(mf, lf, ref.alpha, ref.delta, RESIDUAL_GRID)
    nelle = max(nelle, rm.max_relative, rl.max_relative)
    cfg2 = presets.NONLOCAL_TWO
    mf2 = lambda x, t: landau.split_fields(cfg2, x, t)[0]
    lf2 = lambda x, t: landau.split_fields(cfg2, x, t)[1]
    rm, rl = landau.nelle_residual(mf2, lf2, cfg2.alpha, cfg2.delta,
                                   RESIDUAL_GRID)
    nelle = max(nelle, rm.max_relative, rl.max_relative)
    ok = alg < 1e-10 and elle < 1e-5 and nelle < 1e-4
    _report("criterion-08 spin-flows", ok,
            f"algebraic defects {alg:.3e} (tol 1e-10), complex spin flow "
            f"{elle:.3e} (tol 1e-5), real split flow {nelle:.3e} (tol 1e-4)")


def test_09_bilinear_constraints():
    ref = presets.REFERENCE_SOLITONS["local-periodic"]
    qf = lambda x, t: hirota.hirota_reference_local(
        ref.mu, ref.gamma, ref.alpha, ref.beta, x, t)
    co = hirota.bilinear_constraint_defect(qf, RESIDUAL_GRID, "local", -1.0)
    refn = presets.REFERENCE_SOLITONS["nonlocal-reference"]
    qn = lambda x, t: hirota.hirota_reference_nonlocal(
        refn.mu, refn.gamma, refn.alpha, refn.delta, x, t)
    con = hirota.bilinear_constraint_defect(qn, RESIDUAL_GRID, "nonlocal", 1.0)
    cfg = presets.NONLOCAL_TWO
    q2 = lambda x, t: hirota.hirota_fields(cfg, x, t)[0]
    generic = hirota.bilinear_constraint_defect(q2, RESIDUAL_GRID, "nonlocal",
                                                cfg.kappa)
    ok = co < 1e-6 and con < 1e-6 and generic > 1e-2
    _report("criterion-09 bilinear-constraints", ok,
            f"local {co:.3e} and mirror {con:.3e} (tol 1e-6); generic "
            f"two-soliton defect {generic:.3e} (must exceed 1e-2)")


def test_10_qualitative_reproduction():
    classes = {}
    for name in ("local-periodic", "local-decaying",
                 "local-third-order-decaying"):
        ref = presets.REFERENCE_SOLITONS[name]
        qf = lambda x, t, r=ref: hirota.hirota_reference_local(
            r.mu, r.gamma, r.alpha, r.beta, x, t)
        qxf = lambda x, t, r=ref: hirota.hirota_reference_local_dx(
            r.mu, r.gamma, r.alpha, r.beta, x, t)
        sampler = landau.local_spin_sampler(qf, qxf, -1.0)
        times, values, _ = landau.trajectory(sampler, ref.x0, ref.t0, ref.t1,
                                             ref.samples)
        classes[name] = landau.classify_trajectory(times, np.real(values))
    xs = np.linspace(-10.0, 10.0, 401)
    m, l, _ = landau.split_fields(presets.NONLOCAL_TWO, xs,
                                  np.full_like(xs, 3.0))
    clusters = [landau.extremum_clusters(comp) for comp in list(m) + list(l)]
    ok = (classes["local-periodic"] == "recurrent"
          and classes["local-decaying"] == "decaying"
          and classes["local-third-order-decaying"] == "decaying"
          and all(c == 2 for c in clusters))
    _report("criterion-10 qualitative-reproduction", ok,
            f"classes {classes}, extremum clusters per component {clusters} "
            f"(expect recurrent/decaying/decaying and 2 everywhere)")
