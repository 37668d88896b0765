"""End-to-end self-test over the built-in parameter sets.

Each check compares one computed defect or residual against the tolerance
it is judged by; the collection doubles as a quick health check of the
whole construction (oracle equivalences, algebraic invariants, PDE
residuals, qualitative trajectory classes).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import darboux, heisenberg, hirota, landau, presets
from .spectral import SolitonConfig
from .verification import GridSpec, masked_max


@dataclass
class CheckResult:
    name: str
    value: float
    tolerance: float
    comparison: str = "<"
    detail: str = ""

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.value):
            return False
        return bool(self.value < self.tolerance if self.comparison == "<"
                    else self.value > self.tolerance)

    def to_dict(self) -> dict:
        return {"name": self.name, "value": float(self.value),
                "tolerance": self.tolerance, "comparison": self.comparison,
                "passed": self.passed, "detail": self.detail}


def _random_configs(rng, n: int, trials: int):
    base = presets.NONLOCAL_THREE
    for _ in range(trials):
        lams = [complex(rng.uniform(0.2, 0.8) * rng.choice([-1, 1]),
                        rng.uniform(-0.6, 0.6)) for _ in range(n)]
        gammas = [complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
                  for _ in range(2 * n)]
        yield SolitonConfig(n, lams, gammas, kappa=float(rng.choice([1.0, 3.0, -2.0])),
                            alpha=base.alpha, delta=base.delta)


def _oracle_checks(rng, trials: int):
    worst_eq = 0.0
    worst_chi = 0.0
    for n in (1, 2, 3):
        for cfg in _random_configs(rng, n, trials):
            x, t = rng.uniform(-2, 2), rng.uniform(-1, 1)
            try:
                closed = darboux.lgen_closed(cfg, x, t)
                state = darboux.darboux_iterate(cfg, x, t)
            except (darboux.SingularPointError, OverflowError):
                continue
            scale = np.max(np.abs(closed))
            worst_eq = max(worst_eq, float(np.max(np.abs(closed - state.accumulated)) / scale))
            det = closed[0, 0] * closed[1, 1] - closed[0, 1] * closed[1, 0]
            worst_chi = max(worst_chi, abs(det - cfg.chi) / abs(cfg.chi))
    return [CheckResult("intertwiner-oracle-equivalence", worst_eq, 1e-9,
                        detail=f"n=1..3, {trials} random configs each"),
            CheckResult("intertwiner-determinant", worst_chi, 1e-9,
                        detail="det of accumulated intertwiner vs product formula")]


def _closed_form_checks(rng, points: int):
    worst1 = worst2 = 0.0
    cfg1, cfg2 = presets.NONLOCAL_ONE, presets.NONLOCAL_TWO
    for _ in range(points):
        x, t = rng.uniform(-3, 3), rng.uniform(-1.5, 1.5)
        p = heisenberg.ech_solution(cfg1, x, t)
        u, v, w = heisenberg.one_soliton_closed(cfg1, x, t)
        worst1 = max(worst1, abs(p.u - u), abs(p.v - v), abs(p.omega - w))
        p2 = heisenberg.ech_solution(cfg2, x, t)
        u2, v2 = heisenberg.two_soliton_closed(cfg2, x, t)
        worst2 = max(worst2, abs(p2.u - u2), abs(p2.v - v2))
    return [CheckResult("one-soliton-closed-form", worst1, 1e-9),
            CheckResult("two-soliton-closed-form", worst2, 1e-9)]


def run_selftest(grid: GridSpec | None = None, trials: int = 10,
                 rng_seed: int = 7) -> dict:
    """Run every built-in check; returns a JSON-ready report."""
    start = time.monotonic()
    rng = np.random.default_rng(rng_seed)
    grid = grid or GridSpec(-4.0, 4.0, 17, -1.5, 1.5, 11)
    checks: list[CheckResult] = []

    checks += _oracle_checks(rng, trials)
    checks += _closed_form_checks(rng, 5 * trials)

    cfg1, cfg2, cfg3 = (presets.NONLOCAL_ONE, presets.NONLOCAL_TWO,
                        presets.NONLOCAL_THREE)

    worst = max(heisenberg.constraint_defect(cfg, grid) for cfg in (cfg1, cfg2, cfg3))
    checks.append(CheckResult("field-constraint", worst, 1e-10,
                              detail="omega^2 + uv - 1 over grid, n=1..3"))
    worst = max(heisenberg.nonlocality_defect_ech(cfg, grid)[0]
                for cfg in (cfg1, cfg2, cfg3))
    checks.append(CheckResult("field-nonlocality", worst, 1e-10,
                              detail="u(x,t) - kappa conj(v(-x,t)), n=1..3"))

    worst = 0.0
    for cfg in (cfg1, cfg2):
        rep_u, rep_v = heisenberg.ech_residual(cfg, grid)
        worst = max(worst, rep_u.max_relative, rep_v.max_relative)
    checks.append(CheckResult("component-equation-residual", worst, 1e-5,
                              detail="both coupled field equations, n=1,2"))
    checks.append(CheckResult("matrix-flow-residual",
                              heisenberg.st_residual(cfg1, grid).max_relative, 1e-5))

    worst = 0.0
    for _ in range(trials):
        x, t = rng.uniform(-2, 2), rng.uniform(-1, 1)
        p = hirota.hirota_from_spectral(cfg1, x, t)
        q, r = hirota.hirota_one_soliton_nonlocal(cfg1, x, t)
        worst = max(worst, abs(p.q - q), abs(p.r - r))
    checks.append(CheckResult("hirota-map-closed-form", worst, 1e-9))

    worst = max(hirota.nonlocality_defect_hirota(cfg, grid)
                for cfg in (cfg1, cfg2, cfg3))
    checks.append(CheckResult("hirota-nonlocality", worst, 1e-10, detail="n=1..3"))

    worst = 0.0
    for cfg in (cfg1, cfg2):
        qf = lambda x, t, c=cfg: hirota.hirota_fields(c, x, t)[0]
        rf = lambda x, t, c=cfg: hirota.hirota_fields(c, x, t)[1]
        dxp = lambda x, t, c=cfg: hirota.hirota_fields_dx(c, x, t)[:2]
        rq, rr = hirota.hirota_residual(qf, rf, cfg.alpha, 1j * cfg.delta,
                                        grid, dx_pair=dxp)
        worst = max(worst, rq.max_relative, rr.max_relative)
    ref = presets.REFERENCE_SOLITONS
    for name in ("local-periodic", "local-third-order-decaying"):
        rs = ref[name]
        qf = lambda x, t, r=rs: hirota.hirota_reference_local(r.mu, r.gamma, r.alpha, r.beta, x, t)
        rf = lambda x, t, q=qf: -np.conj(q(x, t))
        rq, rr = hirota.hirota_residual(qf, rf, rs.alpha, rs.beta, grid)
        worst = max(worst, rq.max_relative, rr.max_relative)
    rs = ref["nonlocal-reference"]
    qf = lambda x, t: hirota.hirota_reference_nonlocal(rs.mu, rs.gamma, rs.alpha, rs.delta, x, t)
    rf = lambda x, t: -np.conj(qf(-np.asarray(x), t))
    rq, rr = hirota.hirota_residual(qf, rf, rs.alpha, 1j * rs.delta, grid)
    worst = max(worst, rq.max_relative, rr.max_relative)
    checks.append(CheckResult("hirota-system-residual", worst, 1e-5,
                              detail="spectral n=1,2 and reference solitons"))

    small = GridSpec(grid.x0, grid.x1, 11, grid.t0, grid.t1, 7)
    worst = max(darboux.ab_identity_defect(cfg, *small.mesh()) for cfg in (cfg1, cfg2))
    checks.append(CheckResult("entry-derivative-identity", worst, 1e-7))

    rs = ref["local-periodic"]
    qf_loc = lambda x, t: hirota.hirota_reference_local(rs.mu, rs.gamma, rs.alpha, rs.beta, x, t)
    rf_loc = lambda x, t: -np.conj(qf_loc(x, t))
    qf_nl = lambda x, t: hirota.hirota_one_soliton_nonlocal(cfg1, x, t)[0]
    rf_nl = lambda x, t: hirota.hirota_one_soliton_nonlocal(cfg1, x, t)[1]
    zc_vals = []
    for qf, rf, alpha, beta in ((qf_loc, rf_loc, rs.alpha, rs.beta),
                                (qf_nl, rf_nl, cfg1.alpha, 1j * cfg1.delta)):
        per_lam = [hirota.zero_curvature_residual(qf, rf, alpha, beta, lam, small).max_relative
                   for lam in (0.7, 1 + 0.5j, -0.3j)]
        zc_vals.append(per_lam)
    checks.append(CheckResult("zero-curvature-residual",
                              max(max(v) for v in zc_vals), 1e-5,
                              detail="local and mirror-coupled pairs, 3 lambda each"))
    checks.append(CheckResult("zero-curvature-lambda-independence",
                              max(max(v) - min(v) for v in zc_vals), 1e-6))

    s, _ = landau.spin_fields(cfg2, *grid.mesh())
    m, l, _ = landau.split_fields(cfg2, *grid.mesh())
    unit = masked_max(landau.dot(s, s) - 1)
    checks.append(CheckResult("spin-unit-norm", unit, 1e-10))
    worst = max(masked_max(landau.dot(m, l)),
                masked_max(landau.dot(m, m) - landau.dot(l, l) - 1),
                masked_max(m - np.real(s)),
                masked_max(l - np.imag(s)))
    checks.append(CheckResult("spin-split-invariants", worst, 1e-10,
                              detail="m.l, m.m-l.l-1, and agreement with Re/Im of s"))

    rep = landau.elle_residual(landau.ech_spin_sampler(presets.LOCAL_LIMIT),
                               presets.LOCAL_LIMIT.alpha, 0.0, grid)
    checks.append(CheckResult("spin-flow-residual-local-limit", rep.max_relative, 1e-5))

    rs = ref["nonlocal-reference"]
    qf = lambda x, t: hirota.hirota_reference_nonlocal(rs.mu, rs.gamma, rs.alpha, rs.delta, x, t)
    qfdx = lambda x, t: hirota.hirota_reference_nonlocal_dx(rs.mu, rs.gamma, rs.alpha, rs.delta, x, t)
    samp_nl = landau.nonlocal_spin_sampler(qf, qfdx)
    rep = landau.elle_residual(samp_nl, rs.alpha, 1j * rs.delta, grid)
    checks.append(CheckResult("spin-flow-residual-nonlocal", rep.max_relative, 1e-5))

    mf = lambda x, t: np.real(np.moveaxis(samp_nl(x, t), -1, 0))
    lf = lambda x, t: np.imag(np.moveaxis(samp_nl(x, t), -1, 0))
    rm, rl = landau.nelle_residual(mf, lf, rs.alpha, rs.delta, grid)
    worst = max(rm.max_relative, rl.max_relative)
    mf2 = lambda x, t: landau.split_fields(cfg2, x, t)[0]
    lf2 = lambda x, t: landau.split_fields(cfg2, x, t)[1]
    rm, rl = landau.nelle_residual(mf2, lf2, cfg2.alpha, cfg2.delta, grid)
    worst = max(worst, rm.max_relative, rl.max_relative)
    checks.append(CheckResult("real-split-flow-residual", worst, 1e-4,
                              detail="mirror reference and two-soliton split"))

    rsl = ref["local-periodic"]
    qf = lambda x, t: hirota.hirota_reference_local(rsl.mu, rsl.gamma, rsl.alpha, rsl.beta, x, t)
    co = hirota.bilinear_constraint_defect(qf, small, "local", -1.0)
    qn = lambda x, t: hirota.hirota_reference_nonlocal(rs.mu, rs.gamma, rs.alpha, rs.delta, x, t)
    con = hirota.bilinear_constraint_defect(qn, small, "nonlocal", 1.0)
    checks.append(CheckResult("bilinear-constraint", max(co, con), 1e-6))
    q2 = lambda x, t: hirota.hirota_fields(cfg2, x, t)[0]
    con2 = hirota.bilinear_constraint_defect(q2, small, "nonlocal", cfg2.kappa)
    checks.append(CheckResult("bilinear-constraint-restrictive", con2, 1e-2,
                              comparison=">", detail="generic two-soliton must violate it"))

    for name in ("local-periodic", "local-decaying", "local-third-order-decaying"):
        rsx = ref[name]
        qf = lambda x, t, r=rsx: hirota.hirota_reference_local(r.mu, r.gamma, r.alpha, r.beta, x, t)
        qfdx = lambda x, t, r=rsx: hirota.hirota_reference_local_dx(r.mu, r.gamma, r.alpha, r.beta, x, t)
        samp = landau.local_spin_sampler(qf, qfdx, -1.0)
        ts, vals, _ = landau.trajectory(samp, rsx.x0, rsx.t0, rsx.t1, rsx.samples)
        got = landau.classify_trajectory(ts, np.real(vals))
        checks.append(CheckResult(f"trajectory-{name}",
                                  0.0 if got == rsx.expected_class else 1.0, 0.5,
                                  detail=f"classified {got}, expected {rsx.expected_class}"))

    xs = np.linspace(-10.0, 10.0, 401)
    m, l, _ = landau.split_fields(cfg2, xs, np.full_like(xs, 3.0))
    clusters = [landau.extremum_clusters(comp) for comp in list(m) + list(l)]
    ok = all(c == 2 for c in clusters)
    checks.append(CheckResult("two-soliton-scan-clusters",
                              0.0 if ok else 1.0, 0.5,
                              detail=f"extremum clusters per component: {clusters}"))

    elapsed = time.monotonic() - start
    return {
        "checks": [c.to_dict() for c in checks],
        "passed": all(c.passed for c in checks),
        "n_checks": len(checks),
        "elapsed_seconds": elapsed,
    }
