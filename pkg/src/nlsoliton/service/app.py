"""HTTP service exposing generation, verification and trajectory runs.

The compute modules stay pure; this layer only translates between wire
models and core calls. The CLI drives the same app in-process, so every
artifact a user can produce is also reachable over HTTP.
"""
from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import darboux, heisenberg, hirota, landau, presets
from ..selftest import run_selftest
from ..spectral import SolitonConfig
from ..verification import GridSpec
from .models import (CheckModel, ConfigModel, GenerateRequest, GridModel,
                     SelftestResponse, SweepEntry, SweepRequest,
                     SweepResponse, TableResponse, TrajectoryRequest,
                     TrajectoryResponse, VerifyRequest, VerifyResponse,
                     format_complex, parse_complex)

VERIFY_SYSTEMS = ("ech", "hirota", "elle", "nelle", "zerocurv", "all")

ZC_LAMBDAS = (0.7 + 0j, 1.0 + 0.5j, -0.3j)


def _resolve_config(config: ConfigModel | None, preset: str | None) -> SolitonConfig:
    if config is None and preset is None:
        raise HTTPException(422, "either an inline config or a preset name is required")
    if config is not None:
        try:
            return config.to_config()
        except (ValueError, OverflowError) as exc:
            raise HTTPException(422, f"invalid configuration: {exc}") from exc
    if preset not in presets.SOLITON_CONFIGS:
        raise HTTPException(
            422, f"unknown preset {preset!r}; known: {sorted(presets.SOLITON_CONFIGS)}")
    return presets.SOLITON_CONFIGS[preset]


def _check(name: str, value: float, tolerance: float, comparison: str = "<",
           detail: str = "") -> CheckModel:
    finite = np.isfinite(value)
    ok = bool(finite and (value < tolerance if comparison == "<" else value > tolerance))
    return CheckModel(name=name, value=float(value) if finite else float("nan"),
                      tolerance=tolerance, comparison=comparison,
                      passed=ok, detail=detail)


def _verify_checks(cfg: SolitonConfig, grid: GridSpec, h: float,
                   system: str) -> list[CheckModel]:
    if system not in VERIFY_SYSTEMS:
        raise HTTPException(
            422, f"unknown system {system!r}; known: {', '.join(VERIFY_SYSTEMS)}")
    checks: list[CheckModel] = []
    want = VERIFY_SYSTEMS[:-1] if system == "all" else (system,)

    if "ech" in want:
        checks.append(_check("ech-constraint",
                             heisenberg.constraint_defect(cfg, grid), 1e-10,
                             detail="omega^2 + uv - 1"))
        u_def, w_diag = heisenberg.nonlocality_defect_ech(cfg, grid)
        checks.append(_check("ech-nonlocality", u_def, 1e-10,
                             detail=f"u vs mirrored v; omega diagnostic {w_diag:.3e}"))
        rep_u, rep_v = heisenberg.ech_residual(cfg, grid, h=h)
        checks.append(_check("ech-residual-u", rep_u.max_relative, 1e-5))
        checks.append(_check("ech-residual-v", rep_v.max_relative, 1e-5))
        checks.append(_check("ech-residual-matrix",
                             heisenberg.st_residual(cfg, grid, h=h).max_relative, 1e-5))

    if "hirota" in want:
        checks.append(_check("hirota-nonlocality",
                             hirota.nonlocality_defect_hirota(cfg, grid), 1e-10))
        qf = lambda x, t: hirota.hirota_fields(cfg, x, t)[0]
        rf = lambda x, t: hirota.hirota_fields(cfg, x, t)[1]
        dxp = lambda x, t: hirota.hirota_fields_dx(cfg, x, t)[:2]
        rq, rr = hirota.hirota_residual(qf, rf, cfg.alpha, 1j * cfg.delta,
                                        grid, h=h, dx_pair=dxp)
        checks.append(_check("hirota-residual-q", rq.max_relative, 1e-5))
        checks.append(_check("hirota-residual-r", rr.max_relative, 1e-5))

    if "elle" in want:
        from ..verification import masked_max
        s, _ = landau.spin_fields(cfg, *grid.mesh())
        checks.append(_check("spin-unit-norm",
                             masked_max(landau.dot(s, s) - 1), 1e-10))
        rep = landau.elle_residual(landau.ech_spin_sampler(cfg), cfg.alpha,
                                   1j * cfg.delta, grid, h=h)
        checks.append(_check("spin-flow-residual", rep.max_relative, 1e-5))

    if "nelle" in want:
        from ..verification import masked_max
        m, l, _ = landau.split_fields(cfg, *grid.mesh())
        worst = max(masked_max(landau.dot(m, l)),
                    masked_max(landau.dot(m, m) - landau.dot(l, l) - 1))
        checks.append(_check("split-invariants", worst, 1e-10,
                             detail="m.l and m.m - l.l - 1"))
        mf = lambda x, t: landau.split_fields(cfg, x, t)[0]
        lf = lambda x, t: landau.split_fields(cfg, x, t)[1]
        rm, rl = landau.nelle_residual(mf, lf, cfg.alpha, cfg.delta, grid, h=h)
        checks.append(_check("split-flow-residual-m", rm.max_relative, 1e-4))
        checks.append(_check("split-flow-residual-l", rl.max_relative, 1e-4))

    if "zerocurv" in want:
        qf = lambda x, t: hirota.hirota_fields(cfg, x, t)[0]
        rf = lambda x, t: hirota.hirota_fields(cfg, x, t)[1]
        vals = [hirota.zero_curvature_residual(
            qf, rf, cfg.alpha, 1j * cfg.delta, lam, grid, h=h).max_relative
            for lam in ZC_LAMBDAS]
        checks.append(_check("zero-curvature-residual", max(vals), 1e-5,
                             detail=f"3 spectral values {[str(l) for l in ZC_LAMBDAS]}"))
        checks.append(_check("zero-curvature-lambda-independence",
                             max(vals) - min(vals), 1e-6))
    return checks


def _field_table(cfg: SolitonConfig, grid: GridSpec) -> TableResponse:
    xg, tg = grid.mesh()
    u, v, w, bad1 = heisenberg.ech_fields(cfg, xg, tg)
    q, r, bad2 = hirota.hirota_fields(cfg, xg, tg)
    m, l, bad3 = landau.split_fields(cfg, xg, tg)
    bad = bad1 | bad2 | bad3
    columns = ["x", "t", "u", "v", "omega", "q", "r",
               "m1", "m2", "m3", "l1", "l2", "l3", "singular"]
    rows = []
    for i, xv in enumerate(grid.x):
        for j, tv in enumerate(grid.t):
            rows.append([
                float(xv), float(tv),
                format_complex(u[i, j]), format_complex(v[i, j]),
                format_complex(w[i, j]), format_complex(q[i, j]),
                format_complex(r[i, j]),
                float(m[0, i, j]), float(m[1, i, j]), float(m[2, i, j]),
                float(l[0, i, j]), float(l[1, i, j]), float(l[2, i, j]),
                int(bad[i, j])])
    return TableResponse(columns=columns, rows=rows)


def _reference_sampler(ref: presets.ReferenceSoliton):
    if ref.nonlocal_pairing:
        qf = lambda x, t: hirota.hirota_reference_nonlocal(
            ref.mu, ref.gamma, ref.alpha, ref.delta, x, t)
        qxf = lambda x, t: hirota.hirota_reference_nonlocal_dx(
            ref.mu, ref.gamma, ref.alpha, ref.delta, x, t)
        return landau.nonlocal_spin_sampler(qf, qxf)
    qf = lambda x, t: hirota.hirota_reference_local(
        ref.mu, ref.gamma, ref.alpha, ref.beta, x, t)
    qxf = lambda x, t: hirota.hirota_reference_local_dx(
        ref.mu, ref.gamma, ref.alpha, ref.beta, x, t)
    return landau.local_spin_sampler(qf, qxf, -1.0)


def _trajectory_response(req: TrajectoryRequest) -> TrajectoryResponse:
    if req.soliton is not None:
        if req.soliton not in presets.REFERENCE_SOLITONS:
            raise HTTPException(
                422, f"unknown soliton {req.soliton!r}; "
                     f"known: {sorted(presets.REFERENCE_SOLITONS)}")
        ref = presets.REFERENCE_SOLITONS[req.soliton]
        sampler = _reference_sampler(ref)
        x0 = ref.x0 if req.x0 is None else req.x0
        t0 = ref.t0 if req.t0 is None else req.t0
        t1 = ref.t1 if req.t1 is None else req.t1
        samples = ref.samples if req.samples is None else req.samples
    else:
        cfg = _resolve_config(req.config, req.preset)

        def sampler(x, t):
            m, l, _ = landau.split_fields(cfg, x, t)
            return np.concatenate([np.moveaxis(m, 0, -1),
                                   np.moveaxis(l, 0, -1)], axis=-1)

        x0 = 0.5 if req.x0 is None else req.x0
        t0 = 0.0 if req.t0 is None else req.t0
        t1 = 60.0 if req.t1 is None else req.t1
        samples = 1201 if req.samples is None else req.samples

    times, values, singular = landau.trajectory(sampler, x0, t0, t1, samples)
    if values.shape[1] == 3:
        real = np.concatenate([np.real(values), np.imag(values)], axis=1)
    else:
        real = np.real(values)
    classification = landau.classify_trajectory(times, np.nan_to_num(real))
    columns = ["t", "m1", "m2", "m3", "l1", "l2", "l3", "singular"]
    rows = [[float(times[k])] + [float(real[k, c]) for c in range(6)]
            + [int(singular[k])] for k in range(len(times))]
    return TrajectoryResponse(classification=classification,
                              table=TableResponse(columns=columns, rows=rows))


_SCALAR_PARAMETERS = ("kappa", "alpha", "delta", "c")


def _apply_parameter(model: ConfigModel, parameter: str, value: str) -> ConfigModel:
    data = model.model_dump()
    if parameter in _SCALAR_PARAMETERS:
        data[parameter] = float(parse_complex(value).real)
        return ConfigModel(**data)
    for stem, key in (("lambda", "lambdas"), ("gamma", "gammas"), ("mu", "mu")):
        if parameter.startswith(stem) and parameter[len(stem):].isdigit():
            idx = int(parameter[len(stem):])
            seq = list(data[key])
            if not 0 <= idx < max(len(seq), idx + 1):
                break
            while len(seq) <= idx:
                seq.append("0+0i")
            seq[idx] = format_complex(parse_complex(value))
            data[key] = seq
            return ConfigModel(**data)
    raise HTTPException(
        422, f"unknown sweep parameter {parameter!r}; use one of "
             f"{', '.join(_SCALAR_PARAMETERS)} or lambda<i>/gamma<i>/mu<i>")


def create_app() -> FastAPI:
    app = FastAPI(title="nlsoliton", version="0.1.0",
                  description="Multi-soliton construction and verification service.")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/generate", response_model=TableResponse)
    def generate(req: GenerateRequest) -> TableResponse:
        cfg = _resolve_config(req.config, req.preset)
        return _field_table(cfg, req.grid.to_grid())

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        cfg = _resolve_config(req.config, req.preset)
        checks = _verify_checks(cfg, req.grid.to_grid(), req.h, req.system)
        return VerifyResponse(checks=checks, passed=all(c.passed for c in checks))

    @app.post("/trajectory", response_model=TrajectoryResponse)
    def trajectory(req: TrajectoryRequest) -> TrajectoryResponse:
        if req.soliton is None and req.config is None and req.preset is None:
            raise HTTPException(
                422, "trajectory needs a reference soliton name, a preset or a config")
        return _trajectory_response(req)

    @app.post("/sweep", response_model=SweepResponse)
    def sweep(req: SweepRequest) -> SweepResponse:
        if req.config is not None:
            base = req.config
        else:
            base = ConfigModel.from_config(_resolve_config(None, req.preset))
        grid = req.grid.to_grid()
        entries = []
        for value in req.values:
            varied = _apply_parameter(base, req.parameter, value)
            try:
                cfg = varied.to_config()
            except ValueError as exc:
                entries.append(SweepEntry(value=value, checks=[], passed=False,
                                          error=str(exc)))
                continue
            checks = _verify_checks(cfg, grid, req.h, req.system)
            entries.append(SweepEntry(value=value, checks=checks,
                                      passed=all(c.passed for c in checks)))
        return SweepResponse(entries=entries,
                             passed=all(e.passed for e in entries))

    @app.post("/selftest", response_model=SelftestResponse)
    def selftest() -> SelftestResponse:
        report = run_selftest()
        return SelftestResponse(
            checks=[CheckModel(**c) for c in report["checks"]],
            passed=report["passed"], n_checks=report["n_checks"],
            elapsed_seconds=report["elapsed_seconds"])

    return app
