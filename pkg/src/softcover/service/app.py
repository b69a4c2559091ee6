"""FastAPI application wrapping the core computations.

One POST endpoint per subcommand surface: /exponent, /second-order,
/simulate, /gaussian. Domain errors map to HTTP 400 with the error class name
in the body; resource-cap violations (SizeOverflow, SpaceTooLarge) share that
shape so clients can distinguish them from parameter problems.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import SoftCoverError
from ..exponents import gamma_delta, second_order_plan
from ..gaussian import (
    GaussianSetup,
    emit_density_grid,
    mixture_tv,
    optimize_codewords,
    sample_gaussian_codebook,
)
from ..info import info_profile
from ..montecarlo import FixedRate, SecondOrderRate, TrialConfig, run_sweep
from ..specs import parse_channel_spec
from .models import (
    BlockModel,
    ExponentRequest,
    ExponentResponse,
    GaussianRequest,
    GaussianResponse,
    GridModel,
    SecondOrderRequest,
    SecondOrderResponse,
    SimulateRequest,
    SimulateResponse,
    SummaryModel,
    TailModel,
    TrialRowModel,
    json_float,
)

CAP_ERRORS = ("SizeOverflow", "SpaceTooLarge")

MU_N_NOTE = (
    "the atypicality estimate mu_n is Q(Qinv(eps_target) + (r/sqrt(V)) log2(n)/sqrt(n))"
    " + rho/(V^(3/2) sqrt(n)); with this reading mu_n converges to eps_target from"
    " below as n grows, which is what the rate schedule needs"
)
VACUOUS_NOTE = (
    "failure bounds at or above one (failure_log >= 0) are flagged vacuous=true;"
    " at desk-scale blocklengths they constrain nothing, and they become"
    " non-vacuous only at blocklengths where full output-space enumeration is"
    " far out of reach"
)
LOG_BASE_NOTE = "log(n) terms in rate schedules are base 2, matching the bit units of rates"


def _exponent_notes(vacuous: bool | None) -> list[str]:
    notes = [VACUOUS_NOTE] if vacuous else []
    return notes


def create_app() -> FastAPI:
    app = FastAPI(title="softcover", version=__version__)

    @app.exception_handler(SoftCoverError)
    async def _domain_error(request: Request, exc: SoftCoverError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "message": str(exc)},
        )

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"error": "ValueError", "message": str(exc)},
        )

    @app.get("/health")
    async def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/exponent", response_model=ExponentResponse)
    def exponent(req: ExponentRequest) -> ExponentResponse:
        qx, ch = parse_channel_spec(req.channel.model_dump())
        res = gamma_delta(qx, ch, req.rate, req.delta, n=req.n)
        return ExponentResponse(
            gamma_delta=res.gamma_delta,
            alpha_star="boundary" if res.boundary else res.alpha_star,
            boundary=res.boundary,
            epsilon_star=res.epsilon_star,
            beta=res.beta,
            mutual_info_bits=res.mutual_info_bits,
            n=res.n,
            tv_threshold=json_float(res.tv_threshold),
            tv_bound_log2=json_float(res.tv_bound_log2),
            failure_log=json_float(res.failure_log),
            vacuous=res.vacuous,
            paper_notes=_exponent_notes(res.vacuous),
        )

    @app.post("/second-order", response_model=SecondOrderResponse)
    def second_order(req: SecondOrderRequest) -> SecondOrderResponse:
        qx, ch = parse_channel_spec(req.channel.model_dump())
        profile = info_profile(qx, ch)
        r = req.r if req.r is not None else (req.c - req.d - 1.0) / 2.0
        plan = second_order_plan(
            profile, req.eps_target, req.n, req.c, req.d, r, y_size=ch.output.size
        )
        notes = [MU_N_NOTE, LOG_BASE_NOTE]
        if plan.vacuous:
            notes.append(VACUOUS_NOTE)
        return SecondOrderResponse(
            epsilon_target=plan.epsilon_target,
            c=plan.c,
            d=plan.d,
            r=plan.r,
            n=plan.n,
            rate=plan.rate,
            typicality_slack=plan.typicality_slack,
            mu_n=plan.mu_n,
            failure_log=json_float(plan.failure_log),
            vacuous=plan.vacuous,
            mutual_info_bits=profile.mutual_info_bits,
            dispersion=profile.dispersion,
            third_abs_moment=profile.third_abs_moment,
            paper_notes=notes,
        )

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest) -> SimulateResponse:
        qx, ch = parse_channel_spec(req.channel.model_dump())
        if req.rate is not None:
            rate_spec = FixedRate(req.rate)
        else:
            rate_spec = SecondOrderRate(req.eps_target, req.c)
        cfg = TrialConfig(
            qx=qx,
            ch=ch,
            n_list=tuple(req.n_list),
            rate_spec=rate_spec,
            trials=req.trials,
            master_seed=req.master_seed,
            delta=req.delta,
            epsilon_override=req.epsilon_override,
            tail_thresholds=tuple(req.tail_thresholds),
            trial_offset=req.trial_offset,
        )
        result = run_sweep(cfg, threads=req.threads)
        rows = [
            TrialRowModel(
                n=r.n, trial=r.trial, seed=r.seed, tv=r.tv,
                p2_mass=r.p2_mass, d1_max=r.d1_max, pos_part_d1=r.pos_part_d1,
            )
            for r in result.rows
        ]
        blocks = []
        any_vacuous = False
        for b in result.blocks:
            bound = b.bound
            if bound is not None and bound.vacuous:
                any_vacuous = True
            blocks.append(
                BlockModel(
                    n=b.n,
                    rate_bits=b.rate_bits,
                    epsilon_used=b.epsilon_used,
                    median_tv=b.median_tv,
                    gamma_delta=bound.gamma_delta if bound else None,
                    tv_threshold=json_float(bound.tv_threshold) if bound else None,
                    tv_bound_log2=json_float(bound.tv_bound_log2) if bound else None,
                    failure_log=json_float(bound.failure_log) if bound else None,
                    vacuous=bound.vacuous if bound else None,
                    tails=[
                        TailModel(threshold=t.threshold, p_hat=t.p_hat, stderr=t.stderr)
                        for t in b.tails
                    ],
                )
            )
        notes = [VACUOUS_NOTE] if any_vacuous else []
        summary = SummaryModel(
            slope=result.decay.slope if result.decay else None,
            slope_stderr=result.decay.stderr if result.decay else None,
            excluded_ns=list(result.decay.excluded_ns) if result.decay else [],
            blocks=blocks,
            paper_notes=notes,
        )
        return SimulateResponse(rows=rows, summary=summary)

    @app.post("/gaussian", response_model=GaussianResponse)
    def gaussian(req: GaussianRequest) -> GaussianResponse:
        setup = GaussianSetup(
            snr=req.snr, dim=req.dim, b=req.b, noise_var=req.noise_var, seed=req.seed
        )
        codewords = sample_gaussian_codebook(setup)
        if req.optimize:
            codewords = optimize_codewords(
                codewords, setup, max_iters=req.max_iters, tol=req.tol
            )
        tv = mixture_tv(codewords, setup, points=req.grid_points)
        grid = emit_density_grid(codewords, setup, points=req.grid_points)
        return GaussianResponse(
            tv=tv,
            seed=req.seed,
            optimized=req.optimize,
            snr=req.snr,
            dim=req.dim,
            b=req.b,
            noise_var=req.noise_var,
            codewords=codewords.tolist(),
            grid=GridModel(
                xs=grid.xs.tolist(),
                ys=grid.ys.tolist() if grid.ys is not None else None,
                mixture=grid.mixture.tolist(),
                target=grid.target.tolist() if grid.target is not None else None,
            ),
            paper_notes=[],
        )

    return app
