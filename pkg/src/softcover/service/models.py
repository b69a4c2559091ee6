"""Request/response schemas for the softcover service.

All models reject unknown keys, so a typo in a config file fails validation
before any computation starts. Non-finite floats never appear in responses:
log-scale failure bounds that underflow the double range are reported as null,
and a supremum approached at the order boundary reports ``alpha_star`` as the
string "boundary".
"""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator


def json_float(x: float | None) -> float | None:
    """Map non-finite floats to None so responses stay strict-JSON safe."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


class ChannelSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    shorthand: str | None = None
    input_dist: list[float] | None = None
    channel_rows: list[list[float]] | None = None

    @model_validator(mode="after")
    def _one_form(self) -> "ChannelSpec":
        if self.shorthand is None and self.channel_rows is None:
            raise ValueError("channel spec needs a shorthand or channel_rows")
        if self.shorthand is not None and self.channel_rows is not None:
            raise ValueError("give either a shorthand or channel_rows, not both")
        return self


class ExponentRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    channel: ChannelSpec
    rate: float
    delta: float
    n: int | None = None


class ExponentResponse(BaseModel):
    gamma_delta: float
    alpha_star: float | str
    boundary: bool
    epsilon_star: float
    beta: float
    mutual_info_bits: float
    n: int | None = None
    tv_threshold: float | None = None
    tv_bound_log2: float | None = None
    failure_log: float | None = None
    vacuous: bool | None = None
    paper_notes: list[str]


class SecondOrderRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    channel: ChannelSpec
    eps_target: float
    c: float
    d: float
    r: float | None = None
    n: int


class SecondOrderResponse(BaseModel):
    epsilon_target: float
    c: float
    d: float
    r: float
    n: int
    rate: float
    typicality_slack: float
    mu_n: float
    failure_log: float | None
    vacuous: bool
    mutual_info_bits: float
    dispersion: float
    third_abs_moment: float
    paper_notes: list[str]


class SimulateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    channel: ChannelSpec
    n_list: list[int]
    trials: int = Field(ge=1)
    delta: float
    master_seed: int = 0
    rate: float | None = None
    eps_target: float | None = None
    c: float | None = None
    epsilon_override: float | None = None
    tail_thresholds: list[float] = []
    trial_offset: int = 0
    threads: int | None = None

    @model_validator(mode="after")
    def _rate_form(self) -> "SimulateRequest":
        fixed = self.rate is not None
        second = self.eps_target is not None or self.c is not None
        if fixed == second:
            raise ValueError("give either a fixed rate or (eps_target, c), not both")
        if second and (self.eps_target is None or self.c is None):
            raise ValueError("second-order rate spec needs both eps_target and c")
        return self


class TrialRowModel(BaseModel):
    n: int
    trial: int
    seed: int
    tv: float
    p2_mass: float
    d1_max: float
    pos_part_d1: float


class TailModel(BaseModel):
    threshold: float
    p_hat: float
    stderr: float


class BlockModel(BaseModel):
    n: int
    rate_bits: float
    epsilon_used: float
    median_tv: float
    gamma_delta: float | None
    tv_threshold: float | None
    tv_bound_log2: float | None
    failure_log: float | None
    vacuous: bool | None
    tails: list[TailModel]


class SummaryModel(BaseModel):
    slope: float | None
    slope_stderr: float | None
    excluded_ns: list[int]
    blocks: list[BlockModel]
    paper_notes: list[str]


class SimulateResponse(BaseModel):
    rows: list[TrialRowModel]
    summary: SummaryModel


class GaussianRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    snr: float
    dim: int
    b: int
    noise_var: float = 1.0
    seed: int = 0
    optimize: bool = False
    max_iters: int = 400
    tol: float = 1e-3
    grid_points: int | None = None


class GridModel(BaseModel):
    xs: list[float]
    ys: list[float] | None
    mixture: list[float] | list[list[float]]
    target: list[float] | None


class GaussianResponse(BaseModel):
    tv: float
    seed: int
    optimized: bool
    snr: float
    dim: int
    b: int
    noise_var: float
    codewords: list[list[float]]
    grid: GridModel
    paper_notes: list[str]
