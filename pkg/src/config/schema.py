"""Validated configuration models for each experiment subcommand."""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GridSpec(_Strict):
    """
    One sweep axis: either explicit values or a min/max/count range.
    """
    values: list[float] | None = None
    min: float | None = Field(default=None, ge=0)
    max: float | None = Field(default=None, ge=0)
    count: int | None = Field(default=None, ge=1)
    scale: Literal["linear", "log"] = "linear"

    @model_validator(mode="after")
    def _check_shape(self) -> GridSpec:
        ranged = (self.min, self.max, self.count)
        if self.values is not None:
            if any(v is not None for v in ranged):
                raise ValueError("give either 'values' or 'min'/'max'/'count', not both")
            if not self.values:
                raise ValueError("'values' must not be empty")
            if any(v < 0 or not np.isfinite(v) for v in self.values):
                raise ValueError("grid values must be finite and non-negative")
            return self

        if any(v is None for v in ranged):
            raise ValueError("a range grid needs 'min', 'max' and 'count'")
        if self.max < self.min:
            raise ValueError(f"'max' ({self.max}) is below 'min' ({self.min})")
        if self.scale == "log" and self.min <= 0:
            raise ValueError("a log grid needs 'min' > 0")
        return self

    def points(self) -> np.ndarray:
        if self.values is not None:
            return np.array(self.values, dtype=float)
        if self.count == 1:
            return np.array([self.min], dtype=float)
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


class Fig12Config(_Strict):
    family: Literal["planar_ring", "sphere_shell"] = "planar_ring"
    B0_tau: list[float] = Field(default_factory=lambda: [0.1, 1.0, 10.0], min_length=1)
    b0_over_B0: GridSpec = GridSpec(min=0.1, max=10.0, count=41, scale="log")
    tau: float = Field(default=1.0, gt=0)
    order: int = Field(default=64, ge=1)
    output: str = "fig12.csv"

    @model_validator(mode="after")
    def _positive_fields(self) -> Fig12Config:
        if any(v <= 0 for v in self.B0_tau):
            raise ValueError("every B0_tau must be positive")
        return self


class Fig3Config(_Strict):
    B0_tau: float = Field(default=0.05, gt=0)
    b0_tau: float = Field(default=0.005, gt=0)
    r: GridSpec = GridSpec(min=0.0, max=1.0, count=11)
    tau: float = Field(default=1.0, gt=0)
    order: int = Field(default=64, ge=1)
    transient_cut: float = Field(default=0.5, gt=0, lt=1)
    output: str = "fig3.csv"

    @model_validator(mode="after")
    def _r_in_range(self) -> Fig3Config:
        if np.any(self.r.points() > 1.0):
            raise ValueError("correlation r must lie in [0, 1]")
        return self


class TransitionConfig(_Strict):
    B0_tau: float = Field(default=0.5, gt=0)
    b0_over_B0: GridSpec = GridSpec(values=[1.0, 3.0, 4.0, 6.0])
    anisotropy: GridSpec = GridSpec(min=0.0, max=1.0, count=21)
    tau: float = Field(default=1.0, gt=0)
    residual_tol: float = Field(default=1e-6, gt=0)
    # Also scan B0 = 0 at the largest b0 of the grid
    zero_field: bool = True
    output: str = "transition.csv"

    @model_validator(mode="after")
    def _anisotropy_in_range(self) -> TransitionConfig:
        if np.any(self.anisotropy.points() > 1.0):
            raise ValueError("anisotropy must lie in [0, 1]")
        return self


class VerifyPoint(_Strict):
    B0_tau: float = Field(ge=0)
    b0_tau: float = Field(ge=0)


class VerifyConfig(_Strict):
    families: list[Literal["planar_ring", "sphere_shell", "planar_anisotropic", "axis_flip", "point"]] = Field(
        default_factory=lambda: ["planar_ring", "sphere_shell", "planar_anisotropic", "axis_flip"], min_length=1,
    )
    points: list[VerifyPoint] = Field(
        default_factory=lambda: [VerifyPoint(B0_tau=0.05, b0_tau=0.005), VerifyPoint(B0_tau=0.5, b0_tau=0.05)],
        min_length=1,
    )
    anisotropy: float = Field(default=0.5, ge=0, le=1)
    # Relative x, y, z flip amplitudes for axis_flip, rescaled to |b| = b0_tau
    axis_weights: tuple[float, float, float] = (1.0, 0.6, 0.4)
    order: int = Field(default=64, ge=1)
    m: int = Field(default=200, ge=1)
    trajectories: int = Field(default=200_000, ge=1)
    n_sigma: float = Field(default=3.0, gt=0)
    correlated_r: float = Field(default=0.5, ge=0, le=1)
    oracle_checks: bool = True
    output: str = "verify.csv"

    @model_validator(mode="after")
    def _check_axis_weights(self) -> VerifyConfig:
        if any(w < 0 or not np.isfinite(w) for w in self.axis_weights) or not any(self.axis_weights):
            raise ValueError("axis_weights must be finite, non-negative and not all zero")
        return self


class SweepConfig(_Strict):
    """Whole config file: globals plus one section per subcommand."""
    seed: int = Field(default=20240601, ge=0)
    threads: int | None = Field(default=None, ge=0)
    debug: bool = False
    fig12: Fig12Config = Fig12Config()
    fig3: Fig3Config = Fig3Config()
    transition: TransitionConfig = TransitionConfig()
    verify: VerifyConfig = VerifyConfig()
