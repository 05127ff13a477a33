# src/data_validation.py

"""
Validated run parameters and report records.

Every value that crosses a module boundary as configuration (integration
settings, CLI runs) or as a result record (estimates, report rows) is a pydantic
model, validated on construction. Field aliases use the CLI spelling so that the
config echo in a report reads like the command line that produced it.
"""

import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SEED_MAX = 2**64 - 1
MIN_MC_SAMPLES = 1_000
MIN_NODES = 32


class IntegrationMethod(str, Enum):
    AUTO = "auto"
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte_carlo"


class IntegrationConfig(BaseModel):
    """Settings for one measure estimate."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    method: IntegrationMethod = IntegrationMethod.AUTO
    samples: int = Field(200_000, ge=MIN_MC_SAMPLES)
    nodes: int = Field(256, ge=MIN_NODES)
    r_nodes: int = Field(32, ge=MIN_NODES, alias="r-nodes")
    seed: int = Field(0, ge=0, le=SEED_MAX)
    r_margin: float = Field(0.25, ge=0.0, alias="r-margin")
    eps_side: float = Field(1e-12, ge=0.0, alias="eps-side")
    chunk_size: int = Field(50_000, ge=MIN_MC_SAMPLES, alias="chunk-size")
    workers: int = Field(1, ge=1)
    canonicalize: bool = True

    @field_validator("r_margin", "eps_side")
    def validate_finite(cls, v):
        if not math.isfinite(v):
            raise ValueError("Value must be finite.")
        return v


class MeasureEstimate(BaseModel):
    """A wall-set measure with its statistical error."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., ge=0.0)
    stderr: float = Field(..., ge=0.0)
    samples: int = Field(..., ge=0)
    method: Literal["quadrature", "monte_carlo"]

    @model_validator(mode="after")
    def check_samples(self):
        exact_zero = self.value == 0.0 and self.stderr == 0.0
        if self.method == "monte_carlo" and self.samples < 1 and not exact_zero:
            raise ValueError("Monte Carlo estimates need at least one sample.")
        if not (math.isfinite(self.value) and math.isfinite(self.stderr)):
            raise ValueError("Estimate must be finite.")
        return self

    @classmethod
    def zero(cls, method: str) -> "MeasureEstimate":
        return cls(value=0.0, stderr=0.0, samples=0, method=method)


DetailValue = Union[bool, int, float, str, None]


class ReportRow(BaseModel):
    """One checked quantity: what was observed, what was expected, and whether it passed."""

    model_config = ConfigDict(frozen=True)

    suite: str
    case: str
    observed: float
    expected: float
    deviation: float
    tolerance: float = Field(..., ge=0.0)
    stderr: float = Field(0.0, ge=0.0)
    passed: bool
    strict_passed: Optional[bool] = None
    method: Optional[str] = None
    samples: Optional[int] = None
    details: Dict[str, DetailValue] = Field(default_factory=dict)

    @field_validator("observed", "expected", "deviation", "tolerance", "stderr")
    def validate_finite(cls, v):
        if not math.isfinite(v):
            raise ValueError("Report values must be finite.")
        return v


class SuiteSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    suite: str
    rows: int
    passed_rows: int
    pass_fraction: float
    strict_failures: int
    passed: bool


Subcommand = Literal["estimate-c", "verify-crofton", "cnk", "sweep-unbounded"]


class RunConfig(BaseModel):
    """A validated CLI invocation."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    subcommand: Subcommand
    n: int = Field(..., ge=2, le=8)
    seed: int = Field(0, ge=0, le=SEED_MAX)
    method: IntegrationMethod = IntegrationMethod.AUTO
    samples: int = Field(200_000, ge=MIN_MC_SAMPLES)
    nodes: int = Field(256, ge=MIN_NODES)
    t_grid: Optional[List[float]] = Field(None, alias="t-grid")
    out: Optional[Path] = None
    format: Literal["json", "csv"] = "json"
    eps_side: float = Field(1e-12, ge=0.0, alias="eps-side")
    r_margin: float = Field(0.25, ge=0.0, alias="r-margin")
    points: int = Field(8, ge=2, le=64)
    configurations: int = Field(200, ge=1)
    hilbert_instances: int = Field(20, ge=1, alias="hilbert-instances")
    triples: int = Field(1000, ge=1)
    pairs: int = Field(10, ge=1)
    transforms: int = Field(10, ge=1)
    t_max: float = Field(300.0, gt=0.0, alias="t-max")
    workers: int = Field(1, ge=1)
    record_timing: bool = Field(False, alias="record-timing")

    @field_validator("t_grid")
    def validate_t_grid(cls, v):
        if v is None:
            return v
        if not v:
            raise ValueError("t-grid must not be empty.")
        if any(not math.isfinite(t) or t <= 0 for t in v):
            raise ValueError("t-grid values must be finite and strictly positive.")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("t-grid must be sorted in strictly increasing order.")
        return v

    def integration_config(self) -> IntegrationConfig:
        return IntegrationConfig(
            method=self.method,
            samples=self.samples,
            nodes=self.nodes,
            seed=self.seed,
            r_margin=self.r_margin,
            eps_side=self.eps_side,
            workers=self.workers,
        )

    def echo(self) -> Dict[str, Any]:
        """Config as written into reports; output path and thread count do not affect results."""
        return self.model_dump(mode="json", by_alias=True, exclude={"out", "workers"})


class Report(BaseModel):
    model_config = ConfigDict(frozen=True)

    version: str
    config: Dict[str, Any]
    rows: List[ReportRow]
    summary: Dict[str, Any]
    runtime: Optional[Dict[str, float]] = None

    def to_payload(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", exclude_none=True)
