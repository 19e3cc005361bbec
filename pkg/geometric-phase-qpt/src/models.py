"""
Pydantic models for model parameters, phase results, scaling fits and sweep configuration
"""

import math
import os
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, FiniteFloat, field_validator, model_validator


class PhaseMethod(str, Enum):
    """How a geometric phase was evaluated"""
    FINITE_SUM = "finite_sum"
    QUADRATURE = "quadrature"
    CLOSED_FORM = "closed_form"
    GRID_EIGENSOLVER = "grid_eigensolver"


class FitKind(str, Enum):
    """Regression model used by the scaling engine"""
    LOG_SIZE = "log_size"
    LOG_DISTANCE = "log_distance"
    POWER_LAW = "power_law"
    LINEAR = "linear"


class ParitySector(str, Enum):
    """Up-spin number parity of an XY ground state; fixes the momentum set"""
    EVEN = "even"
    ODD = "odd"


class CrossingLimit(str, Enum):
    """Value assigned to cos(theta_k) when a mode is exactly gapless"""
    GAMMA_ZERO = "gamma_zero"
    FIELD_ABOVE = "field_above"
    FIELD_BELOW = "field_below"


class ProbeBranch(str, Enum):
    """Branch of the ring state conditioned on the probe qubit"""
    G = "g"
    E = "e"


class ModelKind(str, Enum):
    """Models reachable from the command line"""
    XY = "xy"
    DICKE = "dicke"
    LMG = "lmg"
    PROBE = "probe"


class OutputFormat(str, Enum):
    """Output formats of the sweep command"""
    CSV = "csv"
    JSON = "json"
    SVG = "svg"


class XYParams(BaseModel):
    """Periodic XY chain with an odd number of sites N = 2M + 1"""
    gamma: FiniteFloat
    lam: FiniteFloat = Field(alias="lambda")
    n_sites: int

    class Config:
        frozen = True
        populate_by_name = True
        json_schema_extra = {
            "example": {
                "gamma": 1.0,
                "lambda": 0.5,
                "n_sites": 101
            }
        }

    @field_validator("n_sites")
    @classmethod
    def check_odd_size(cls, value: int) -> int:
        if value < 3 or value % 2 == 0:
            raise ValueError(f"n_sites must be odd and >= 3, got {value}")
        return value

    @property
    def m(self) -> int:
        return (self.n_sites - 1) // 2


class DickeParams(BaseModel):
    """Dicke model: one boson mode coupled to N qubits"""
    omega: float = Field(gt=0)
    delta_atom: float = Field(gt=0)
    coupling: float = Field(ge=0)
    n_qubits: int = Field(ge=1)

    class Config:
        frozen = True
        json_schema_extra = {
            "example": {
                "omega": 1.0,
                "delta_atom": 5.0,
                "coupling": 2.236,
                "n_qubits": 32
            }
        }

    @classmethod
    def from_dimensionless(cls, d_value: float, alpha: float, n_qubits: int,
                           omega: float = 1.0) -> "DickeParams":
        """Build parameters from D = 2Δ/ω and alpha = (λ/λ_c)²"""
        if d_value <= 0 or alpha < 0:
            raise ValueError("D must be positive and alpha non-negative")
        l_value = math.sqrt(2.0 * d_value * alpha)
        return cls(
            omega=omega,
            delta_atom=d_value * omega / 2.0,
            coupling=l_value * omega / (2.0 * math.sqrt(2.0)),
            n_qubits=n_qubits,
        )

    @property
    def lambda_c(self) -> float:
        return math.sqrt(self.omega * self.delta_atom / 2.0)

    @property
    def d_value(self) -> float:
        return 2.0 * self.delta_atom / self.omega

    @property
    def l_value(self) -> float:
        return 2.0 * math.sqrt(2.0) * self.coupling / self.omega

    @property
    def alpha(self) -> float:
        return self.l_value ** 2 / (2.0 * self.d_value)


class LMGParams(BaseModel):
    """Lipkin-Meshkov-Glick model of N spins-1/2 in a field h along z"""
    gamma_lmg: float = Field(ge=0, lt=1)
    field: float = Field(ge=0, allow_inf_nan=False)
    n_spins: int = Field(ge=2)

    class Config:
        frozen = True
        json_schema_extra = {
            "example": {
                "gamma_lmg": 0.0,
                "field": 2.0,
                "n_spins": 200
            }
        }


class ProbeParams(BaseModel):
    """Probe qubit coupled homogeneously to every site of an XY ring

    n_sites=None selects the thermodynamic limit of the ring.
    """
    mu: FiniteFloat
    nu: FiniteFloat
    eta: FiniteFloat
    gamma: FiniteFloat
    lam: FiniteFloat = Field(alias="lambda")
    n_sites: Optional[int] = None

    class Config:
        frozen = True
        populate_by_name = True
        json_schema_extra = {
            "example": {
                "mu": 0.1,
                "nu": 2.0,
                "eta": 0.5,
                "gamma": 1.0,
                "lambda": 0.9,
                "n_sites": 251
            }
        }

    @model_validator(mode="after")
    def check_probe(self) -> "ProbeParams":
        if self.mu == 0.0 and self.nu == 0.0:
            raise ValueError("probe qubit needs mu != 0 or nu != 0")
        if self.n_sites is not None and (self.n_sites < 3 or self.n_sites % 2 == 0):
            raise ValueError(f"n_sites must be odd and >= 3, got {self.n_sites}")
        return self

    @property
    def theta0(self) -> float:
        return math.atan2(self.nu, self.mu)

    @property
    def cos_theta0(self) -> float:
        return self.mu / math.hypot(self.mu, self.nu)

    @property
    def delta_shift(self) -> float:
        if self.n_sites is None:
            return 0.0
        return self.eta * self.cos_theta0 / self.n_sites

    @property
    def gap_shift(self) -> float:
        return math.hypot(self.mu, self.nu) / 2.0

    @property
    def ring(self) -> Optional[XYParams]:
        if self.n_sites is None:
            return None
        return XYParams(gamma=self.gamma, lam=self.lam, n_sites=self.n_sites)


class PhaseResult(BaseModel):
    """A geometric phase with the parameters and method that produced it"""
    beta_g: float
    method: PhaseMethod
    params: Dict[str, Optional[float]]
    scaled: bool = False
    raw_sum: Optional[float] = None
    gapless_modes: int = 0

    class Config:
        json_schema_extra = {
            "example": {
                "beta_g": 4.71238898038469,
                "method": "finite_sum",
                "params": {"gamma": 1.0, "lambda": 0.0, "n_sites": 3},
                "scaled": True,
                "raw_sum": 4.71238898038469,
                "gapless_modes": 0
            }
        }


class ScalingFit(BaseModel):
    """Ordinary least-squares fit of a scaling law"""
    slope: float
    intercept: float
    r_squared: float
    kind: FitKind
    n_points: int

    @property
    def exponent(self) -> float:
        """Power-law exponent for a PowerLaw fit (the negated log-log slope)"""
        return -self.slope


class PeakLocation(BaseModel):
    """Maximum of a curve inside a search bracket"""
    lambda_m: float
    height: float
    bracket: Tuple[float, float]
    n_sites: Optional[int] = None


class GridSpec(BaseModel):
    """Uniform grid for the Born-Oppenheimer oscillator; q_max=None picks the default box"""
    points: int = Field(default=4001, ge=2000)
    q_max: Optional[float] = Field(default=None, gt=0)


class ScalingReport(BaseModel):
    """Finite-size-scaling summary written by the scaling command"""
    model: ModelKind
    gamma: float
    kappa1: Optional[float] = None
    kappa2: Optional[float] = None
    nu: Optional[float] = None
    shift_exponent: Optional[float] = None
    z: Optional[float] = None
    peaks: List[PeakLocation] = []
    fits: Dict[str, ScalingFit] = {}

    class Config:
        json_schema_extra = {
            "example": {
                "model": "xy",
                "gamma": 1.0,
                "kappa1": 0.318,
                "kappa2": -0.318,
                "nu": 1.0,
                "shift_exponent": 1.8,
                "z": 1.0,
                "peaks": [{"lambda_m": 0.99, "height": 1.7, "bracket": [0.5, 1.2], "n_sites": 101}],
                "fits": {}
            }
        }


class CheckResult(BaseModel):
    """One analytic-versus-oracle comparison"""
    name: str
    discrepancy: float
    tolerance: float
    passed: bool
    detail: str = ""


class AxisRange(BaseModel):
    """Inclusive linear axis 'a:b:steps', or a single value"""
    start: float
    stop: float
    steps: int = Field(ge=1)

    @model_validator(mode="after")
    def check_steps(self) -> "AxisRange":
        if self.steps == 1 and self.start != self.stop:
            raise ValueError("a range needs at least 2 steps")
        return self

    @classmethod
    def parse(cls, text) -> "AxisRange":
        """Parse 'a', 'a:b:steps' or a bare number"""
        if isinstance(text, AxisRange):
            return text
        if isinstance(text, (int, float)):
            return cls(start=float(text), stop=float(text), steps=1)
        if isinstance(text, dict):
            return cls(**text)
        parts = str(text).split(":")
        try:
            if len(parts) == 1:
                value = float(parts[0])
                return cls(start=value, stop=value, steps=1)
            if len(parts) == 3:
                steps = int(parts[2])
                if steps < 2:
                    raise ValueError(f"range '{text}' needs at least 2 steps")
                return cls(start=float(parts[0]), stop=float(parts[1]), steps=steps)
        except ValueError as e:
            raise ValueError(f"invalid range '{text}': {e}") from e
        raise ValueError(f"invalid range '{text}', expected a or a:b:steps")

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.steps)


def parse_sizes(value) -> List[Optional[int]]:
    """Parse '21,101,inf' (or a list) into sizes; None is the thermodynamic limit"""
    if isinstance(value, str):
        items = [item.strip() for item in value.split(",") if item.strip()]
    else:
        items = list(value)
    sizes: List[Optional[int]] = []
    for item in items:
        if item is None or (isinstance(item, str) and item.lower() in ("inf", "infinity")):
            sizes.append(None)
        elif isinstance(item, float) and math.isinf(item):
            sizes.append(None)
        else:
            sizes.append(int(item))
    if not sizes:
        raise ValueError("size list is empty")
    return sizes


class SweepConfig(BaseModel):
    """Validated configuration shared by all subcommands"""
    model: ModelKind = ModelKind.XY
    # None picks 1 (xy, probe) or 0 (lmg)
    gamma: Optional[AxisRange] = None
    lambda_range: AxisRange = AxisRange(start=0.0, stop=2.0, steps=201)
    h_range: AxisRange = AxisRange(start=0.0, stop=2.0, steps=200)
    alpha_range: AxisRange = AxisRange(start=0.0, stop=3.0, steps=61)
    dicke_d: AxisRange = AxisRange(start=10.0, stop=10.0, steps=1)
    mu: AxisRange = AxisRange(start=0.1, stop=0.1, steps=1)
    nu: AxisRange = AxisRange(start=2.0, stop=2.0, steps=1)
    eta: AxisRange = AxisRange(start=0.5, stop=0.5, steps=1)
    sizes: List[Optional[int]] = [101]
    out: Optional[Path] = None
    format: OutputFormat = OutputFormat.CSV
    threads: int = Field(default=1, ge=1)
    seed: int = 7
    y: Optional[str] = None
    verbose: bool = False

    class Config:
        json_schema_extra = {
            "example": {
                "model": "xy",
                "gamma": "0:1:11",
                "lambda_range": "0:2:201",
                "sizes": "101,1001,inf",
                "out": "output/xy.csv",
                "format": "csv",
                "threads": 4
            }
        }

    @field_validator("gamma", "lambda_range", "h_range", "alpha_range", "dicke_d",
                     "mu", "nu", "eta", mode="before")
    @classmethod
    def parse_axis(cls, value):
        if value is None:
            return value
        return AxisRange.parse(value)

    @field_validator("sizes", mode="before")
    @classmethod
    def parse_size_list(cls, value):
        return parse_sizes(value)

    @model_validator(mode="after")
    def check_sizes_and_paths(self) -> "SweepConfig":
        if self.gamma is None:
            default = 0.0 if self.model == ModelKind.LMG else 1.0
            self.gamma = AxisRange(start=default, stop=default, steps=1)
        for size in self.sizes:
            if size is None:
                continue
            if self.model in (ModelKind.XY, ModelKind.PROBE) and (size < 3 or size % 2 == 0):
                raise ValueError(f"sizes must be odd and >= 3 for {self.model.value}, got {size}")
            if self.model == ModelKind.LMG and size < 2:
                raise ValueError(f"LMG sizes must be >= 2, got {size}")
            if self.model == ModelKind.DICKE and size < 1:
                raise ValueError(f"Dicke sizes must be >= 1, got {size}")
        if self.out is not None:
            parent = self.out.resolve().parent
            if not parent.is_dir():
                raise ValueError(f"output directory does not exist: {parent}")
            if not os.access(parent, os.W_OK):
                raise ValueError(f"output directory is not writable: {parent}")
        return self
