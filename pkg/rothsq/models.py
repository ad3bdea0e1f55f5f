"""
Pydantic models for experiment configuration and reports
"""

from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .core.counting import Equation, SubspaceFamily
from .core.settings import settings

COMMANDS = ("wparams", "majorant", "decay", "gauss", "count", "ktrivial", "moments", "spectrum", "rado", "pipeline")
RANDOMIZED = ("moments",)

Entry = Union[int, str]


# Equation Models
class EquationSpec(BaseModel):
    """{"c": [...], "forms": [[...]]} with optional multi-form members or a named family"""
    model_config = ConfigDict(extra="forbid")

    c: List[int] = Field(..., description="Nonzero integer coefficients c_1..c_s")
    forms: Optional[List[List[Entry]]] = Field(None, description="Rational forms d, one subspace each")
    members: Optional[List[List[List[Entry]]]] = Field(None, description="Subspaces cut out by several forms")
    family: Optional[Literal["diagonal", "pairs_equal"]] = Field(None, description="Named subspace family")

    @field_validator("c")
    @classmethod
    def _nonzero(cls, value: List[int]) -> List[int]:
        if len(value) < 2:
            raise ValueError("need at least two coefficients")
        if any(c == 0 for c in value):
            raise ValueError("coefficients must be nonzero")
        return value

    @model_validator(mode="after")
    def _one_family(self) -> "EquationSpec":
        given = [name for name in ("forms", "members", "family") if getattr(self, name) is not None]
        if len(given) > 1:
            raise ValueError(f"give at most one of forms, members, family (got {', '.join(given)})")
        return self

    def equation(self) -> Equation:
        return Equation(tuple(self.c))

    def subspaces(self) -> Optional[SubspaceFamily]:
        eq = self.equation()
        if self.family == "diagonal":
            return SubspaceFamily.diagonal(eq)
        if self.family == "pairs_equal":
            return SubspaceFamily.pairs_equal(eq)
        if self.forms is not None:
            return SubspaceFamily.from_forms(eq, [[Fraction(v) for v in d] for d in self.forms])
        if self.members is not None:
            members = tuple(tuple(tuple(Fraction(v) for v in d) for d in member) for member in self.members)
            return SubspaceFamily(eq, members)
        return None


# Run Models
class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    command: Literal[COMMANDS] = Field(..., description="Experiment to run")  # type: ignore[valid-type]
    X: int = Field(1000, description="Range [1, X] of the squares under study")
    w: Optional[int] = Field(None, description="Smoothness cutoff; default max(3, sqrt(log X))")
    b1: int = Field(1, description="w-smooth multiplier with b1^2 <= X")
    b2: Optional[int] = Field(None, description="Residue with -b2 a square mod W; default W - 1")
    tau: float = Field(default_factory=lambda: settings.tau, description="Major arc exponent")
    p: float = Field(5.0, description="Moment exponent")
    k: int = Field(2, description="Half the order of the exact even moment")
    delta: float = Field(0.2, description="Large-spectrum threshold")
    density: float = Field(1.0, description="A = [1, density * X] for the pipeline")
    set_source: Literal["interval", "greedy"] = Field("interval", description="How the pipeline builds A")
    seed: Optional[int] = Field(None, description="Seed for randomized commands")
    trials: int = Field(20, description="Sampled functions for the restriction ratio")
    source: Literal["interval", "majorant"] = Field("interval", description="Weights for the count command")
    equation: Optional[EquationSpec] = Field(None, description="Equation and subspace family")
    r: int = Field(1, description="Number of colours")
    n_max: int = Field(100, description="Largest n examined by the Rado search")
    qmax: int = Field(200, description="Largest modulus in the Gauss-sum table")
    grid_factor: int = Field(default_factory=lambda: settings.grid_factor, description="Frequency grid points per unit of N")
    format: Literal["json", "csv"] = Field("json", description="Output format")
    output: Optional[str] = Field(None, description="Output directory")
    threads: Optional[int] = Field(None, description="Worker cap")

    @field_validator("X", "k", "trials", "r", "n_max", "qmax", "b1")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be positive")
        return value

    @field_validator("w")
    @classmethod
    def _cutoff(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 2:
            raise ValueError("smoothness cutoff must be at least 2")
        return value

    @field_validator("tau")
    @classmethod
    def _tau(cls, value: float) -> float:
        if not 0 < value < 0.5:
            raise ValueError("must lie in (0, 1/2)")
        return value

    @field_validator("p")
    @classmethod
    def _exponent(cls, value: float) -> float:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @field_validator("delta")
    @classmethod
    def _threshold(cls, value: float) -> float:
        if not 0 < value < 1:
            raise ValueError("must lie in (0, 1)")
        return value

    @field_validator("density")
    @classmethod
    def _density(cls, value: float) -> float:
        if not 0 < value <= 1:
            raise ValueError("must lie in (0, 1]")
        return value

    @field_validator("grid_factor")
    @classmethod
    def _grid(cls, value: int) -> int:
        if value < 8:
            raise ValueError("must be at least 8")
        return value

    @field_validator("threads")
    @classmethod
    def _threads(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 1:
            raise ValueError("must be positive")
        return value

    @model_validator(mode="after")
    def _requirements(self) -> "RunConfig":
        randomized = self.command in RANDOMIZED or (self.command == "pipeline" and self.set_source == "greedy")
        if randomized and self.seed is None:
            raise ValueError(f"command {self.command} is randomized and needs a seed")
        if self.command in ("count", "ktrivial", "rado", "pipeline") and self.equation is None:
            raise ValueError(f"command {self.command} needs an equation")
        return self


class RunReport(BaseModel):
    command: str
    config: Dict[str, Any]
    result: Dict[str, Any]
