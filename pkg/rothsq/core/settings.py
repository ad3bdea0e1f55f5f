"""
rothsq Settings - Runtime Configuration

Values come from (in order of precedence) explicit CLI flags, ROTHSQ_*
environment variables and a local .env file.
"""

from typing import Optional

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables
load_dotenv()


class Settings(BaseSettings):
    """Global knobs shared by every experiment"""

    model_config = SettingsConfigDict(
        env_prefix="ROTHSQ_",
        env_file=".env",
        extra="ignore",
    )

    output_dir: str = Field("artifacts", description="Default directory for reports")
    int_bits: int = Field(128, description="Exact-integer width guarded by compute_W")
    tau: float = Field(0.01, description="Major arc exponent")
    grid_factor: int = Field(16, description="Frequency grid points per unit of N")
    check_constant: float = Field(0.1, description="Constant in the delta^2 N_b check")
    spectrum_eps: float = Field(0.5, description="Epsilon in the delta^(4+eps) fit")
    float_tol: float = Field(1e-9, description="Tolerance for floating identities")
    node_budget: int = Field(2_000_000, description="Node cap for colouring search")
    time_budget: float = Field(60.0, description="Wall-clock cap (seconds) for colouring search")
    threads: Optional[int] = Field(None, description="Worker cap; None means cpu count")
    log_level: str = Field("INFO", description="Root logging level")

    @field_validator("int_bits", "grid_factor", "node_budget")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be positive")
        return value


settings = Settings()
