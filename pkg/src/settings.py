"""
Runtime configuration.
Values come from ECTFF_* environment variables or a local .env file; CLI flags override them.
"""
from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="ECTFF_", env_file=".env", extra="ignore")

    catalog: Optional[Path] = Field(None, description="Alternate catalog JSON file")
    tol: float = Field(1e-9, gt=0, description="Verification tolerance, scaled by max(1, |Phi|^2)")
    tol_orth: float = Field(1e-10, gt=0, description="Column orthonormality tolerance")
    tol_real: float = Field(1e-10, gt=0, description="Imaginary parts below this count as zero")
    window: int = Field(16, ge=0, description="Default orbit window width")
    orbit_cap: int = Field(64, ge=4, description="Step cap for orbit walks")
    group_cap: int = Field(4096, ge=1, description="Largest group order accepted")
    search_cap: int = Field(64, ge=1, description="Largest group order for difference family search")
    rule_depth: int = Field(8, ge=1, description="Recursion depth for catalog decompositions")
    hadamard_bound: int = Field(1024, ge=4, description="Hadamard orders are tabulated up to this bound")
    progress: bool = Field(False, description="Show tqdm progress bars on stderr")
    log_level: str = Field("WARNING", description="Logging level used by the CLI")


@lru_cache()
def get_settings() -> Settings:
    return Settings()
