"""Configuration models shared by the discretization, eigensolver and claims layers"""
from enum import Enum
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class BoundaryCondition(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


class Numerics(BaseModel):
    """Grid and tolerance bundle for one spectral computation"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(default=4000, ge=3, description="Interior grid points per mode")
    T: Optional[float] = Field(default=None, gt=0, allow_inf_nan=False, description="Truncation half-width; metric default when unset")
    bc: Literal["auto", "dirichlet", "neumann"] = "auto"
    eigen_abs_tol: float = Field(default=1e-8, gt=0, allow_inf_nan=False)
    quad_rel_tol: float = Field(default=1e-10, gt=0, le=1e-2)
    extra_modes: int = Field(default=0, ge=0, description="Modes solved past the cutoff")
    k_max: Optional[int] = Field(default=None, ge=0, description="Last mode; required when alpha < 0")
    workers: int = Field(default=1, ge=1)

    def bc_override(self) -> Optional[BoundaryCondition]:
        return None if self.bc == "auto" else BoundaryCondition(self.bc)
