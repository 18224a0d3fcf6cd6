"""A single record holding every tolerance and run parameter."""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class Config:
    """Tolerances and run parameters.

    Section tolerances used by :func:`sigma3.identities.verify_all` are
    multiples of ``identity_tol`` so a single ``--tol`` flag tightens or
    loosens the whole suite consistently.
    """

    # curve / point validation
    root_sep_tol: float = 1e-9
    on_curve_tol: float = 1e-10
    # periods
    quad_tol: float = 1e-10
    sym_tol: float = 1e-8
    max_omega_cond: float = 1e8
    # theta / sigma
    target_tol: float = 1e-16
    trunc_radius: int | None = None
    theta_div_tol: float = 1e-7
    # identity checks
    identity_tol: float = 1e-6
    kiepert_factor: float = 10.0
    taylor_factor: float = 1e3
    limit_factor: float = 100.0
    trials: int = 25
    seed: int = 0
    # files
    cache_dir: str | None = None
    report_path: str | None = None

    def __post_init__(self):
        for name in ("root_sep_tol", "on_curve_tol", "quad_tol", "sym_tol",
                     "target_tol", "theta_div_tol", "identity_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)

    @property
    def kiepert_tol(self) -> float:
        return self.kiepert_factor * self.identity_tol

    @property
    def taylor_tol(self) -> float:
        return self.taylor_factor * self.identity_tol

    @property
    def limit_tol(self) -> float:
        return self.limit_factor * self.identity_tol

    def resolved_cache_dir(self) -> Path | None:
        d = self.cache_dir or os.environ.get("SIGMA3_CACHE_DIR")
        return Path(d) if d else None

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT_CONFIG = Config()
