"""Shared value types: truncation settings, evaluation results, parameter points."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace


def _trunc_scale() -> float:
    """Global multiplier on all cutoffs, from ELLIPTHETA_TRUNC_SCALE."""
    try:
        return float(os.environ.get("ELLIPTHETA_TRUNC_SCALE", "1"))
    except ValueError:
        return 1.0


@dataclass(frozen=True)
class Truncation:
    """Cutoffs and tolerances for series, products and quadrature."""

    product_cutoff: int = 40
    series_cutoff: int = 60
    quad_points: int = 128
    line_radius: float = 30.0
    tol_abs: float = 1e-10
    tol_rel: float = 1e-10
    pinch_tol: float = 1e-6

    def __post_init__(self):
        if min(self.product_cutoff, self.series_cutoff, self.quad_points) < 1:
            raise ValueError("all cutoffs must be >= 1")
        if min(self.line_radius, self.tol_abs, self.tol_rel, self.pinch_tol) <= 0:
            raise ValueError("all tolerances must be > 0")

    def scaled(self) -> "Truncation":
        """Apply the ELLIPTHETA_TRUNC_SCALE environment multiplier."""
        s = _trunc_scale()
        if s == 1.0:
            return self
        return replace(
            self,
            product_cutoff=max(1, int(round(self.product_cutoff * s))),
            series_cutoff=max(1, int(round(self.series_cutoff * s))),
            quad_points=max(1, int(round(self.quad_points * s))),
        )

    def doubled(self) -> "Truncation":
        return replace(
            self,
            product_cutoff=2 * self.product_cutoff,
            series_cutoff=2 * self.series_cutoff,
            quad_points=2 * self.quad_points,
            line_radius=2 * self.line_radius,
        )


DEFAULT_TRUNC = Truncation()


@dataclass
class EvalResult:
    """A complex value plus an upper bound for the discarded truncation tail."""

    value: complex
    err_estimate: float
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.err_estimate < 0:
            raise ValueError("err_estimate must be non-negative")

    def __complex__(self) -> complex:
        return complex(self.value)


class RegimeError(ValueError):
    """A parameter lies outside the half-plane / sign regime an operation needs."""


class DivergenceError(ValueError):
    """A series or product whose terms do not decay at the truncation boundary."""


class PoleError(ValueError):
    """Evaluation requested within pinch_tol of a pole or pole hyperplane."""


class ConsistencyError(ArithmeticError):
    """An exact-arithmetic identity that must hold failed (internal bug guard)."""


@dataclass(frozen=True)
class ModularParams:
    """The parameter point (tau, eta, kappa) with its half-plane regime flags."""

    tau: complex
    eta: complex
    kappa: int

    def __post_init__(self):
        if self.tau.imag <= 0:
            raise RegimeError(f"Im tau must be > 0, got tau={self.tau}")
        if self.kappa < 4:
            raise ValueError(f"kappa must be an integer >= 4, got {self.kappa}")

    @property
    def im_eta_sign(self) -> int:
        return (self.eta.imag > 0) - (self.eta.imag < 0)

    @property
    def im_eta_over_tau_sign(self) -> int:
        r = (self.eta / self.tau).imag
        return (r > 0) - (r < 0)

    @property
    def sigma(self) -> complex:
        """The degenerate second modular parameter -2*eta*kappa."""
        return -2 * self.eta * self.kappa


@dataclass(frozen=True)
class ThetaLevelIndex:
    """Index j mod 2*kappa of the level-kappa theta basis."""

    j: int
    kappa: int

    def __post_init__(self):
        if self.kappa < 1:
            raise ValueError("kappa must be >= 1")
        object.__setattr__(self, "j", self.j % (2 * self.kappa))


@dataclass(frozen=True)
class HTSIndex:
    """Index l (mod 2*kappa) of a hypergeometric theta function."""

    l: int
    kappa: int

    def __post_init__(self):
        if self.kappa < 4:
            raise ValueError("kappa must be >= 4")
        object.__setattr__(self, "l", self.l % (2 * self.kappa))

    @property
    def admissible(self) -> bool:
        return self.l % self.kappa not in (1, self.kappa - 1)
