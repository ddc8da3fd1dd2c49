"""End-to-end propagation path: ordered loss elements and cavities.

A Scenario is a source followed by an ordered chain of stages, each either a
plain efficiency (LossElement) or a detuned cavity (CavityStage), read out by
a homodyne detector at a fixed quadrature angle.  Frequency-independent
losses commute and compose multiplicatively; cavities are frequency
dependent and must keep their place in the chain.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import cavity as _cavity
from .quadcore import (
    SpectralCovariance,
    apply_loss,
    apply_loss_cov,
    check_efficiency,
    db_to_variance,
    variance_to_db,
)
from .source import SourceParams, generated_spectrum

CATEGORIES = (
    "escape",
    "mode_matching",
    "isolator_rotator",
    "photodiode",
    "intra_cavity",
    "other",
)

CAVITY_ROLES = ("filter", "src")


@dataclass(frozen=True)
class LossElement:
    """A named, categorized power efficiency in the squeezed-field path."""

    name: str
    eta: float
    category: str = "other"

    def __post_init__(self):
        check_efficiency(self.eta, f"loss element {self.name!r}")
        if self.category not in CATEGORIES:
            raise ValueError(
                f"unknown category {self.category!r}; expected one of {CATEGORIES}"
            )


@dataclass(frozen=True)
class CavityStage:
    """A detuned cavity in the chain, tagged by its role."""

    role: str
    params: _cavity.CavityParams

    def __post_init__(self):
        if self.role not in CAVITY_ROLES:
            raise ValueError(f"cavity role must be one of {CAVITY_ROLES}, got {self.role!r}")
        if self.params.hwhm_hz is None:
            raise ValueError("cavity stages need derived rates (hwhm_hz)")


@dataclass(frozen=True)
class FrequencyGrid:
    fmin_hz: float
    fmax_hz: float
    points: int

    def __post_init__(self):
        if not (self.fmin_hz > 0.0 and self.fmax_hz > self.fmin_hz):
            raise ValueError("need 0 < fmin_hz < fmax_hz")
        if self.points < 2:
            raise ValueError("need at least 2 grid points")

    def frequencies(self):
        return np.linspace(self.fmin_hz, self.fmax_hz, self.points)


@dataclass(frozen=True)
class Scenario:
    """Immutable description of one propagation experiment."""

    name: str
    source: SourceParams
    stages: tuple = ()
    homodyne_angle: float = 0.0
    grid: FrequencyGrid = field(default_factory=lambda: FrequencyGrid(5e6, 15e6, 201))

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        for role in CAVITY_ROLES:
            if sum(1 for s in self.stages if isinstance(s, CavityStage) and s.role == role) > 1:
                raise ValueError(f"at most one {role} cavity stage is allowed")

    def cavity_stage(self, role):
        for s in self.stages:
            if isinstance(s, CavityStage) and s.role == role:
                return s
        return None

    def loss_elements(self):
        return [s for s in self.stages if isinstance(s, LossElement)]


def total_efficiency(elements):
    """Product of element efficiencies; 1.0 for an empty chain."""
    total = 1.0
    for e in elements:
        total *= check_efficiency(e.eta, f"loss element {e.name!r}")
    return total


def propagate(sc, omega_hz):
    """Covariance at the homodyne input for sideband frequency omega_hz.

    Starts from the source spectrum (escape included) and folds the stages
    in chain order.
    """
    if not sc.grid.fmin_hz <= omega_hz <= sc.grid.fmax_hz:
        raise ValueError(
            f"omega_hz {omega_hz!r} outside the scenario grid "
            f"[{sc.grid.fmin_hz!r}, {sc.grid.fmax_hz!r}]"
        )
    s = generated_spectrum(sc.source, omega_hz)
    for stage in sc.stages:
        if isinstance(stage, LossElement):
            s = apply_loss_cov(s, stage.eta)
        else:
            s = _cavity.quadrature_transfer(stage.params, omega_hz).apply(s)
    if not s.is_positive_semidefinite():
        raise RuntimeError(
            f"internal error: propagated covariance lost positivity at {omega_hz} Hz: {s}"
        )
    return s


def homodyne_readout(s, theta):
    """Measured relative variance at quadrature angle theta (0 = amplitude)."""
    c = math.cos(theta)
    sn = math.sin(theta)
    return c * c * s.s11 + sn * sn * s.s22 + 2.0 * c * sn * s.s12.real


def efficiency_sweep(input_db, eta_min, eta_max, n):
    """Observed squeezing versus detection efficiency on a uniform eta grid."""
    if not (0.0 <= eta_min <= eta_max <= 1.0):
        raise ValueError(f"need 0 <= eta_min <= eta_max <= 1, got ({eta_min!r}, {eta_max!r})")
    if n < 2:
        raise ValueError("need at least 2 sweep points")
    v_in = db_to_variance(input_db)
    return [
        (float(eta), variance_to_db(apply_loss(v_in, float(eta))))
        for eta in np.linspace(eta_min, eta_max, n)
    ]


@dataclass(frozen=True)
class BudgetReport:
    """Loss budget of a scenario: per-element rows, category subtotals, totals.

    The escape efficiency of the source appears as the first row; the total
    is the product of all rows (the frequency-independent part of the chain).
    """

    scenario: str
    rows: tuple
    subtotals: tuple  # (category, product) pairs in CATEGORIES order
    total: float
    input_db: float
    output_db: float


def build_budget(sc):
    rows = [LossElement("escape", sc.source.escape(), "escape")]
    rows.extend(sc.loss_elements())
    subtotals = []
    for cat in CATEGORIES:
        members = [r for r in rows if r.category == cat]
        if members:
            subtotals.append((cat, total_efficiency(members)))
    total = total_efficiency(rows)
    input_db = sc.source.generated_db_at_dc()
    output_db = variance_to_db(apply_loss(db_to_variance(input_db), total))
    return BudgetReport(
        scenario=sc.name,
        rows=tuple(rows),
        subtotals=tuple(subtotals),
        total=total,
        input_db=input_db,
        output_db=output_db,
    )
