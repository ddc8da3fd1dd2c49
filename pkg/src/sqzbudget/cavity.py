"""Single-ended detuned optical cavity and its two-photon quadrature transfer.

Conventions
-----------
Positive ``detuning_hz`` places the cavity resonance at +detuning relative to
the carrier, so the upper sideband at omega = +detuning is resonant.  The
reflection coefficient uses the single-resonance (Lorentzian) input-output
relation

    r(omega) = 2*kappa_in / (kappa_tot - i*2*pi*(omega - detuning)) - 1

with kappa_tot = 2*pi*hwhm_hz and kappa_in/kappa_tot = t_in/(t_in + loss_rt),
i.e. the Lorentzian half width is pinned to the hwhm derived from the mirror
finesse.  This drops the free-spectral-range periodicity of the full Airy
response, which is a good approximation while |omega - detuning| stays well
below the FSR; :func:`reflection` warns once past fsr/4.

A detuned cavity treats the two sidebands of a quadrature pair differently.
In the two-photon picture the quadrature-domain transfer at sideband
frequency omega is

    T = Lam @ diag(r(+omega), conj(r(-omega))) @ Lam^-1
    Lam = [[1, 1], [-1j, 1j]] / sqrt(2)

For a lossless cavity T is (up to a global phase) a rotation of the squeezing
ellipse; with round-trip loss the missing power is refilled with vacuum via
N = I - T @ T^dagger, and covariances propagate as S' = T S T^dagger + N.
"""

import cmath
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
import scipy.constants

from .quadcore import SpectralCovariance, UnphysicalError

SPEED_OF_LIGHT = scipy.constants.c

_LAMBDA = np.array([[1.0, 1.0], [-1j, 1j]]) / math.sqrt(2.0)
_LAMBDA_INV = _LAMBDA.conj().T  # unitary


@dataclass(frozen=True)
class CavityParams:
    """Physical description of a single-ended cavity.

    ``t_in`` is the input-coupler power transmission, ``loss_rt`` the
    round-trip power loss through all other channels.  ``fsr_hz`` and
    ``hwhm_hz`` are derived from the geometry by :func:`derive_rates`
    unless given directly (a cavity may be specified by hwhm alone).
    """

    t_in: float | None = None
    loss_rt: float = 0.0
    detuning_hz: float = 0.0
    length_m: float | None = None
    fsr_hz: float | None = None
    hwhm_hz: float | None = None

    def __post_init__(self):
        if self.t_in is not None and not 0.0 <= self.t_in <= 1.0:
            raise UnphysicalError(f"t_in must lie in [0, 1], got {self.t_in!r}")
        if not 0.0 <= self.loss_rt < 1.0:
            raise UnphysicalError(f"loss_rt must lie in [0, 1), got {self.loss_rt!r}")
        if self.t_in is not None and self.t_in + self.loss_rt >= 1.0:
            raise UnphysicalError("total round-trip power removal t_in + loss_rt must be < 1")
        for label, value in (("length_m", self.length_m), ("fsr_hz", self.fsr_hz),
                             ("hwhm_hz", self.hwhm_hz)):
            if value is not None and value <= 0.0:
                raise UnphysicalError(f"{label} must be positive, got {value!r}")


def finesse(t_in, loss_rt=0.0):
    """Finesse of a two-mirror resonator with couplings t_in and loss_rt."""
    if t_in <= 0.0:
        raise UnphysicalError("t_in = 0 leaves the cavity uncoupled")
    r1 = math.sqrt(1.0 - t_in)
    r2 = math.sqrt(1.0 - loss_rt)
    return math.pi * math.sqrt(r1 * r2) / (1.0 - r1 * r2)


def derive_rates(p):
    """Complete a CavityParams with fsr_hz and hwhm_hz.

    fsr = c/(2L); hwhm = fsr/(2*finesse).  A directly specified hwhm_hz is
    kept as-is (explicit configuration wins over geometry).
    """
    fsr = p.fsr_hz
    if fsr is None and p.length_m is not None:
        fsr = SPEED_OF_LIGHT / (2.0 * p.length_m)
    if p.hwhm_hz is not None:
        return replace(p, fsr_hz=fsr)
    if fsr is None or p.t_in is None:
        raise ValueError("need length_m (or fsr_hz) and t_in to derive cavity rates")
    hwhm = fsr / (2.0 * finesse(p.t_in, p.loss_rt))
    return replace(p, fsr_hz=fsr, hwhm_hz=hwhm)


def _coupling(p):
    """Fraction of the total decay rate that goes through the input coupler."""
    if p.loss_rt == 0.0:
        return 1.0
    if p.t_in is None:
        raise ValueError("a lossy cavity needs t_in to fix the coupling ratio")
    return p.t_in / (p.t_in + p.loss_rt)


def reflection(p, omega_hz):
    """Complex amplitude reflectivity at signed sideband frequency omega_hz."""
    if p.hwhm_hz is None:
        raise ValueError("cavity rates not derived; call derive_rates first")
    delta = omega_hz - p.detuning_hz
    if p.fsr_hz is not None and abs(delta) >= p.fsr_hz / 4.0:
        warnings.warn(
            "sideband offset beyond fsr/4; single-resonance approximation degrades",
            stacklevel=2,
        )
    x = delta / p.hwhm_hz
    return 2.0 * _coupling(p) / (1.0 - 1j * x) - 1.0


@dataclass(frozen=True)
class TransferPair:
    """Quadrature transfer matrix T and vacuum-fill matrix N = I - T T^dagger."""

    t: np.ndarray
    n: np.ndarray

    def apply(self, s):
        """Propagate a covariance: S' = T S T^dagger + N."""
        m = self.t @ s.matrix() @ self.t.conj().T + self.n
        # hermitize away rounding noise before rebuilding
        return SpectralCovariance(
            m[0, 0].real, m[1, 1].real, complex(0.5 * (m[0, 1] + np.conj(m[1, 0])))
        )


def quadrature_transfer(p, omega_hz):
    """Two-photon transfer pair (T, N) at positive sideband frequency omega_hz."""
    if omega_hz <= 0.0:
        raise ValueError(f"sideband frequency must be positive, got {omega_hz!r}")
    d = np.array(
        [[reflection(p, omega_hz), 0.0], [0.0, np.conj(reflection(p, -omega_hz))]]
    )
    t = _LAMBDA @ d @ _LAMBDA_INV
    n = np.eye(2) - t @ t.conj().T
    return TransferPair(t, n)


def rotation_angle(p, omega_hz):
    """Squeezing-ellipse rotation of a lossless cavity at sideband omega_hz.

    alpha(omega) = (arg r(+omega) + arg r(-omega)) / 2.  Each principal arg of
    the single-resonance Lorentzian stays inside (-pi, pi), so the sum is
    already continuous in omega.  Refused for a lossy cavity, where the
    transfer is not a pure rotation and an angle alone under-describes it.
    """
    if omega_hz <= 0.0:
        raise ValueError(f"sideband frequency must be positive, got {omega_hz!r}")
    if p.loss_rt != 0.0:
        raise ValueError("rotation_angle is only defined for a lossless cavity")
    return 0.5 * (cmath.phase(reflection(p, omega_hz)) + cmath.phase(reflection(p, -omega_hz)))
