"""Energy functional pieces and the charge bookkeeping built on them.

For a unit-norm pair the energy splits into a one-body part

    T = int [ (u'v - v'u) - 2uv/x + (u^2 - v^2) ] dx

and the self-interaction

    Pi = int phi0 (u^2 + v^2) dx,

with total E = T + (a/2) Pi at coupling a. Stationarity of E/norm in the
state fixes the coupling at the extremum, a = -T/Pi, which is the anchor the
coupling scan is checked against. The remaining observables are algebraic in
a: rest energy E(0)/m0 = -T a / (2 alpha0), the product of the two charge
units e e0 = 4 pi a, and the mixing parameters delta = a/alpha0 and
C = (alpha0 - a)/(alpha0 + a), tied by delta = (1 - C)/(1 + C).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, UnnormalizedStateError, UnphysicalMixingError
from .grid import Grid, differentiate, integrate
from .model import SpinorPair, density, potential

__all__ = [
    "EnergyReport",
    "kinetic_T",
    "potential_Pi",
    "energy_report",
    "charge_relation",
]

NORM_TOL = 1e-6


@dataclass
class EnergyReport:
    a: float
    T: float
    Pi: float
    a_extremum: float          # -T/Pi, should reproduce a at the solution
    E0_over_m0: float
    e_times_e0: float
    delta: float
    C: float
    localization_radius: float  # <x> of the density


def kinetic_T(pair: SpinorPair, grid: Grid, check_norm: bool = True) -> float:
    """One-body part of the energy functional.

    Expects a unit-norm pair (within 1e-6) unless check_norm is disabled;
    the functional's normalization-sensitive pieces make a silent
    unnormalized evaluation a bug, not a feature.
    """
    dens = density(pair, grid)
    if check_norm and abs(dens.norm - 1.0) > NORM_TOL:
        raise UnnormalizedStateError(dens.norm, NORM_TOL)
    u, v = pair.u, pair.v
    du = differentiate(u, grid)
    dv = differentiate(v, grid)
    integrand = (du * v - dv * u) - 2.0 * u * v / grid.x + (u * u - v * v)
    return integrate(integrand, grid)


def potential_Pi(pair: SpinorPair, grid: Grid, phi0: np.ndarray = None) -> float:
    """Self-interaction integral int phi0 rho dx; phi0 defaults to the
    pair's own potential shape."""
    rho = density(pair, grid).rho
    if phi0 is None:
        phi0 = potential(rho, grid)
    return integrate(phi0 * rho, grid)


def charge_relation(a: float, e0: float = 1.0, alpha0: float = 10.0) -> dict:
    """Charge observables at coupling a.

    Parameters
    ----------
    a : float
        Coupling of the self-potential (negative on the physical branch).
    e0 : float
        Positive unit in which the second charge is measured; e = 4 pi a / e0.
    alpha0 : float
        Mixing scale; |a| < alpha0 required for meaningful delta, C.

    Returns
    -------
    dict with e_times_e0, e, delta, C.
    """
    if not (np.isfinite(e0) and e0 > 0):
        raise ConfigurationError(f"e0 must be a positive number, got {e0!r}")
    if not np.isfinite(a):
        raise ConfigurationError(f"coupling a must be finite, got {a!r}")
    if abs(a) >= alpha0:
        raise UnphysicalMixingError(
            f"|a| = {abs(a):g} >= alpha0 = {alpha0:g}: mixing parameters undefined"
        )
    e_e0 = 4.0 * np.pi * a
    C = (alpha0 - a) / (alpha0 + a)
    return {
        "e_times_e0": e_e0,
        "e": e_e0 / e0,
        "delta": a / alpha0,
        "C": C,
    }


def energy_report(
    pair: SpinorPair, grid: Grid, a: float, alpha0: float = 10.0
) -> EnergyReport:
    """Evaluate every derived quantity of a (converged) unit-norm state."""
    T = kinetic_T(pair, grid)
    Pi = potential_Pi(pair, grid)
    charges = charge_relation(a, alpha0=alpha0)
    dens = density(pair, grid)
    return EnergyReport(
        a=float(a),
        T=T,
        Pi=Pi,
        a_extremum=-T / Pi,
        E0_over_m0=-T * a / (2.0 * alpha0),
        e_times_e0=charges["e_times_e0"],
        delta=charges["delta"],
        C=charges["C"],
        localization_radius=integrate(grid.x * dens.rho, grid) / dens.norm,
    )
