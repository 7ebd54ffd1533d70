"""Relativistic dispersion of the moving bound state, in closed form.

A state of rest energy E0 boosted to momentum P carries energy
E = sqrt(E0^2 + P^2); the negative branch mirrors it. The moving state is
a superposition of the rest-frame state and its charge conjugate, with
mixing coefficients on the electron branch

    L = P / D,   K = (E_e - E0) / D,   D = sqrt(P^2 + (E_e - E0)^2),

normalized so L^2 + K^2 = 1. The difference E_e - E0 is evaluated as
P^2 / (E_e + E0), which is exact and avoids the cancellation that makes
the naive difference lose digits for P << E0. The orthogonal combination
is L1 = -K, K1 = L, and the negative-energy branch carries

    Lp = P / Dp,   Kp = -(E_e + E0) / Dp,   Dp = sqrt(P^2 + (E_e + E0)^2).

The group velocity dE/dP = P / sqrt(E0^2 + P^2) stays below one for any
momentum, with the rest energy playing the role of the inertial mass.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import ConfigurationError, UnphysicalMixingError

__all__ = [
    "DispersionPoint",
    "spectrum",
    "mixing_coefficients",
    "group_velocity",
    "dispersion_table",
]


@dataclass
class DispersionPoint:
    """One momentum sample of the dispersion curve."""

    P: float
    E_electron: float
    E_positron: float
    L: float
    K: float
    velocity: float


def _check_inputs(E0: float, P: float, require_positive_E0: bool) -> Tuple[float, float]:
    E0 = float(E0)
    P = float(P)
    if not (np.isfinite(E0) and np.isfinite(P)):
        raise ConfigurationError(f"E0 and P must be finite, got ({E0!r}, {P!r})")
    if E0 < 0 or P < 0:
        raise ConfigurationError(
            f"E0 and P must be non-negative, got ({E0!r}, {P!r})"
        )
    if require_positive_E0 and E0 == 0.0 and P == 0.0:
        raise UnphysicalMixingError(
            "mixing coefficients are undefined at E0 = P = 0"
        )
    return E0, P


def spectrum(E0: float, P: float) -> Tuple[float, float]:
    """Energies of the two branches at momentum P: (+sqrt, -sqrt)."""
    E0, P = _check_inputs(E0, P, require_positive_E0=False)
    e = float(np.hypot(E0, P))
    return e, -e


def mixing_coefficients(E0: float, P: float):
    """Mixing amplitudes (L, K, L1, K1, Lp, Kp) of the moving state.

    L, K mix the electron branch; (L1, K1) = (-K, L) is its orthogonal
    partner; Lp, Kp mix the negative-energy branch. At P = 0 the state is
    pure: (L, K) = (1, 0) and (Lp, Kp) = (0, -1).
    """
    E0, P = _check_inputs(E0, P, require_positive_E0=True)
    e_e = float(np.hypot(E0, P))
    if P == 0.0:
        L, K = 1.0, 0.0
    else:
        q = P * P / (e_e + E0)  # E_e - E0 without cancellation
        d = float(np.hypot(P, q))
        L, K = P / d, q / d
    s = e_e + E0
    dp = float(np.hypot(P, s))
    Lp, Kp = P / dp, -s / dp
    return L, K, -K, L, Lp, Kp


def group_velocity(E0: float, P: float) -> float:
    """dE/dP on the positive branch; magnitude below one for finite E0 > 0."""
    E0, P = _check_inputs(E0, P, require_positive_E0=False)
    if E0 <= 0.0:
        raise ConfigurationError(
            f"group velocity needs a positive rest energy, got E0 = {E0!r}"
        )
    return P / float(np.hypot(E0, P))


def dispersion_table(E0: float, momenta: Sequence[float]) -> list:
    """DispersionPoint rows for each momentum, ready for tabulation."""
    rows = []
    for P in momenta:
        e_e, e_p = spectrum(E0, P)
        L, K, *_ = mixing_coefficients(E0, P)
        rows.append(
            DispersionPoint(
                P=float(P),
                E_electron=e_e,
                E_positron=e_p,
                L=L,
                K=K,
                velocity=group_velocity(E0, P),
            )
        )
    return rows
