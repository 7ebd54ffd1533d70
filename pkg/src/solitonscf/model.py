"""Field types and model building blocks: spinor pair, density, self-potential.

The bound state is described by two real radial amplitudes u(x), v(x) with
density rho = u^2 + v^2 normalized to unit total charge. The state generates
its own electrostatic shape function

    phi0(x) = int_x^inf rho(y)/y dy + (1/x) int_0^x rho(y) dy,

the classic shell decomposition: charge outside x acts from its own radius,
charge inside acts from the center. The potential entering the equations is
phi = a * phi0 with coupling a (negative on the physical branch).

On the log grid both pieces are single cumulative trapezoid sweeps:
int rho/y dy has Jacobian-free form int rho dtheta, and int rho dy becomes
int rho e^theta dtheta.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .grid import Grid, _check_values, integrate

__all__ = [
    "SpinorPair",
    "Density",
    "SelfField",
    "density",
    "potential",
    "make_field",
    "trial_functions",
    "boundary_asymptotics",
]


@dataclass
class SpinorPair:
    """Radial amplitudes (u, v) sampled on a grid."""

    u: np.ndarray
    v: np.ndarray

    def normalized(self, grid: Grid) -> "SpinorPair":
        """Scaled copy with unit density integral."""
        n = integrate(self.u**2 + self.v**2, grid)
        s = 1.0 / np.sqrt(n)
        return SpinorPair(self.u * s, self.v * s)


@dataclass
class Density:
    rho: np.ndarray
    norm: float


@dataclass
class SelfField:
    """Self-generated potential: shape phi0 plus the coupling that scales it."""

    phi0: np.ndarray
    a: float

    @property
    def phi(self) -> np.ndarray:
        return self.a * self.phi0


def density(pair: SpinorPair, grid: Grid) -> Density:
    """rho = u^2 + v^2 and its integral over the grid."""
    u = _check_values(pair.u, grid, "density")
    v = _check_values(pair.v, grid, "density")
    rho = u * u + v * v
    return Density(rho=rho, norm=integrate(rho, grid))


def potential(rho: np.ndarray, grid: Grid) -> np.ndarray:
    """Shape function phi0 of the self-potential for a given density.

    Linear in rho. Monotone non-increasing, and equal to (int rho)/x
    wherever the density has already decayed.

    Returns
    -------
    np.ndarray
        phi0 at the grid nodes.
    """
    rho = _check_values(rho, grid, "potential")
    if np.any(rho < 0.0):
        raise ConfigurationError(
            "potential: density must be nonnegative "
            f"(min entry {float(np.min(rho)):g})"
        )
    x = grid.x
    h = grid.h
    # int_x^inf rho/y dy == int_theta^theta_max rho dtheta (backward sweep)
    seg_out = 0.5 * h * (rho[1:] + rho[:-1])
    outer = np.zeros(grid.n_nodes)
    outer[:-1] = np.cumsum(seg_out[::-1])[::-1]
    # int_0^x rho dy == int_theta_min^theta rho e^theta dtheta (forward sweep)
    rx = rho * x
    seg_in = 0.5 * h * (rx[1:] + rx[:-1])
    inner = np.zeros(grid.n_nodes)
    inner[1:] = np.cumsum(seg_in)
    return outer + inner / x


def make_field(pair: SpinorPair, a: float, grid: Grid) -> SelfField:
    """SelfField generated by the pair's own density at coupling a."""
    return SelfField(phi0=potential(density(pair, grid).rho, grid), a=float(a))


def trial_functions(b: float, grid: Grid) -> SpinorPair:
    """Variational seed pair at scale b.

    u = A x (1 + b x) e^{-bx}, v = B x^2 e^{-bx} with amplitudes
    A = sqrt(2/7) b^{3/2}, B = sqrt(2/3) b^{3/2}, which keeps the combination
    7 A^2 + 3 B^2 = 4 b^3 fixed across scales. Unit norm holds at b = 1
    exactly; for other b the norm is (1 + b^2)/(2 b^2), so callers that
    need a normalized state must rescale.
    """
    if not (np.isfinite(b) and b > 0):
        raise ConfigurationError(f"trial scale b must be positive, got {b!r}")
    amp = b ** 1.5
    A = np.sqrt(2.0 / 7.0) * amp
    B = np.sqrt(2.0 / 3.0) * amp
    x = grid.x
    decay = np.exp(-b * x)
    return SpinorPair(u=A * x * (1.0 + b * x) * decay, v=B * x * x * decay)


def boundary_asymptotics(
    x: float,
    k: float,
    phi_origin: float = 0.0,
    end: str = "origin",
    amplitude: float = 1.0,
):
    """Asymptotic (u, v) at one end of the interval.

    The coupled system reads u' = u/x + P v, v' = -v/x + Q u with local
    coefficients P = 1 - k^2 phi, Q = 1 + k^2 phi. Near the origin the
    regular branch is

        u = A x [1 + (P0 Q0 / 6) x^2],   v = A (Q0 / 3) x^2,

    so v/u -> (Q0/3) x with Q0 = 1 + k^2 phi(0). In the far tail the
    decaying branch has u/v -> r(x), the decaying root of the local
    Riccati equation Q r^2 - 2 r/x - P = 0:

        r(x) = (1/x - sqrt(1/x^2 + P Q)) / Q,

    which for a Coulomb-like potential phi ~ a/x expands to
    u/v = -1 + (1 + k^2 a)/x + O(1/x^2); the overall decay rate is
    sqrt(P Q) -> 1, the rest mass, independent of k.

    Parameters
    ----------
    x : float or np.ndarray
        Evaluation point(s).
    k : float
        Frequency parameter.
    phi_origin : float
        Local value of the full potential a * phi0 at the evaluation end
        (at the origin for the origin branch, at x for the tail branch).
    end : {"origin", "tail"}
    amplitude : float
        Overall scale A of the branch.
    """
    x = np.asarray(x, dtype=float)
    p = 1.0 - k * k * phi_origin
    q = 1.0 + k * k * phi_origin
    if end == "origin":
        u = amplitude * x * (1.0 + p * q / 6.0 * x * x)
        v = amplitude * q / 3.0 * x * x
    elif end == "tail":
        s = np.sqrt(p * q)
        r = (1.0 / x - np.sqrt(1.0 / (x * x) + p * q)) / q
        v = -amplitude * np.exp(-s * x)
        u = r * v
    else:
        raise ConfigurationError(f"end must be 'origin' or 'tail', got {end!r}")
    return u, v
