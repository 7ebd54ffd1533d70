"""Self-consistent bound-state solver with an embedded frequency eigenvalue.

The physical problem is the coupled radial system

    du/dx - u/x - (1 - phi) v = 0,
    dv/dx + v/x - (1 + phi) u = 0,       phi = a * phi0[rho],

with rho = u^2 + v^2 normalized to one and phi0 the self-generated potential
shape (see ``model``). A normalizable solution exists only at discrete
couplings, so the system is embedded in a one-parameter family

    P(k) = 1 - k^2 phi,   Q(k) = 1 + k^2 phi,

where the squared frequency k^2 multiplies the coupling. At k = 1 the family
reduces to the physical system; away from it, k^2 a plays the role of an
effective coupling, so the family is solvable for every a on the attractive
branch and k(a) is a smooth monotone function whose root k = 1 marks the
self-consistent coupling a0. The tail mass sqrt(P Q) -> 1 is independent of
k, which keeps the spatial scale fixed along the embedding.

One iteration freezes phi at the current density, solves the linearized
boundary value problem for the corrections (psi, psi1) at fixed k and for
the frequency sensitivities (psi_mu, psi1_mu), picks the frequency increment
mu that restores the norm constraint to first order, then applies

    u <- A [u + tau (psi + mu psi_mu)],   v likewise,   k <- k + mu,

with A the renormalization amplitude. The fields are damped by tau; the
frequency moves by the full mu. Because the frozen-phi system is linear and
homogeneous in (u, v), the fixed-k correction is always psi = -u, psi1 = -v
(the linear solve reproduces minus the state), so all real motion is carried
by the mu terms; the identity is kept as a cheap internal consistency check.

Discretization: midpoint (box) scheme on the uniform theta = ln x grid,
coupling each interval's endpoints, plus one boundary row per end. At the
origin the regular branch gives v = c0 x u with c0 = (1 + k^2 phi(0))/3; at
the outer end u = r v with r the decaying root of the local Riccati equation
Q r^2 - 2 r/x - P = 0, which absorbs the slow Coulomb tail of phi. Unknowns
interleave as (u_0, v_0, u_1, v_1, ...), making the matrix pentadiagonal,
solved banded with two right-hand sides (state residual and k-derivative).
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import solve_banded

from .errors import (
    ConfigurationError,
    DegenerateLinearizationError,
    DivergenceError,
    NonConvergenceError,
    StalledUpdateError,
    StepRejectedError,
    WrongBranchError,
)
from .grid import Grid, integrate
from .model import SelfField, SpinorPair, density, make_field, trial_functions

__all__ = [
    "SolverConfig",
    "IterationState",
    "CorrectionSet",
    "ode_residual",
    "solve_corrections",
    "mu_update",
    "newton_step",
    "solve_fixed_a",
    "count_nodes",
]

_K_FLOOR = 0.05
_MU_DENOM_TOL = 1e-14


@dataclass
class SolverConfig:
    """Iteration controls.

    tau damps the field update; the frequency update is always the full mu.
    Convergence requires both the residual norm and |mu| below tol_residual.
    tol_norm bounds the norm drift tolerated between renormalizations.
    """

    tau: float = 0.5
    tol_residual: float = 1e-8
    tol_norm: float = 1e-10
    max_iterations: int = 200

    def validate(self) -> "SolverConfig":
        if not (0.0 < self.tau <= 1.0):
            raise ConfigurationError(f"tau must be in (0, 1], got {self.tau!r}")
        if self.tol_residual <= 0 or self.tol_norm <= 0:
            raise ConfigurationError("tolerances must be positive")
        if self.max_iterations < 1:
            raise ConfigurationError(
                f"max_iterations must be >= 1, got {self.max_iterations}"
            )
        return self


@dataclass
class IterationState:
    """Complete iterate: fields, frequency, frozen potential, diagnostics."""

    pair: SpinorPair
    k: float
    field: SelfField
    a: float
    residual_norm: float
    norm_error: float
    iteration: int = 0
    last_mu: float = float("nan")
    trace: list = field(default_factory=list, repr=False)


@dataclass
class CorrectionSet:
    """Linearized corrections at frozen potential.

    (psi, psi1) solve the boundary value problem driven by the state
    residual at fixed k; (psi_mu, psi1_mu) are driven by the k-derivative
    of the operator. mu and a_norm are filled in by mu_update/newton_step.
    """

    psi: np.ndarray
    psi1: np.ndarray
    psi_mu: np.ndarray
    psi1_mu: np.ndarray
    mu: Optional[float] = None
    a_norm: Optional[float] = None


def _coefficients(k: float, phi: np.ndarray):
    """P, Q and their k-derivatives at given potential samples."""
    kk = k * k
    p = 1.0 - kk * phi
    q = 1.0 + kk * phi
    dp = -2.0 * k * phi
    dq = 2.0 * k * phi
    return p, q, dp, dq


def _origin_row(k: float, phi0_origin: float):
    """Slope c0 of v = c0 x u at the origin and its k-derivative."""
    c0 = (1.0 + k * k * phi0_origin) / 3.0
    dc0 = 2.0 * k * phi0_origin / 3.0
    return c0, dc0


def _tail_row(k: float, phi_end: float, x_end: float):
    """Decaying Riccati root r = u/v at the outer edge and its k-derivative."""
    p, q, dp, dq = _coefficients(k, np.asarray(phi_end))
    s = np.sqrt(1.0 / (x_end * x_end) + p * q)
    r = (1.0 / x_end - s) / q
    ds = (p * dq + q * dp) / (2.0 * s)
    dr = -ds / q - (1.0 / x_end - s) * dq / (q * q)
    return float(r), float(dr)


def ode_residual(state: IterationState, grid: Grid):
    """Midpoint residuals of both equations on each interval.

    Returns (r_u, r_v), each of length n_nodes - 1: the first equation's
    residual du/dx - u/x - P v and the second's dv/dx + v/x - Q u, evaluated
    at interval midpoints with the potential frozen at state.field.
    """
    x = grid.x
    h = grid.h
    u, v = state.pair.u, state.pair.v
    phi = state.field.phi
    p, q, _, _ = _coefficients(state.k, 0.5 * (phi[1:] + phi[:-1]))
    # Interval midpoints in theta; x there is the geometric mean of the nodes.
    xm = np.sqrt(x[1:] * x[:-1])
    um = 0.5 * (u[1:] + u[:-1])
    vm = 0.5 * (v[1:] + v[:-1])
    # d/dx = e^{-theta} d/dtheta, with the Jacobian taken at the midpoint
    du = (u[1:] - u[:-1]) / (h * xm)
    dv = (v[1:] - v[:-1]) / (h * xm)
    r_u = du - um / xm - p * vm
    r_v = dv + vm / xm - q * um
    return r_u, r_v


def residual_norm(state: IterationState, grid: Grid) -> float:
    """Max-norm over both midpoint residual profiles."""
    r_u, r_v = ode_residual(state, grid)
    return float(max(np.max(np.abs(r_u)), np.max(np.abs(r_v))))


def solve_corrections(state: IterationState, grid: Grid) -> CorrectionSet:
    """Solve the linearized boundary value problem for both correction pairs.

    A single pentadiagonal matrix (the box-scheme Jacobian at frozen
    potential and current k) is factored against two right-hand sides:
    minus the state residual, giving (psi, psi1), and the k-derivative of
    the operator applied to the state, giving (psi_mu, psi1_mu).
    """
    x = grid.x
    h = grid.h
    n = grid.n_nodes
    m = 2 * n
    u, v = state.pair.u, state.pair.v
    phi = state.field.phi
    phi_m = 0.5 * (phi[1:] + phi[:-1])
    p, q, dp, dq = _coefficients(state.k, phi_m)
    xm = np.sqrt(x[1:] * x[:-1])
    hx = h * xm

    # Box rows for interval i couple (u_i, v_i, u_{i+1}, v_{i+1}); unknowns
    # interleave as (u_0, v_0, u_1, v_1, ...), so the matrix is banded with
    # two sub- and two superdiagonals.
    g_a = 0.5 * hx * p
    g_b = 0.5 * hx * q
    ab = np.zeros((5, m))
    # first equation, row 2i+1: -(1 + h/2) u_i - g_a v_i + (1 - h/2) u_{i+1}
    #                           - g_a v_{i+1}
    ab[3, 0 : m - 3 : 2] = -1.0 - 0.5 * h
    ab[2, 1 : m - 2 : 2] = -g_a
    ab[1, 2 : m - 1 : 2] = 1.0 - 0.5 * h
    ab[0, 3::2] = -g_a
    # second equation, row 2i+2: -g_b u_i + (-1 + h/2) v_i - g_b u_{i+1}
    #                            + (1 + h/2) v_{i+1}
    ab[4, 0 : m - 3 : 2] = -g_b
    ab[3, 1 : m - 2 : 2] = -1.0 + 0.5 * h
    ab[2, 2 : m - 1 : 2] = -g_b
    ab[1, 3::2] = 1.0 + 0.5 * h

    # Boundary rows: origin slope in row 0, outer Riccati ratio in row m-1.
    c0, dc0 = _origin_row(state.k, phi[0])
    r_end, dr_end = _tail_row(state.k, phi[-1], x[-1])
    ab[2, 0] = -c0 * x[0]
    ab[1, 1] = 1.0
    ab[3, m - 2] = 1.0
    ab[2, m - 1] = -r_end

    rhs = np.zeros((m, 2))
    r_u, r_v = ode_residual(state, grid)
    rhs[1:-1:2, 0] = -hx * r_u
    rhs[2:-1:2, 0] = -hx * r_v
    rhs[0, 0] = -(v[0] - c0 * x[0] * u[0])
    rhs[-1, 0] = -(u[-1] - r_end * v[-1])
    # k-derivative drive: the operator's k-derivative applied to the state,
    # with the sign such that psi_mu solves J psi_mu = -(dF/dk).
    um = 0.5 * (u[1:] + u[:-1])
    vm = 0.5 * (v[1:] + v[:-1])
    rhs[1:-1:2, 1] = hx * dp * vm
    rhs[2:-1:2, 1] = hx * dq * um
    rhs[0, 1] = dc0 * x[0] * u[0]
    rhs[-1, 1] = dr_end * v[-1]

    try:
        sol = solve_banded((2, 2), ab, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateLinearizationError(
            f"banded solve failed at k={state.k!r}: {exc}"
        ) from exc
    if not np.all(np.isfinite(sol)):
        raise DegenerateLinearizationError(
            f"banded solve produced non-finite corrections at k={state.k!r}"
        )
    return CorrectionSet(
        psi=sol[0::2, 0],
        psi1=sol[1::2, 0],
        psi_mu=sol[0::2, 1],
        psi1_mu=sol[1::2, 1],
    )


def mu_update(state: IterationState, corrections: CorrectionSet, grid: Grid) -> float:
    """Frequency increment restoring the unit norm to first order.

    The norm of the updated (pre-renormalization) state expands around the
    current iterate as 1 + 2 I_s + 2 mu I_mu + O(corrections^2) with

        I_s  = int (u psi + v psi1) dx,
        I_mu = int (u psi_mu + v psi1_mu) dx,

    so the increment that holds the norm at one is mu = -I_s / I_mu.
    Because psi = -u identically at frozen potential, I_s = -1 for a
    normalized state and the formula reduces to mu = 1/I_mu, but it is
    evaluated in full so the identity is exercised rather than assumed.
    """
    u, v = state.pair.u, state.pair.v
    i_s = integrate(u * corrections.psi + v * corrections.psi1, grid)
    i_mu = integrate(u * corrections.psi_mu + v * corrections.psi1_mu, grid)
    if abs(i_mu) < _MU_DENOM_TOL:
        raise StalledUpdateError(
            f"frequency update denominator |I_mu| = {abs(i_mu):.3e} < "
            f"{_MU_DENOM_TOL:g}; the linearization carries no k-motion"
        )
    mu = -i_s / i_mu
    corrections.mu = float(mu)
    return float(mu)


def newton_step(
    state: IterationState,
    corrections: CorrectionSet,
    config: SolverConfig,
    grid: Grid,
    tau: Optional[float] = None,
    tau_k: float = 1.0,
) -> IterationState:
    """Apply one damped update and rebuild the self-consistent potential.

    Fields move by tau times the combined correction and are renormalized;
    the frequency moves by tau_k times mu (the full step by default; the
    safeguard loop damps it only when retrying a rejected step). The
    potential is recomputed from the new density, so the returned state is
    ready for the next residual evaluation. Raises DivergenceError on
    non-finite results and StepRejectedError when the frequency would leave
    the positive branch.
    """
    if corrections.mu is None:
        mu_update(state, corrections, grid)
    mu = corrections.mu
    step_tau = config.tau if tau is None else tau
    u_new = state.pair.u + step_tau * (corrections.psi + mu * corrections.psi_mu)
    v_new = state.pair.v + step_tau * (corrections.psi1 + mu * corrections.psi1_mu)
    k_new = state.k + tau_k * mu
    if k_new <= 0.0:
        raise StepRejectedError(k_new)
    if not (np.all(np.isfinite(u_new)) and np.all(np.isfinite(v_new))):
        raise DivergenceError(
            f"non-finite fields after update at iteration {state.iteration}"
        )
    raw = density(SpinorPair(u_new, v_new), grid).norm
    if not (np.isfinite(raw) and raw > 0):
        raise DivergenceError(f"update produced unnormalizable fields (norm {raw!r})")
    corrections.a_norm = float(1.0 / np.sqrt(raw))
    pair = SpinorPair(u_new * corrections.a_norm, v_new * corrections.a_norm)
    fld = make_field(pair, state.a, grid)
    new = IterationState(
        pair=pair,
        k=float(k_new),
        field=fld,
        a=state.a,
        residual_norm=float("nan"),
        norm_error=abs(density(pair, grid).norm - 1.0),
        iteration=state.iteration + 1,
        last_mu=float(mu),
        trace=state.trace,
    )
    new.residual_norm = residual_norm(new, grid)
    return new


def count_nodes(values: np.ndarray, threshold: float = 1e-8) -> int:
    """Interior sign changes of a profile, ignoring sub-threshold noise."""
    z = np.asarray(values, dtype=float)
    scale = np.max(np.abs(z))
    if scale == 0.0:
        return 0
    core = z[np.abs(z) > threshold * scale]
    return int(np.sum(np.diff(np.sign(core)) != 0))


def _initial_state(a, grid, init, k0) -> IterationState:
    if init is None:
        pair = trial_functions(1.0, grid).normalized(grid)
    else:
        pair = SpinorPair(
            np.asarray(init.u, dtype=float).copy(),
            np.asarray(init.v, dtype=float).copy(),
        ).normalized(grid)
    fld = make_field(pair, a, grid)
    state = IterationState(
        pair=pair,
        k=float(k0),
        field=fld,
        a=float(a),
        residual_norm=float("nan"),
        norm_error=abs(density(pair, grid).norm - 1.0),
    )
    state.residual_norm = residual_norm(state, grid)
    return state


def solve_fixed_a(
    a: float,
    grid: Grid,
    config: Optional[SolverConfig] = None,
    init: Optional[SpinorPair] = None,
    k0: float = 1.0,
) -> IterationState:
    """Iterate to the bound state at coupling a, returning the converged state.

    Parameters
    ----------
    a : float
        Coupling of the self-generated potential; the bound branch needs
        a < 0.
    grid : Grid
    config : SolverConfig, optional
    init : SpinorPair, optional
        Warm-start fields (renormalized on entry); the variational seed at
        unit scale is used when absent.
    k0 : float
        Starting frequency.

    Raises
    ------
    NonConvergenceError
        Iteration cap reached; carries the trace history.
    WrongBranchError
        Converged to a state whose u has interior nodes.
    DivergenceError, DegenerateLinearizationError, StalledUpdateError
        Propagated from the inner steps when damping cannot recover.
    """
    config = (config or SolverConfig()).validate()
    if not np.isfinite(a):
        raise ConfigurationError(f"coupling a must be finite, got {a!r}")
    if not (np.isfinite(k0) and k0 > 0):
        raise ConfigurationError(f"starting frequency must be positive, got {k0!r}")

    state = _initial_state(a, grid, init, k0)
    tau = config.tau
    tau_floor = config.tau / 64.0
    accepted_streak = 0

    for _ in range(config.max_iterations):
        corrections = solve_corrections(state, grid)
        mu = mu_update(state, corrections, grid)

        if abs(mu) < config.tol_residual and state.residual_norm < config.tol_residual:
            if count_nodes(state.pair.u) > 0:
                raise WrongBranchError(
                    f"converged at a={a!r} to a state with "
                    f"{count_nodes(state.pair.u)} interior node(s) in u"
                )
            state.last_mu = mu
            return state

        accepted = None
        tau_k = 1.0
        while accepted is None:
            try:
                candidate = newton_step(
                    state, corrections, config, grid, tau=tau, tau_k=tau_k
                )
            except (DivergenceError, StepRejectedError):
                candidate = None
            reject = (
                candidate is None
                or candidate.k <= _K_FLOOR
                or (
                    candidate.residual_norm
                    > state.residual_norm + 10.0 * config.tol_residual
                    and state.residual_norm > 10.0 * config.tol_residual
                )
            )
            if not reject:
                accepted = candidate
                accepted_streak += 1
                if accepted_streak >= 2:
                    tau = config.tau
            else:
                accepted_streak = 0
                if tau <= tau_floor:
                    if candidate is None:
                        raise DivergenceError(
                            f"update produced no valid state at a={a!r} "
                            f"even at tau={tau:g}"
                        )
                    # Accept the least-bad damped step rather than stall.
                    accepted = candidate
                else:
                    # Damp everything on a retry, the frequency included.
                    tau = 0.5 * tau
                    tau_k = tau

        state = accepted
        state.trace.append(
            (state.iteration, state.k, state.residual_norm, state.last_mu)
        )

    raise NonConvergenceError(
        f"no convergence at a={a!r} after {config.max_iterations} iterations "
        f"(residual {state.residual_norm:.3e}, |mu| {abs(state.last_mu):.3e})",
        history=state.trace,
    )
