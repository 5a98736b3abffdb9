"""Equilibrium geometry of a laser-cooled ion chain in a harmonic well.

Ions with like charges in a common harmonic potential arrange themselves
along the weak trap axis.  In units of the characteristic length returned
by :func:`length_scale`, the dimensionless positions ``u_1 < ... < u_L``
minimize

    V(u) = sum_i u_i^2 / 2  +  sum_{i<j} 1 / |u_i - u_j|

The stationarity conditions are solved with a damped Newton iteration on
the analytic Jacobian.  The equilibrium is mirror symmetric, so the default
solver works on the ``L // 2`` positive positions only; the Jacobian of the
reduced problem stays symmetric positive definite for any ordered
configuration, which makes Cholesky factorization safe.

For chains approaching a thousand ions the force balance is stiff enough
(local curvature ~ 1e5) that positions rounded to double precision cannot
express the equilibrium below a residual of roughly 1e-10.  The solver
therefore finishes with a correction step kept separate from the double
precision base until the two are combined in extended precision, which
brings the force-balance residual of the returned positions down to the
1e-12 level even for the longest supported chains.

The minimum gap sits at the chain centre and follows a power law in the
ion number; :func:`fit_min_spacing` recovers its coefficient and exponent
from solved chains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .constants import CODATA2018, PhysicalConstants
from .species import IonSpecies

__all__ = [
    "ChainSolution",
    "SpacingFit",
    "ChainSolverError",
    "length_scale",
    "equilibrium_positions",
    "solve_chain_range",
    "fit_min_spacing",
    "min_spacing_meters",
    "MAX_IONS",
    "RESIDUAL_CEILING",
]

MAX_IONS = 10_000          # guard against accidental huge dense solves
RESIDUAL_CEILING = 1e-10   # a converged solve must beat this or we raise
_DAMPED_ABOVE = 1e-2       # residual above which steps are line searched
_POLISH_ABOVE = 1e-11      # residual above which the refinement step runs


class ChainSolverError(RuntimeError):
    """Newton iteration failed to reach an acceptable residual."""


@dataclass(frozen=True, eq=False)
class ChainSolution:
    """Solved chain geometry in dimensionless units.

    Attributes
    ----------
    n_ions : int
        Number of ions.
    positions : numpy.ndarray
        Ordered equilibrium positions in units of the length scale, exactly
        antisymmetric for the default solver.  Stored in numpy's extended
        precision (``np.longdouble``) so that long chains keep a residual
        far below ``RESIDUAL_CEILING``; on platforms where longdouble is an
        alias of float64 the ceiling still holds for ``L <= 1000``.
    residual : float
        Max-norm of the force balance at the returned positions.
    iterations : int
        Newton iterations performed, refinement steps included.
    """

    n_ions: int
    positions: np.ndarray = field(repr=False)
    residual: float
    iterations: int

    @property
    def min_spacing(self) -> float:
        """Smallest gap between adjacent ions (dimensionless)."""
        return float(np.min(np.diff(self.positions)))


@dataclass(frozen=True)
class SpacingFit:
    """Power-law fit ``min_spacing ~ coefficient / L**exponent``."""

    coefficient: float
    exponent: float
    n_min: int
    n_max: int
    rms_log_error: float

    def min_spacing(self, n_ions: int | np.ndarray) -> float | np.ndarray:
        return self.coefficient / np.asarray(n_ions, dtype=float) ** self.exponent


def length_scale(
    species: IonSpecies,
    axial_freq: float,
    constants: PhysicalConstants = CODATA2018,
) -> float:
    """Characteristic inter-ion length [m] for a given axial frequency.

    Parameters
    ----------
    species : IonSpecies
        Ion species (charge state and mass number enter).
    axial_freq : float
        Angular frequency of the axial confining potential [rad/s].
    constants : PhysicalConstants
        Physical constant set.

    Returns
    -------
    float
        ``(Z^2 e^2 / (4 pi eps0 axial_freq^2 M))^(1/3)`` with ``M`` the ion
        mass; dimensionless chain positions are multiples of this length.
    """
    if not (math.isfinite(axial_freq) and axial_freq > 0.0):
        raise ValueError("axial_freq must be positive and finite")
    mass = species.A * constants.u
    coulomb = (species.Z * constants.e) ** 2 / (4.0 * math.pi * constants.eps0)
    return (coulomb / (axial_freq**2 * mass)) ** (1.0 / 3.0)


# --- full-system force balance ----------------------------------------------


def _full_residual(u: np.ndarray) -> tuple[np.ndarray, float]:
    d = u[:, None] - u[None, :]
    np.fill_diagonal(d, np.inf)
    g = u - np.sum(1.0 / (d * np.abs(d)), axis=1)
    return g, float(np.max(np.abs(g)))


def _full_hessian(u: np.ndarray) -> np.ndarray:
    d = np.abs(u[:, None] - u[None, :])
    np.fill_diagonal(d, np.inf)
    off = -2.0 / d**3
    h = off.copy()
    np.fill_diagonal(h, 1.0 - np.sum(off, axis=1))
    return h


def _full_pair_residual(u: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, float]:
    # force balance at positions u + w without ever forming the sum, so that
    # a small correction w is not lost to the rounding of u itself
    d = (u[:, None] - u[None, :]) + (w[:, None] - w[None, :])
    np.fill_diagonal(d, np.inf)
    g = (u + w) - np.sum(1.0 / (d * np.abs(d)), axis=1)
    return g, float(np.max(np.abs(g)))


def _potential(u: np.ndarray) -> float:
    d = np.abs(u[:, None] - u[None, :])
    np.fill_diagonal(d, np.inf)
    return float(0.5 * np.sum(u * u) + 0.5 * np.sum(1.0 / d))


def _strictly_ordered(u: np.ndarray) -> bool:
    return bool(np.all(np.diff(u) > 0.0))


def _ordered_positive(v: np.ndarray) -> bool:
    # reduced unknowns must stay on their side of the mirror plane
    return v[0] > 0.0 and bool(np.all(np.diff(v) > 0.0))


# --- mirror-reduced system ----------------------------------------------------
#
# Unknowns are the m = L // 2 positive positions v_1 < ... < v_m; for odd L
# one ion is pinned at the origin.  The reduced gradient is twice the full
# gradient evaluated at the positive positions, and the reduced Hessian is
# 2 * (H[k+, l+] - H[k+, l-]) with k+/k- the indices of +v_k / -v_k.  The
# common factor 2 cancels in the Newton step and is dropped.


def _assemble(v: np.ndarray, n_ions: int) -> np.ndarray:
    if n_ions % 2 == 0:
        parts = [-v[::-1], v]
    else:
        parts = [-v[::-1], np.zeros(1, dtype=v.dtype), v]
    return np.concatenate(parts)


def _reduced_residual(v: np.ndarray, n_ions: int) -> tuple[np.ndarray, float]:
    u = _assemble(v, n_ions)
    m = len(v)
    d = v[:, None] - u[None, :]
    rows = np.arange(m)
    d[rows, n_ions - m + rows] = np.inf
    g = v - np.sum(1.0 / (d * np.abs(d)), axis=1)
    return g, float(np.max(np.abs(g)))


def _reduced_pair_residual(
    v: np.ndarray, w: np.ndarray, n_ions: int
) -> tuple[np.ndarray, float]:
    u = _assemble(v, n_ions)
    uw = _assemble(w, n_ions)
    m = len(v)
    d = (v[:, None] - u[None, :]) + (w[:, None] - uw[None, :])
    rows = np.arange(m)
    d[rows, n_ions - m + rows] = np.inf
    g = (v + w) - np.sum(1.0 / (d * np.abs(d)), axis=1)
    return g, float(np.max(np.abs(g)))


def _reduced_hessian(v: np.ndarray, n_ions: int) -> np.ndarray:
    m = len(v)
    u = _assemble(v, n_ions)
    off = n_ions - m
    d = np.abs(v[:, None] - u[None, :])
    rows = np.arange(m)
    d[rows, off + rows] = np.inf
    inv3 = 1.0 / d**3
    plus = inv3[:, off:]            # couplings to +v_l (self masked)
    minus = inv3[:, :m][:, ::-1]    # couplings to -v_l
    a = 2.0 * minus - 2.0 * plus
    a[rows, rows] = 1.0 + 2.0 * np.sum(inv3, axis=1) + 2.0 * minus[rows, rows]
    return a


def _reduced_potential(v: np.ndarray, n_ions: int) -> float:
    return _potential(_assemble(v, n_ions))


def _initial_halfwidth(n_ions: int) -> float:
    return 1.1 * n_ions**0.4


def _newton(x, residual, hessian, objective, ordered, tol, max_iter):
    """Damped Newton iteration shared by the full and reduced solvers.

    Far from the solution, steps are shortened until the potential drops and
    the configuration stays admissible per ``ordered``.  Near the solution
    full steps are taken and the best iterate is kept; once the residual
    stops improving (the double precision noise floor) iteration stops
    rather than chasing a tolerance below machine precision.

    Returns ``(x_best, g_best, r_best, iterations, last_factor)`` where
    ``last_factor`` is the most recent Cholesky factorization, reusable for
    one refinement step.
    """
    g, r = residual(x)
    best_x, best_g, best_r = x, g, r
    factor = None
    iterations = 0
    for iterations in range(1, max_iter + 1):
        if best_r < tol:
            break
        a = hessian(x)
        try:
            factor = cho_factor(a, lower=True, check_finite=False)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - SPD by construction
            raise ChainSolverError(f"Cholesky factorization failed: {exc}") from exc
        step = cho_solve(factor, g, check_finite=False)

        damped = r >= _DAMPED_ABOVE
        if damped:
            v0 = objective(x)
            scale = 1.0
            trial = None
            while scale >= 2.0**-20:
                cand = x - scale * step
                if ordered(cand) and objective(cand) < v0:
                    trial = cand
                    break
                scale *= 0.5
            if trial is None:
                trial = x - step  # stagnant line search: judge by residual
        else:
            trial = x - step

        if not ordered(trial):
            break
        g, r = residual(trial)
        x = trial
        if r < best_r:
            best_x, best_g, best_r = x, g, r
        elif not damped:
            break  # residual floor reached
    return best_x, best_g, best_r, iterations, factor


def _polish(x, g, r, factor, pair_residual):
    """Refine a converged double precision iterate in extended precision.

    One or two frozen-Jacobian Newton steps whose correction ``w`` is kept
    apart from the base ``x``; the pair evaluation of the force balance at
    ``x + w`` avoids the representation floor of ``x`` alone.  Returns the
    combined extended-precision positions and the refined residual.
    """
    w = np.zeros_like(x)
    best_w, best_r = w, r
    for _ in range(2):
        w = w - cho_solve(factor, g, check_finite=False)
        g, r = pair_residual(x, w)
        if r < best_r:
            best_w, best_r = w, r
        else:
            break
    return x.astype(np.longdouble) + best_w.astype(np.longdouble), best_r


def _solve_reduced(
    n_ions: int, guess: np.ndarray, tol: float, max_iter: int
) -> tuple[np.ndarray, float, int]:
    v, g, r, its, factor = _newton(
        guess,
        residual=lambda v: _reduced_residual(v, n_ions),
        hessian=lambda v: _reduced_hessian(v, n_ions),
        objective=lambda v: _reduced_potential(v, n_ions),
        ordered=_ordered_positive,
        tol=tol,
        max_iter=max_iter,
    )
    if r > _POLISH_ABOVE and factor is not None:
        v_ld, r = _polish(
            v, g, r, factor,
            lambda v, w: _reduced_pair_residual(v, w, n_ions),
        )
        its += 2
    else:
        v_ld = v.astype(np.longdouble)
    return _assemble(v_ld, n_ions), r, its


def _solve_full(
    guess: np.ndarray, tol: float, max_iter: int
) -> tuple[np.ndarray, float, int]:
    u, g, r, its, factor = _newton(
        guess,
        residual=_full_residual,
        hessian=_full_hessian,
        objective=_potential,
        ordered=_strictly_ordered,
        tol=tol,
        max_iter=max_iter,
    )
    if r > _POLISH_ABOVE and factor is not None:
        u_ld, r = _polish(u, g, r, factor, _full_pair_residual)
        its += 2
    else:
        u_ld = u.astype(np.longdouble)
    return u_ld, r, its


def _as_solution(n_ions: int, u: np.ndarray, r: float, its: int) -> ChainSolution:
    if r > RESIDUAL_CEILING:
        raise ChainSolverError(
            f"residual {r:.3e} above {RESIDUAL_CEILING:.0e} for n_ions={n_ions}"
        )
    if not _strictly_ordered(u):
        raise ChainSolverError(f"returned positions not ordered for n_ions={n_ions}")
    u.setflags(write=False)
    return ChainSolution(n_ions=n_ions, positions=u, residual=r, iterations=its)


def equilibrium_positions(
    n_ions: int,
    initial: np.ndarray | None = None,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> ChainSolution:
    """Solve the force balance for ``n_ions`` ions.

    Parameters
    ----------
    n_ions : int
        Chain length, between 2 and ``MAX_IONS``.
    initial : numpy.ndarray, optional
        Full-length ordered starting guess.  When omitted, the solver uses
        equally spaced ions over ``+- 1.1 * n_ions**0.4`` and exploits the
        mirror symmetry of the equilibrium; with an explicit guess the full
        system is iterated instead and the result is not symmetrized.
    tol : float
        Target residual max-norm.  Values much below 1e-12 are not
        reachable for long chains; the solver stops at the noise floor and
        returns its best iterate.
    max_iter : int
        Newton iteration cap.

    Raises
    ------
    ChainSolverError
        If the final residual exceeds ``RESIDUAL_CEILING``.
    """
    if not isinstance(n_ions, (int, np.integer)) or isinstance(n_ions, bool):
        raise TypeError("n_ions must be an integer")
    if n_ions < 2 or n_ions > MAX_IONS:
        raise ValueError(f"n_ions must be in [2, {MAX_IONS}], got {n_ions}")

    if initial is None:
        half = _initial_halfwidth(n_ions)
        guess = np.linspace(-half, half, n_ions)[n_ions - n_ions // 2 :]
        u, r, its = _solve_reduced(n_ions, guess, tol, max_iter)
    else:
        guess = np.asarray(initial, dtype=float)
        if guess.shape != (n_ions,):
            raise ValueError(f"initial must have shape ({n_ions},)")
        if not _strictly_ordered(guess):
            raise ValueError("initial must be strictly increasing")
        u, r, its = _solve_full(guess, tol, max_iter)
    return _as_solution(n_ions, u, r, its)


def _warm_guess(
    n_ions: int, prev: ChainSolution, prev2: ChainSolution | None
) -> np.ndarray | None:
    """Positive-block starting guess interpolated from earlier solutions.

    The full position vectors are resampled at matching index fractions
    (which keeps odd and even chain lengths aligned) and extrapolated
    linearly through the two preceding lengths; falls back to plain
    interpolation of the latest solution, or to ``None`` when the guess is
    not an admissible ordered configuration.
    """
    m = n_ions // 2

    def resample(sol: ChainSolution) -> np.ndarray:
        full = np.asarray(sol.positions, dtype=float)
        return np.interp(
            np.linspace(0.0, 1.0, n_ions), np.linspace(0.0, 1.0, sol.n_ions), full
        )

    base = resample(prev)[n_ions - m :]
    if prev2 is not None:
        guess = 2.0 * base - resample(prev2)[n_ions - m :]
        if _ordered_positive(guess):
            return guess
    if _ordered_positive(base):
        return base
    return None


def solve_chain_range(
    n_min: int, n_max: int, tol: float = 1e-12, max_iter: int = 200
) -> list[ChainSolution]:
    """Solve every chain length in ``[n_min, n_max]`` by continuation.

    Each length is warm started from the preceding solutions, which keeps
    Newton to a few iterations per chain; a length that fails from the warm
    start is retried from the cold default guess.
    """
    if n_min < 2 or n_max < n_min:
        raise ValueError("need 2 <= n_min <= n_max")
    solutions: list[ChainSolution] = []
    for n in range(n_min, n_max + 1):
        sol = None
        if solutions:
            prev2 = solutions[-2] if len(solutions) >= 2 else None
            guess = _warm_guess(n, solutions[-1], prev2)
            if guess is not None:
                try:
                    sol = _as_solution(n, *_solve_reduced(n, guess, tol, max_iter))
                except ChainSolverError:
                    sol = None
        if sol is None:
            sol = equilibrium_positions(n, tol=tol, max_iter=max_iter)
        solutions.append(sol)
    return solutions


def fit_min_spacing(
    n_min: int = 2,
    n_max: int = 50,
    solutions: list[ChainSolution] | None = None,
) -> SpacingFit:
    """Least-squares power law for the minimum gap versus chain length.

    Ordinary least squares on ``log(min_spacing)`` against ``log(L)`` over
    ``L in [n_min, n_max]``; pass ``solutions`` to reuse already solved
    chains (they must cover the range contiguously).
    """
    if solutions is None:
        solutions = solve_chain_range(n_min, n_max)
    else:
        solutions = [s for s in solutions if n_min <= s.n_ions <= n_max]
        lengths = [s.n_ions for s in solutions]
        if lengths != list(range(n_min, n_max + 1)):
            raise ValueError("solutions must cover [n_min, n_max] exactly once")
    log_n = np.log([float(s.n_ions) for s in solutions])
    log_gap = np.log([s.min_spacing for s in solutions])
    design = np.column_stack([np.ones_like(log_n), -log_n])
    coefs, *_ = np.linalg.lstsq(design, log_gap, rcond=None)
    intercept, exponent = coefs
    resid = log_gap - design @ coefs
    return SpacingFit(
        coefficient=float(np.exp(intercept)),
        exponent=float(exponent),
        n_min=n_min,
        n_max=n_max,
        rms_log_error=float(np.sqrt(np.mean(resid**2))),
    )


def min_spacing_meters(
    species: IonSpecies,
    axial_freq: float,
    n_ions: int,
    constants: PhysicalConstants = CODATA2018,
    solution: ChainSolution | None = None,
) -> float:
    """Smallest physical gap [m] in an ``n_ions`` chain at ``axial_freq``."""
    if solution is None:
        solution = equilibrium_positions(n_ions)
    elif solution.n_ions != n_ions:
        raise ValueError("solution does not match n_ions")
    return length_scale(species, axial_freq, constants) * solution.min_spacing
