"""Stationary states of the coupled system.

Three routes are covered:

  * `solve_null_vector` finds the positive null vector of an assembled linear
    block operator by shifted inverse power iteration.  (eps*I - A) is a
    nonsingular M-matrix, so its inverse is entrywise nonnegative; for an
    irreducible configuration that inverse is positive and its spectral
    radius 1/eps belongs to A's zero eigenvalue, so the iteration converges
    to the Perron direction.
  * `reversible_pair` solves for the constant equilibrium (a, b) of the
    two-species reversible reaction: r_A(a) = r_B(b) with the weighted mass
    a/alpha + b/beta pinned to the conserved value.
  * `project_onto_ray` picks from the ray {c*v : c > 0} the unique member
    sharing the initial data's conserved weighted mass, which is the
    long-time limit of the evolution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from .discretize import SystemOperator
from .errors import DegenerateDataError, IrreducibilityError, NonConvergenceError
from .model import ReactionSpec, State, eval_potential, eval_reaction, reaction_inverse
from .verify import weighted_mass

__all__ = [
    "StationaryState",
    "StationaryRay",
    "solve_null_vector",
    "adjoint_null_check",
    "reversible_pair",
    "project_onto_ray",
    "boltzmann_profile",
    "NORMALIZATIONS",
]

#: 'total' pins sum_i integral(v_i) = 1; 'alpha_weighted' pins
#: sum_i (1/alpha_i) integral(v_i) = 1.  Both constraints are legitimate and
#: differ only by the scale of the result, so the choice is always explicit.
NORMALIZATIONS = ("total", "alpha_weighted")

_MAX_ITER = 10_000
#: shift factor for the inverse iteration, relative to the operator norm
_SHIFT_FACTOR = 1e-3


@dataclass(frozen=True)
class StationaryState:
    """A stationary state with its residual and normalization record."""

    state: State
    residual: float
    normalization: str
    constraint_value: float
    iterations: int = 0


@dataclass(frozen=True)
class StationaryRay:
    """The one-parameter family {c * v : c > 0} of stationary states."""

    base: StationaryState

    def member(self, c: float) -> State:
        if not c > 0.0:
            raise ValueError(f"ray members need c > 0, got {c}")
        return self.base.state.with_fields(c * self.base.state.fields)


def _weights(A: SystemOperator) -> np.ndarray:
    """Left conservation vector: cell_volume/alpha_i repeated over block i."""
    vol = A.spec.grid.cell_volume
    return np.repeat(vol / A.spec.alphas, A.cells)


def solve_null_vector(A: SystemOperator, tol: float = 1e-13, *,
                      normalization: str = "total",
                      max_iter: int = _MAX_ITER,
                      start: np.ndarray | None = None) -> StationaryState:
    """Positive null vector of A by shifted inverse power iteration.

    Iterates x <- normalize((eps*I - A)^-1 x) with eps = 1e-3 * ||A||_inf from
    the all-ones start (or ``start``) until successive normalized iterates
    differ by at most ``tol`` in the weighted L1 norm.  The result is scaled
    to the requested integral constraint and reported with ||A v||_inf.
    """
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    matrix = A.matrix
    nd = matrix.shape[0]
    norm_a = float(np.abs(matrix).sum(axis=1).max())
    eps = _SHIFT_FACTOR * norm_a
    shifted = sparse.csc_array(eps * sparse.eye_array(nd, format="csc") - matrix)
    lu = splu(shifted)

    spec = A.spec
    vol = spec.grid.cell_volume
    wl1_weights = np.repeat(vol / spec.alphas, A.cells)

    def wl1(vec: np.ndarray) -> float:
        return float(wl1_weights @ np.abs(vec))

    x = np.ones(nd) if start is None else np.array(start, dtype=float)
    if x.shape != (nd,):
        raise ValueError(f"start vector must have shape ({nd},)")
    if x.min() <= 0.0:
        raise ValueError("start vector must be strictly positive")
    x = x / wl1(x)

    iterations = 0
    delta = np.inf
    for iterations in range(1, max_iter + 1):
        y = lu.solve(x)
        if y.min() < -1e-13 * np.abs(y).max():
            raise IrreducibilityError(
                "inverse iteration left the positive cone; the configuration "
                "is not irreducible"
            )
        y = y / wl1(y)
        delta = wl1(y - x)
        x = y
        if delta <= tol:
            break
    else:
        raise NonConvergenceError(
            f"inverse iteration did not converge within {max_iter} sweeps "
            f"(last update {delta:.3e})",
            residual=float(np.abs(matrix @ x).max()),
        )

    if normalization == "total":
        scale = float(vol * x.sum())
    else:
        scale = float(wl1_weights @ x)
    v = x / scale
    if v.min() <= 0.0:
        raise IrreducibilityError(
            "computed null vector is not strictly positive; the configuration "
            "is not irreducible"
        )
    residual = float(np.abs(matrix @ v).max())
    if residual > tol * norm_a:
        raise NonConvergenceError(
            f"stationary residual {residual:.3e} exceeds tol*||A||={tol * norm_a:.3e}",
            residual=residual,
        )
    state = State(spec.grid, v.reshape(A.n, A.cells), t=0.0, gauge="physical")
    return StationaryState(state=state, residual=residual,
                           normalization=normalization, constraint_value=1.0,
                           iterations=iterations)


def adjoint_null_check(A: SystemOperator) -> float:
    """Max-norm of the conservation row vector applied to A.

    The row vector with value cell_volume/alpha_i on block i is a left null
    vector of any correctly assembled operator, so values near round-off
    certify discrete mass conservation.
    """
    r = A.matrix.T @ _weights(A)
    return float(np.abs(r).max())


def reversible_pair(mass: float, r_a: ReactionSpec, r_b: ReactionSpec,
                    alpha: float = 1.0, beta: float = 1.0,
                    volume: float = 1.0) -> tuple[float, float]:
    """Constant equilibrium (a, b) of the two-species reversible reaction.

    Solves a/alpha + b/beta = mass/volume with b = r_B^-1(r_A(a)) by bisection
    on the strictly increasing g(a) = a/alpha + b(a)/beta - mass/volume, to
    |g| <= 1e-12.  ``mass`` is the conserved quantity
    integral(u0/alpha + v0/beta); ``volume`` is the domain measure.
    """
    if not mass > 0.0:
        raise DegenerateDataError(f"mass must be positive, got {mass}")
    if not (alpha > 0.0 and beta > 0.0 and volume > 0.0):
        raise ValueError("alpha, beta and volume must be positive")
    target = mass / volume

    def g(a: float) -> float:
        b = reaction_inverse(r_b, eval_reaction(r_a, a))
        return a / alpha + b / beta - target

    hi = 1.0
    for _ in range(200):
        if g(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise NonConvergenceError("failed to bracket the equilibrium", residual=g(hi))
    lo = 0.0
    a = 0.5 * hi
    for _ in range(500):
        val = g(a)
        if abs(val) <= 1e-12:
            break
        if val > 0.0:
            hi = a
        else:
            lo = a
        nxt = 0.5 * (lo + hi)
        if nxt == a:
            break
        a = nxt
    val = g(a)
    if abs(val) > 1e-12:
        raise NonConvergenceError(
            f"bisection stalled with |g(a)|={abs(val):.3e} > 1e-12", residual=val
        )
    b = reaction_inverse(r_b, eval_reaction(r_a, a))
    return float(a), float(b)


def project_onto_ray(u0: State, ray: StationaryRay, spec) -> tuple[float, StationaryState]:
    """The member of the stationary ray sharing u0's conserved weighted mass.

    Returns (c, c*v); by mass conservation and the contraction property this
    is the long-time limit of the trajectory started at u0.
    """
    m0 = weighted_mass(u0, spec)
    mv = weighted_mass(ray.base.state, spec)
    if m0 <= 0.0:
        raise DegenerateDataError("initial data has no mass to match")
    c = m0 / mv
    scaled = ray.base.state.with_fields(c * ray.base.state.fields)
    return c, StationaryState(
        state=scaled,
        residual=c * ray.base.residual,
        normalization="mass_matched",
        constraint_value=m0,
        iterations=ray.base.iterations,
    )


def boltzmann_profile(spec, species: int = 0) -> np.ndarray:
    """Normalized cell samples of exp(-psi/sigma) for one species.

    This is the exact single-species stationary density: the flux vanishes on
    it face by face, and here it is normalized to unit discrete integral.
    """
    sp = spec.species[species]
    pts = spec.grid.centers()
    psi = np.asarray(eval_potential(sp.potential, pts, spec.grid), dtype=float).ravel()
    prof = np.exp(-psi / sp.sigma)
    return prof / (spec.grid.cell_volume * prof.sum())
