"""Time integration: implicit Euler for linear problems, IMEX for nonlinear ones.

The implicit step solves (I - dt*A) u+ = u.  Since A is Metzler with
volume-weighted zero column sums, I - dt*A is a nonsingular M-matrix for any
dt > 0: its inverse is entrywise nonnegative, so nonnegative states stay
nonnegative and cellwise ordering of two states is preserved.  The left null
vector of A makes the weighted total mass exact up to solver round-off.

Nonlinear reactions are split off explicitly:

    stage 1   v_i = u_i + dt * alpha_i * sum_j lam[i,j] * r_j(u_j)
    stage 2   (I - dt * T_i) u+_i = v_i          (per-species transport)

Stage 1 keeps v >= 0 provided dt <= dt_max = min_i 1/(alpha_i*|lam[i,i]|*L_i),
where L_i bounds the slope of r_i on [0, max(u_i)]: the only negative
contribution to v_i is -dt*alpha_i*|lam[i,i]|*r_i(u_i) >= -u_i under that
bound.  Stage 1 conserves the weighted mass identically because the columns
of lam sum to zero; stage 2 conserves it like any implicit transport step.

1-D solves use direct banded elimination (species interleaved per cell);
2-D solves use restarted GMRES at the configured tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.linalg import solve_banded
from scipy.sparse.linalg import gmres

from ._parallel import pmap
from .discretize import SystemOperator, TransportOperator, assemble_system, assemble_transport
from .errors import (
    ConfigError,
    InvariantViolationError,
    MotorfluxError,
    SolverError,
    StepSizeError,
)
from .model import (
    ProblemSpec,
    State,
    eval_reaction,
    initial_state,
    reaction_lipschitz,
    validate,
)

__all__ = [
    "StepConfig",
    "SnapshotDiagnostics",
    "Trajectory",
    "step_linear_implicit",
    "step_imex",
    "imex_dt_max",
    "run",
]

#: slack for "nonnegative" state checks; round-off below this is tolerated
_NEG_SLACK = 1e-13


@dataclass(frozen=True)
class StepConfig:
    """Time-stepping parameters.

    ``lin_tol`` and ``lin_maxiter`` only matter for the 2-D iterative solves;
    1-D elimination is exact up to round-off.
    """

    dt: float
    t_end: float
    stride: int = 1
    lin_tol: float = 1e-12
    lin_maxiter: int = 5000

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.t_end < 0.0:
            raise ConfigError(f"t_end must be nonnegative, got {self.t_end}")
        if self.stride < 1:
            raise ConfigError(f"stride must be >= 1, got {self.stride}")


@dataclass(frozen=True)
class SnapshotDiagnostics:
    time: float
    weighted_mass: float
    species_min: tuple[float, ...]
    species_l1: tuple[float, ...]


@dataclass(frozen=True)
class Trajectory:
    """Recorded snapshots of one run, with per-snapshot diagnostics."""

    states: tuple[State, ...]
    diagnostics: tuple[SnapshotDiagnostics, ...]

    def __post_init__(self):
        if len(self.states) != len(self.diagnostics):
            raise ValueError("one diagnostics record per snapshot required")
        times = [s.t for s in self.states]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("snapshot times must be strictly increasing")

    @property
    def times(self) -> tuple[float, ...]:
        return tuple(s.t for s in self.states)

    @property
    def final(self) -> State:
        return self.states[-1]


def _diagnose(state: State, spec: ProblemSpec) -> SnapshotDiagnostics:
    vol = state.grid.cell_volume
    l1 = vol * np.abs(state.fields).sum(axis=1)
    mass = float(np.sum(vol * state.fields.sum(axis=1) / spec.alphas))
    return SnapshotDiagnostics(
        time=state.t,
        weighted_mass=mass,
        species_min=tuple(float(v) for v in state.fields.min(axis=1)),
        species_l1=tuple(float(v) for v in l1),
    )


# ---------------------------------------------------------------------------
# linear solvers for (I - dt*A)


class _BandedSolver:
    """Direct banded elimination of (I - dt*A) on 1-D grids.

    Unknowns are interleaved per cell (cell-major) so the matrix has
    bandwidth n_species: transport couples the same species in adjacent
    cells, coupling acts within a cell.
    """

    def __init__(self, matrix: sparse.csr_array, n_species: int, dt: float):
        nd = matrix.shape[0]
        cells = nd // n_species
        m = sparse.csr_array(sparse.eye_array(nd, format="csr") - dt * matrix)
        # perm[p] = species-major index of the p-th cell-major unknown
        perm = np.arange(nd).reshape(n_species, cells).T.ravel()
        mp = sparse.coo_array(m[perm, :][:, perm])
        band = n_species
        ab = np.zeros((2 * band + 1, nd))
        ab[band + mp.row - mp.col, mp.col] = mp.data
        self._ab = ab
        self._band = band
        self._perm = perm

    def solve(self, b: np.ndarray, x0=None) -> np.ndarray:
        xp = solve_banded((self._band, self._band), self._ab, b[self._perm])
        x = np.empty_like(xp)
        x[self._perm] = xp
        return x


class _KrylovSolver:
    """Restarted GMRES on (I - dt*A) for 2-D grids, solved to ``tol`` relative."""

    def __init__(self, matrix: sparse.csr_array, n_species: int, dt: float,
                 tol: float, maxiter: int):
        nd = matrix.shape[0]
        self._m = sparse.csr_array(sparse.eye_array(nd, format="csr") - dt * matrix)
        self._tol = tol
        self._maxiter = maxiter

    def solve(self, b: np.ndarray, x0=None) -> np.ndarray:
        if not np.any(b):
            return np.zeros_like(b)
        restart = min(60, self._m.shape[0])
        x, info = gmres(self._m, b, x0=b if x0 is None else x0,
                        rtol=self._tol, atol=0.0,
                        restart=restart,
                        maxiter=max(1, self._maxiter // restart))
        residual = float(np.linalg.norm(b - self._m @ x))
        if info != 0 or residual > 10.0 * self._tol * float(np.linalg.norm(b)):
            raise SolverError(
                f"GMRES did not reach rtol={self._tol:g} "
                f"(info={info}, residual={residual:.3e})",
                residual=residual,
            )
        return x


def _make_solver(matrix: sparse.csr_array, n_species: int, dt: float,
                 dim: int, tol: float, maxiter: int):
    if dim == 1:
        return _BandedSolver(matrix, n_species, dt)
    return _KrylovSolver(matrix, n_species, dt, tol, maxiter)


def _require_nonnegative(state: State) -> None:
    low = float(state.fields.min()) if state.fields.size else 0.0
    if low < -_NEG_SLACK:
        raise ValueError(f"state must be nonnegative; min value {low!r}")


# ---------------------------------------------------------------------------
# steps


def step_linear_implicit(state: State, A: SystemOperator, dt: float, *,
                         lin_tol: float = 1e-12, lin_maxiter: int = 5000) -> State:
    """One implicit Euler step of the assembled linear system.

    Positivity and weighted-mass conservation hold for any dt > 0 by the
    M-matrix structure of I - dt*A.
    """
    if state.gauge != "physical":
        raise ValueError("step_linear_implicit expects a physical-gauge state")
    _require_nonnegative(state)
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    solver = _make_solver(A.matrix, A.n, dt, state.grid.dim, lin_tol, lin_maxiter)
    x = solver.solve(state.fields.ravel())
    return state.with_fields(x.reshape(state.fields.shape), t=state.t + dt)


def imex_dt_max(state: State, spec: ProblemSpec) -> float:
    """Largest admissible IMEX step for this state: min_i 1/(alpha_i*|lam_ii|*L_i).

    L_i is the Lipschitz bound of r_i on [0, max(u_i)]; for a power law p it
    is p * max(u_i)**(p-1).  Species with lam_ii = 0 impose no bound.
    """
    bound = math.inf
    lam = spec.coupling.lam
    for i, sp in enumerate(spec.species):
        rate = sp.alpha * abs(lam[i, i])
        if rate == 0.0:
            continue
        lip = reaction_lipschitz(sp.reaction, max(float(state.fields[i].max()), 0.0))
        if lip == 0.0:
            continue
        bound = min(bound, 1.0 / (rate * lip))
    return bound


def _reaction_stage(fields: np.ndarray, spec: ProblemSpec, dt: float) -> np.ndarray:
    clipped = np.maximum(fields, 0.0)  # round-off negatives within _NEG_SLACK
    rates = np.stack([
        np.asarray(eval_reaction(sp.reaction, clipped[i]))
        for i, sp in enumerate(spec.species)
    ])
    incr = spec.alphas[:, None] * (spec.coupling.lam @ rates)
    out = fields + dt * incr
    low = float(out.min())
    if low < -_NEG_SLACK:
        raise InvariantViolationError(
            f"explicit reaction stage produced {low!r} < -{_NEG_SLACK:g} "
            "despite the step-size bound"
        )
    return out


def step_imex(state: State, spec: ProblemSpec,
              operators: tuple[TransportOperator, ...], dt: float, *,
              lin_tol: float = 1e-12, lin_maxiter: int = 5000) -> State:
    """One IMEX step: explicit reactions, then implicit per-species transport."""
    if state.gauge != "physical":
        raise ValueError("step_imex expects a physical-gauge state")
    if len(operators) != spec.n_species:
        raise ValueError("need one transport operator per species")
    _require_nonnegative(state)
    dt_max = imex_dt_max(state, spec)
    if dt > dt_max:
        raise StepSizeError(
            f"dt={dt:g} exceeds the positivity bound dt_max={dt_max:g}",
            dt_max=dt_max,
        )
    mid = _reaction_stage(state.fields, spec, dt)
    solvers = [
        _make_solver(op.matrix, 1, dt, state.grid.dim, lin_tol, lin_maxiter)
        for op in operators
    ]
    rows = pmap(lambda i: solvers[i].solve(mid[i]), range(len(solvers)))
    return state.with_fields(np.stack(rows), t=state.t + dt)


# ---------------------------------------------------------------------------
# trajectory driver


def run(spec: ProblemSpec, cfg: StepConfig, initial: State | None = None) -> Trajectory:
    """Advance the problem to t_end, recording every ``stride``-th step and the end.

    Linear problems use the assembled block operator; any nonlinear reaction
    switches the run to IMEX splitting.  ``initial`` overrides the sampled
    initial data (used by the verification checks).
    """
    report = validate(spec)
    if not report.ok:
        raise ConfigError("invalid problem: " + "; ".join(report.violations))
    state = initial_state(spec) if initial is None else initial
    if state.gauge != "physical":
        raise ValueError("run expects a physical-gauge initial state")
    if state.fields.shape != (spec.n_species, spec.grid.size):
        raise ValueError("initial state does not match the problem layout")
    _require_nonnegative(state)

    snapshots = [state]
    diags = [_diagnose(state, spec)]
    if cfg.t_end <= 0.0:
        return Trajectory(tuple(snapshots), tuple(diags))

    n_full = int(math.floor(cfg.t_end / cfg.dt + 1e-9))
    remainder = cfg.t_end - n_full * cfg.dt
    if remainder <= 1e-12 * cfg.dt:
        remainder = 0.0

    if spec.is_linear:
        A = assemble_system(spec)
        solver = _make_solver(A.matrix, A.n, cfg.dt, spec.grid.dim,
                              cfg.lin_tol, cfg.lin_maxiter)

        def advance(st: State, dt: float, t_next: float) -> State:
            if dt == cfg.dt:
                x = solver.solve(st.fields.ravel())
            else:
                x = _make_solver(A.matrix, A.n, dt, spec.grid.dim,
                                 cfg.lin_tol, cfg.lin_maxiter).solve(st.fields.ravel())
            return st.with_fields(x.reshape(st.fields.shape), t=t_next)
    else:
        operators = tuple(
            assemble_transport(spec.grid, sp.sigma, sp.potential, species=i)
            for i, sp in enumerate(spec.species)
        )
        solvers = [
            _make_solver(op.matrix, 1, cfg.dt, spec.grid.dim,
                         cfg.lin_tol, cfg.lin_maxiter)
            for op in operators
        ]

        def advance(st: State, dt: float, t_next: float) -> State:
            dt_max = imex_dt_max(st, spec)
            if dt > dt_max:
                raise StepSizeError(
                    f"dt={dt:g} exceeds the positivity bound dt_max={dt_max:g}",
                    dt_max=dt_max,
                )
            mid = _reaction_stage(st.fields, spec, dt)
            if dt == cfg.dt:
                rows = pmap(lambda i: solvers[i].solve(mid[i]), range(spec.n_species))
            else:
                extra = [
                    _make_solver(op.matrix, 1, dt, spec.grid.dim,
                                 cfg.lin_tol, cfg.lin_maxiter)
                    for op in operators
                ]
                rows = pmap(lambda i: extra[i].solve(mid[i]), range(spec.n_species))
            return st.with_fields(np.stack(rows), t=t_next)

    recorded_last = True
    for k in range(1, n_full + 1):
        t_next = k * cfg.dt
        try:
            state = advance(state, cfg.dt, t_next)
        except MotorfluxError as err:
            err.time = t_next
            raise
        recorded_last = k % cfg.stride == 0
        if recorded_last:
            snapshots.append(state)
            diags.append(_diagnose(state, spec))
    if remainder > 0.0:
        try:
            state = advance(state, remainder, cfg.t_end)
        except MotorfluxError as err:
            err.time = cfg.t_end
            raise
        snapshots.append(state)
        diags.append(_diagnose(state, spec))
    elif not recorded_last:
        snapshots.append(state)
        diags.append(_diagnose(state, spec))
    return Trajectory(tuple(snapshots), tuple(diags))
