import numpy as np
import pytest

from motorflux import (
    Grid,
    PotentialSpec,
    ProblemSpec,
    SpeciesSpec,
    CouplingMatrix,
    State,
    StepConfig,
    assemble_system,
    assemble_transport,
    imex_dt_max,
    initial_state,
    oracle_expm,
    run,
    step_imex,
    step_linear_implicit,
    weighted_l1_distance,
    weighted_mass,
)
from motorflux.errors import ConfigError, SolverError, StepSizeError

from conftest import (
    ZERO,
    random_problem,
    reversible_problem,
    smooth_state,
    symmetric_motor,
)


def transports_for(spec):
    return tuple(
        assemble_transport(spec.grid, sp.sigma, sp.potential, species=i)
        for i, sp in enumerate(spec.species)
    )


class TestStepConfig:
    def test_rejects_bad_values(self):
        with pytest.raises(ConfigError):
            StepConfig(dt=0.0, t_end=1.0)
        with pytest.raises(ConfigError):
            StepConfig(dt=0.1, t_end=-1.0)
        with pytest.raises(ConfigError):
            StepConfig(dt=0.1, t_end=1.0, stride=0)


class TestLinearStep:
    def test_constant_state_is_fixed(self):
        g = Grid.interval(0.0, 1.0, 16)
        spec = ProblemSpec(grid=g, species=(SpeciesSpec(1.0, 1.0, ZERO),),
                           coupling=CouplingMatrix([[0.0]]),
                           initial=(PotentialSpec("linear", offset=1.0),))
        A = assemble_system(spec)
        u = initial_state(spec)
        out = step_linear_implicit(u, A, 0.1)
        assert np.abs(out.fields - u.fields).max() <= 1e-14

    def test_mass_preserved_over_100_steps(self, rng):
        spec = random_problem(rng, n=3, cells=32)
        A = assemble_system(spec)
        u = initial_state(spec)
        m0 = weighted_mass(u, spec)
        for _ in range(100):
            u = step_linear_implicit(u, A, 0.01)
        assert abs(weighted_mass(u, spec) - m0) / m0 <= 1e-11

    def test_positivity_preserved(self, rng):
        spec = random_problem(rng, n=2, cells=32)
        A = assemble_system(spec)
        u = initial_state(spec)
        for dt in (0.01, 0.1, 1.0, 10.0):
            out = step_linear_implicit(u, A, dt)
            assert out.fields.min() >= -1e-13

    def test_first_order_against_exponential(self, rng):
        spec = random_problem(rng, n=2, cells=2)
        A = assemble_system(spec)
        u0 = initial_state(spec)
        t = 0.4
        ref = oracle_expm(A, t, u0)
        errs = []
        for dt in (0.1, 0.05, 0.025):
            u = u0
            for k in range(round(t / dt)):
                u = step_linear_implicit(u, A, dt)
            errs.append(weighted_l1_distance(u, ref, spec))
        order = np.polyfit(np.log([0.1, 0.05, 0.025]), np.log(errs), 1)[0]
        assert order >= 0.9

    def test_negative_state_rejected(self):
        spec = symmetric_motor(8)
        A = assemble_system(spec)
        bad = State(spec.grid, -np.ones((2, 8)))
        with pytest.raises(ValueError):
            step_linear_implicit(bad, A, 0.1)

    def test_comparison_preserved_by_m_matrix(self, rng):
        spec = random_problem(rng, n=2, cells=32)
        A = assemble_system(spec)
        low = smooth_state(spec, rng)
        high = low.with_fields(low.fields + rng.uniform(0.0, 0.5, low.fields.shape))
        for _ in range(20):
            low = step_linear_implicit(low, A, 0.05)
            high = step_linear_implicit(high, A, 0.05)
            assert (low.fields <= high.fields + 1e-12).all()


class TestImexStep:
    def test_reversible_constant_pair_is_fixed_point(self):
        spec = reversible_problem(cells=24, p=2.0)
        # (a, b) = (1, 1) balances u^2 <-> v
        u = State(spec.grid, np.ones((2, spec.grid.size)))
        out = step_imex(u, spec, transports_for(spec), 0.1)
        assert np.abs(out.fields - u.fields).max() <= 1e-13

    def test_zero_state_stays_zero(self):
        spec = reversible_problem(cells=16)
        u = State(spec.grid, np.zeros((2, spec.grid.size)))
        out = step_imex(u, spec, transports_for(spec), 0.1)
        assert np.array_equal(out.fields, np.zeros_like(out.fields))

    def test_reaction_stage_conserves_mass(self, rng):
        spec = random_problem(rng, n=2, cells=32, linear=False)
        u = smooth_state(spec, rng)
        m0 = weighted_mass(u, spec)
        dt = 0.5 * imex_dt_max(u, spec)
        out = step_imex(u, spec, transports_for(spec), dt)
        assert abs(weighted_mass(out, spec) - m0) <= 1e-13 * max(1.0, m0)

    def test_dt_bound_value_and_error(self):
        spec = reversible_problem(cells=16, p=2.0)
        u = State(spec.grid, np.full((2, spec.grid.size), 2.0))
        # L = p * max(u)^(p-1) = 2*2 = 4, alpha=|lam_ii|=1 -> dt_max = 0.25
        assert imex_dt_max(u, spec) == pytest.approx(0.25)
        with pytest.raises(StepSizeError) as exc_info:
            step_imex(u, spec, transports_for(spec), 0.3)
        assert exc_info.value.dt_max == pytest.approx(0.25)

    def test_positivity_under_bound(self, rng):
        spec = random_problem(rng, n=2, cells=32, linear=False)
        u = smooth_state(spec, rng)
        ops = transports_for(spec)
        for _ in range(50):
            dt = 0.5 * imex_dt_max(u, spec)
            u = step_imex(u, spec, ops, dt)
            assert u.fields.min() >= -1e-13


class TestRun:
    def test_t_end_zero_returns_initial_only(self):
        spec = symmetric_motor(16)
        traj = run(spec, StepConfig(dt=0.1, t_end=0.0))
        assert len(traj.states) == 1
        assert traj.times == (0.0,)

    def test_snapshot_counting(self):
        spec = symmetric_motor(16)
        traj = run(spec, StepConfig(dt=0.01, t_end=1.0, stride=10))
        assert len(traj.states) == 11
        assert traj.times[-1] == pytest.approx(1.0)

    def test_partial_final_step(self):
        spec = symmetric_motor(16)
        traj = run(spec, StepConfig(dt=0.1, t_end=0.25, stride=1))
        assert traj.times == pytest.approx((0.0, 0.1, 0.2, 0.25))

    def test_final_state_always_recorded(self):
        spec = symmetric_motor(16)
        traj = run(spec, StepConfig(dt=0.01, t_end=0.05, stride=10))
        assert traj.times[-1] == pytest.approx(0.05)

    def test_zero_potential_motor_reaches_constant_state(self):
        spec = symmetric_motor(64)
        traj = run(spec, StepConfig(dt=0.05, t_end=50.0, stride=200))
        m0 = traj.diagnostics[0].weighted_mass
        c = m0 / (2.0 * spec.grid.volume)
        assert np.abs(traj.final.fields - c).max() <= 1e-8

    def test_diagnostics_consistent_with_states(self, rng):
        spec = random_problem(rng, n=2, cells=16)
        traj = run(spec, StepConfig(dt=0.05, t_end=0.5, stride=2))
        vol = spec.grid.cell_volume
        for state, diag in zip(traj.states, traj.diagnostics):
            assert diag.time == state.t
            mass = float(np.sum(vol * state.fields.sum(axis=1) / spec.alphas))
            assert abs(diag.weighted_mass - mass) <= 1e-13 * max(1.0, abs(mass))
            assert diag.species_min == tuple(state.fields.min(axis=1))

    def test_deterministic_and_composable(self, rng):
        spec = random_problem(rng, n=2, cells=32)
        cfg = StepConfig(dt=0.05, t_end=0.1, stride=1)
        t1 = run(spec, cfg)
        t2 = run(spec, cfg)
        assert np.array_equal(t1.final.fields, t2.final.fields)
        A = assemble_system(spec)
        manual = step_linear_implicit(
            step_linear_implicit(initial_state(spec), A, 0.05), A, 0.05)
        assert np.array_equal(t1.final.fields, manual.fields)

    def test_invalid_spec_rejected(self):
        spec = symmetric_motor(8)
        bad = ProblemSpec(grid=spec.grid, species=spec.species,
                          coupling=CouplingMatrix([[-1.0, 0.5], [1.0, -0.5]]),
                          initial=(PotentialSpec("linear", slope=1.0, offset=-2.0),
                                   spec.initial[1]))
        with pytest.raises(ConfigError):
            run(bad, StepConfig(dt=0.1, t_end=1.0))

    def test_imex_run_dispatch_and_positivity(self):
        spec = reversible_problem(cells=32, p=2.0)
        traj = run(spec, StepConfig(dt=0.05, t_end=2.0, stride=5))
        for diag in traj.diagnostics:
            assert min(diag.species_min) >= -1e-13
        m = [d.weighted_mass for d in traj.diagnostics]
        assert max(abs(x - m[0]) for x in m) / m[0] <= 1e-11

    def test_step_error_carries_failing_time(self):
        spec = reversible_problem(cells=16, p=3.0, mass_each=1.5)
        with pytest.raises(StepSizeError) as exc_info:
            run(spec, StepConfig(dt=0.5, t_end=2.0))
        assert exc_info.value.time == pytest.approx(0.5)

    def test_2d_run_conserves_mass(self, rng):
        spec = random_problem(rng, n=2, cells=12, dim=2)
        traj = run(spec, StepConfig(dt=0.02, t_end=0.2, lin_tol=1e-13))
        m = [d.weighted_mass for d in traj.diagnostics]
        assert max(abs(x - m[0]) for x in m) / m[0] <= 1e-10
        assert min(min(d.species_min) for d in traj.diagnostics) >= -1e-11

    def test_2d_solver_failure_raises(self, rng):
        spec = random_problem(rng, n=2, cells=16, dim=2)
        with pytest.raises(SolverError):
            run(spec, StepConfig(dt=5.0, t_end=5.0, lin_tol=1e-14, lin_maxiter=2))
