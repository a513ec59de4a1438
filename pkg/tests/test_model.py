import numpy as np
import pytest
from hypothesis import given, strategies as st

from motorflux import (
    CouplingMatrix,
    Grid,
    PotentialSpec,
    ProblemSpec,
    ReactionSpec,
    SpeciesSpec,
    State,
    eval_potential,
    eval_reaction,
    initial_state,
    reaction_inverse,
    reaction_lipschitz,
    validate,
)
from motorflux.errors import OutOfDomainError, UnsupportedConfigurationError

from conftest import ZERO, symmetric_motor


class TestGrid:
    def test_interval_basics(self):
        g = Grid.interval(0.0, 2.0, 8)
        assert g.dim == 1
        assert g.h == (0.25,)
        assert g.size == 8
        assert g.volume == 2.0
        assert np.allclose(g.axis_centers(0), 0.125 + 0.25 * np.arange(8))
        assert len(g.axis_faces(0)) == 9

    def test_box_basics(self):
        g = Grid.box((0.0, -1.0), (1.0, 1.0), (4, 8))
        assert g.dim == 2
        assert g.size == 32
        assert g.cell_volume == pytest.approx(0.25 * 0.25)
        assert g.centers().shape == (32, 2)

    @pytest.mark.parametrize("dim", [1, 2])
    def test_cell_volumes_sum_to_domain_volume(self, dim):
        if dim == 1:
            g = Grid.interval(-0.3, 1.7, 97)
        else:
            g = Grid.box((0.0, 0.2), (1.1, 0.9), (13, 29))
        assert abs(g.size * g.cell_volume - g.volume) <= 1e-12 * g.volume

    def test_rejects_bad_geometry(self):
        with pytest.raises(ValueError):
            Grid.interval(0.0, 1.0, 1)
        with pytest.raises(ValueError):
            Grid.interval(1.0, 0.0, 4)
        with pytest.raises(ValueError):
            Grid((0.0,), (1.0,), (4, 4))


class TestPotentials:
    def test_zero_everywhere(self):
        g = Grid.interval(0.0, 1.0, 4)
        assert eval_potential(ZERO, 0.3, g) == 0.0
        assert np.all(eval_potential(ZERO, g.centers(), g) == 0.0)

    def test_linear_slope(self):
        g = Grid.interval(0.0, 1.0, 4)
        pot = PotentialSpec("linear", slope=2.0)
        assert eval_potential(pot, 0.5, g) == 1.0

    def test_cosine_at_origin(self):
        g = Grid.interval(0.0, 1.0, 4)
        pot = PotentialSpec("cosine", amplitude=1.0, period=1.0)
        assert eval_potential(pot, 0.0, g) == 1.0

    def test_tabulated_interpolates(self):
        g = Grid.interval(0.0, 1.0, 4)
        pot = PotentialSpec("tabulated", table_x=(0.0, 0.5, 1.0), table_v=(0.0, 1.0, 0.0))
        assert eval_potential(pot, 0.25, g) == pytest.approx(0.5)
        assert eval_potential(pot, 0.75, g) == pytest.approx(0.5)

    def test_sawtooth_is_finite_and_periodic(self):
        g = Grid.interval(0.0, 2.0, 16)
        pot = PotentialSpec("sawtooth_smoothed", amplitude=0.7, period=1.0)
        vals = eval_potential(pot, g.centers(), g)
        assert np.all(np.isfinite(vals))
        assert eval_potential(pot, 0.25, g) == pytest.approx(
            eval_potential(pot, 1.25, g), abs=1e-12)

    def test_out_of_domain_rejected(self):
        g = Grid.interval(0.0, 1.0, 4)
        with pytest.raises(OutOfDomainError):
            eval_potential(ZERO, 1.5, g)
        g2 = Grid.box((0.0, 0.0), (1.0, 1.0), (4, 4))
        with pytest.raises(OutOfDomainError):
            eval_potential(ZERO, np.array([0.5, -0.1]), g2)

    def test_2d_follows_axis(self):
        g = Grid.box((0.0, 0.0), (1.0, 1.0), (4, 4))
        pot = PotentialSpec("linear", slope=1.0, axis=1)
        assert eval_potential(pot, np.array([0.2, 0.7]), g) == pytest.approx(0.7)

    def test_unknown_kind_rejected(self):
        with pytest.raises(UnsupportedConfigurationError):
            PotentialSpec("quadratic")


class TestReactions:
    def test_linear_is_identity(self):
        assert eval_reaction(ReactionSpec("linear"), 3.5) == 3.5

    def test_power_vanishes_at_zero(self):
        assert eval_reaction(ReactionSpec("power", exponent=2.0), 0.0) == 0.0

    def test_square(self):
        assert eval_reaction(ReactionSpec("power", exponent=2.0), 3.0) == 9.0

    def test_negative_argument_rejected(self):
        with pytest.raises(OutOfDomainError):
            eval_reaction(ReactionSpec("linear"), -0.1)

    def test_inverse_roundtrip(self):
        r = ReactionSpec("power", exponent=3.0)
        assert reaction_inverse(r, eval_reaction(r, 1.7)) == pytest.approx(1.7)

    def test_lipschitz_bounds(self):
        assert reaction_lipschitz(ReactionSpec("linear"), 5.0) == 1.0
        assert reaction_lipschitz(ReactionSpec("power", exponent=2.0), 3.0) == 6.0
        assert reaction_lipschitz(ReactionSpec("power", exponent=2.0), 0.0) == 0.0

    @given(
        exponent=st.sampled_from([1.0, 1.5, 2.0, 3.0]),
        s1=st.floats(min_value=0.0, max_value=50.0),
        s2=st.floats(min_value=0.0, max_value=50.0),
    )
    def test_monotone_nondecreasing(self, exponent, s1, s2):
        r = ReactionSpec("power", exponent=exponent)
        lo, hi = min(s1, s2), max(s1, s2)
        assert eval_reaction(r, lo) <= eval_reaction(r, hi)


class TestValidate:
    def test_admissible_spec_passes(self):
        report = validate(symmetric_motor(16))
        assert report.ok
        assert report.violations == ()
        assert report.warnings == ()

    def test_column_sum_violation_names_h2(self):
        spec = symmetric_motor(16)
        bad = ProblemSpec(grid=spec.grid, species=spec.species,
                          coupling=CouplingMatrix([[-1.0, 0.0], [1.0, -1.0]]),
                          initial=spec.initial)
        report = validate(bad)
        assert not report.ok
        assert any("H2" in v and "column 2" in v for v in report.violations)

    def test_low_power_violation(self):
        spec = symmetric_motor(16)
        species = (SpeciesSpec(1.0, 1.0, ZERO, ReactionSpec("power", exponent=0.5)),
                   spec.species[1])
        report = validate(ProblemSpec(grid=spec.grid, species=species,
                                      coupling=spec.coupling, initial=spec.initial))
        assert any("H3" in v and "not admissible" in v for v in report.violations)

    def test_negative_sigma_and_alpha(self):
        spec = symmetric_motor(16)
        species = (SpeciesSpec(-1.0, 0.0, ZERO), spec.species[1])
        report = validate(ProblemSpec(grid=spec.grid, species=species,
                                      coupling=spec.coupling, initial=spec.initial))
        assert sum(v.startswith("H1") for v in report.violations) == 2

    def test_metzler_violation(self):
        spec = symmetric_motor(16)
        report = validate(ProblemSpec(
            grid=spec.grid, species=spec.species,
            coupling=CouplingMatrix([[1.0, -1.0], [-1.0, 1.0]]),
            initial=spec.initial))
        assert any("H2" in v and "diagonal" in v for v in report.violations)
        assert any("H2" in v and "off-diagonal" in v for v in report.violations)

    def test_negative_initial_data(self):
        spec = symmetric_motor(16)
        bad_init = (PotentialSpec("linear", slope=1.0, offset=-0.25), spec.initial[1])
        report = validate(ProblemSpec(grid=spec.grid, species=spec.species,
                                      coupling=spec.coupling, initial=bad_init))
        assert any("H4" in v and "negative" in v for v in report.violations)

    def test_idempotent(self):
        spec = symmetric_motor(16)
        assert validate(spec) == validate(spec)

    def test_disconnected_coupling_warns(self):
        spec = symmetric_motor(16)
        report = validate(ProblemSpec(
            grid=spec.grid, species=spec.species,
            coupling=CouplingMatrix([[-1.0, 0.0], [1.0, 0.0]]),
            initial=spec.initial))
        assert report.ok
        assert any("strongly connected" in w for w in report.warnings)

    def test_column_sums_recomputed_below_tolerance(self, rng):
        from conftest import random_coupling
        for n in (2, 3, 5):
            c = random_coupling(rng, n)
            assert np.abs(c.column_sums()).max() <= 1e-14


class TestState:
    def test_shape_checked(self):
        g = Grid.interval(0.0, 1.0, 8)
        with pytest.raises(ValueError):
            State(g, np.zeros((2, 5)))

    def test_fields_read_only(self):
        g = Grid.interval(0.0, 1.0, 8)
        s = State(g, np.ones((1, 8)))
        with pytest.raises(ValueError):
            s.fields[0, 0] = 2.0

    def test_nonfinite_fields_rejected(self):
        g = Grid.interval(0.0, 1.0, 8)
        bad = np.ones((1, 8))
        bad[0, 3] = np.nan
        with pytest.raises(ValueError):
            State(g, bad)

    def test_initial_state_samples_centers(self):
        spec = symmetric_motor(16)
        s = initial_state(spec)
        assert s.t == 0.0
        assert s.gauge == "physical"
        xs = spec.grid.centers()
        expected = 0.4 * np.cos(2 * np.pi * xs) + 1.0
        assert np.allclose(s.fields[0], expected, rtol=0, atol=1e-15)
