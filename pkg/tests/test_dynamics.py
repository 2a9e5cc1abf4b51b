import numpy as np
import pytest

from rhlab.dynamics import (
    SolverConfig,
    Stepper,
    read_diagnostics_csv,
    run,
    step_rk4,
    write_diagnostics_csv,
)
from rhlab.functionals import e_deg2, make_functional
from rhlab.harmonics import (
    E2Coeffs,
    SpectralField,
    e2_to_spectral,
    from_coeff_dict,
    norm_l2,
)
from rhlab.rh_waves import exact_state, make_rh
from tests.conftest import random_spectral


def rh_setup(L=12, alpha=0.7, omega=0.3):
    Y = e2_to_spectral(E2Coeffs(0.5, 0.3, 0.1, 0.2, 0.1), L)
    s = make_rh(omega, alpha, Y)
    return s, exact_state(s, 0.0)


class TestStepRK4:
    def test_zonal_state_is_fixed(self):
        L = 10
        zon = from_coeff_dict(L, {(1, 0): 1.0, (3, 0): 0.4})
        cfg = SolverConfig(L=L, omega=0.6, dt=1e-2, t_end=1.0)
        out = step_rk4(zon, cfg)
        assert np.abs(out.coeffs - zon.coeffs).max() < 1e-13

    def test_single_step_matches_closed_form(self):
        s, z0 = rh_setup(L=21, alpha=1.0, omega=0.5)
        cfg = SolverConfig(L=21, omega=0.5, dt=1e-3, t_end=1e-3)
        out = step_rk4(z0, cfg)
        exact = exact_state(s, 1e-3)
        assert np.abs(out.coeffs - exact.coeffs).max() < 1e-12

    def test_fourth_order_convergence(self):
        s, z0 = rh_setup(L=10, alpha=2.0, omega=-0.8)
        T = 0.64
        errs = []
        for dt in (0.08, 0.04, 0.02):
            cfg = SolverConfig(L=10, omega=s.omega, dt=dt, t_end=T)
            st = Stepper(cfg)
            z = z0
            for k in range(int(round(T / dt))):
                z = st.step(z)
            errs.append(norm_l2(SpectralField(10, z.coeffs - exact_state(s, T).coeffs)))
        r1 = errs[0] / errs[1]
        r2 = errs[1] / errs[2]
        assert 10.0 < r1 < 24.0
        assert 10.0 < r2 < 24.0

    def test_aborts_on_nonfinite(self):
        L = 6
        C = np.zeros((L + 1, L + 1), dtype=complex)
        C[0, 1] = np.inf
        cfg = SolverConfig(L=L, omega=0.0, dt=1e-2, t_end=1.0)
        with np.errstate(invalid="ignore"), pytest.raises(FloatingPointError, match="step"):
            Stepper(cfg).step(SpectralField(L, C), step_index=7)

    def test_rejects_nonzero_mean(self):
        c = from_coeff_dict(6, {(0, 0): 1.0})
        cfg = SolverConfig(L=6, omega=0.0, dt=1e-2, t_end=1.0)
        with pytest.raises(ValueError, match="zero-mean"):
            step_rk4(c, cfg)

    def test_filter_damps_top_degrees(self, rng):
        L = 8
        f = random_spectral(L, rng)
        cfg_off = SolverConfig(L=L, omega=0.0, dt=1e-3, t_end=1.0)
        cfg_on = SolverConfig(L=L, omega=0.0, dt=1e-3, t_end=1.0, filter_on=True)
        z_off = Stepper(cfg_off).step(f)
        z_on = Stepper(cfg_on).step(f)
        assert abs(z_on.coeffs[0, L]) < abs(z_off.coeffs[0, L])


class TestRun:
    def test_records_cover_endpoints(self, rng):
        L = 8
        z0 = random_spectral(L, rng, max_degree=4)
        cfg = SolverConfig(L=L, omega=0.2, dt=1e-2, t_end=0.1, diag_every=3)
        _, recs = run(z0, cfg)
        assert recs[0].t == 0.0
        assert recs[-1].t == pytest.approx(0.1)

    def test_energy_and_phase_conservation_short(self, rng):
        L = 10
        z0 = random_spectral(L, rng, max_degree=5)
        z0 = SpectralField(L, 0.3 * z0.coeffs / norm_l2(z0))
        cfg = SolverConfig(L=L, omega=0.4, dt=1e-3, t_end=1.0, diag_every=250)
        _, recs = run(z0, cfg)
        e0 = recs[0].energy_proxy
        c0 = np.asarray(recs[0].c1)
        for r in recs:
            assert abs(r.energy_proxy - e0) < 1e-10 * abs(e0)
            assert np.max(np.abs(np.asarray(r.c1) - c0)) < 1e-10

    def test_result_independent_of_diag_interval(self, rng):
        L = 8
        z0 = random_spectral(L, rng, max_degree=4)
        cfg1 = SolverConfig(L=L, omega=0.1, dt=1e-2, t_end=0.2, diag_every=1)
        cfg2 = SolverConfig(L=L, omega=0.1, dt=1e-2, t_end=0.2, diag_every=7)
        z1, _ = run(z0, cfg1)
        z2, _ = run(z0, cfg2)
        assert np.array_equal(z1.coeffs, z2.coeffs)

    def test_functional_registry_names_in_records(self, rng):
        L = 8
        z0 = random_spectral(L, rng, max_degree=3)
        cfg = SolverConfig(L=L, omega=0.0, dt=1e-2, t_end=0.05, diag_every=5)
        fns = [("arnold1", make_functional("arnold1", omega=0.0)),
               ("e_deg2[alpha=1.0]", make_functional("e_deg2[alpha=1.0]"))]
        _, recs = run(z0, cfg, functionals=fns)
        assert set(recs[0].functional_values) == {"arnold1", "e_deg2[alpha=1.0]"}


class TestPrescribedStream:
    def test_breaks_degree_two_functional(self):
        # transport by a degree-3 stream moves the state off the
        # maximizing set, so the functional must move by a visible amount
        L = 12
        _, z0 = rh_setup(L=L, alpha=1.0, omega=0.0)
        chi = from_coeff_dict(L, {(3, 1): 1.0 / np.sqrt(2.0)})
        cfg = SolverConfig(L=L, omega=0.0, dt=1e-3, t_end=1.0, stream=chi)
        st = Stepper(cfg)
        z = z0
        for k in range(1000):
            z = st.step(z)
        assert abs(e_deg2(z, 1.0) - e_deg2(z0, 1.0)) > 1e-4

    def test_quadratic_invariant_survives_prescribed_transport(self):
        L = 12
        _, z0 = rh_setup(L=L, alpha=1.0, omega=0.0)
        chi = from_coeff_dict(L, {(3, 1): 1.0 / np.sqrt(2.0)})
        cfg = SolverConfig(L=L, omega=0.0, dt=1e-3, t_end=0.5, stream=chi)
        st = Stepper(cfg)
        z = z0
        for k in range(500):
            z = st.step(z)
        assert norm_l2(z) == pytest.approx(norm_l2(z0), rel=1e-10)


class TestDiagnosticsCSV:
    def test_roundtrip(self, rng, tmp_path):
        L = 8
        z0 = random_spectral(L, rng, max_degree=4)
        cfg = SolverConfig(L=L, omega=0.3, dt=1e-2, t_end=0.05, diag_every=2)
        fns = [("arnold1", make_functional("arnold1", omega=0.3))]
        _, recs = run(z0, cfg, functionals=fns)
        path = tmp_path / "diag.csv"
        write_diagnostics_csv(recs, ["arnold1"], path, comments=["seed=0"])
        header, rows, comments = read_diagnostics_csv(path)
        assert header[:2] == ["t", "energy_proxy"]
        assert header[-1] == "arnold1"
        assert comments == ["seed=0"]
        assert len(rows) == len(recs)
        assert rows[0][1] == recs[0].energy_proxy
        assert rows[-1][0] == recs[-1].t

    def test_header_schema(self, tmp_path):
        from rhlab.dynamics import CSV_BASE_HEADER

        assert CSV_BASE_HEADER == [
            "t", "energy_proxy", "I2", "I3", "I4", "I5", "I6", "I7",
            "c1m_re", "c1m_im", "c10", "c1p_re", "c1p_im",
        ]
