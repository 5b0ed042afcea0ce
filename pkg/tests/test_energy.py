import numpy as np
import pytest
from math import factorial

from hyposym import (
    DomainError,
    SolverConfig,
    direct_integrate,
    energy_inequality_check,
    growth_fit,
    integral_K_sweep,
    reduced_integrate,
    sandwich_constant,
    solve_cauchy_1d,
    transform_initial_data,
)
from hyposym.energy import oracle_gap, reweight_energy
from hyposym.examples import builtin_system
from hyposym.symbols import SystemSymbol, bracket, eval_symbol
from hyposym.quasisym import verify_properties


def constant_symbol(M, horizon=1.0):
    M = np.asarray(M, dtype=float)
    coeffs = np.zeros((1, M.shape[0], M.shape[0], 1))
    coeffs[..., 0] = M
    return SystemSymbol(coeffs=coeffs, horizon=horizon)


def expm(M):
    vals, vecs = np.linalg.eig(M)
    return (vecs * np.exp(vals)) @ np.linalg.inv(vecs)


class TestDirectIntegrate:
    def test_zero_symbol_constant_solution(self):
        S = constant_symbol(np.zeros((2, 2)))
        ts, traj = direct_integrate(S, np.array([3.0]), np.array([1.0, -2.0j]),
                                    SolverConfig(t_step=1e-2))
        np.testing.assert_allclose(traj[-1], traj[0], atol=1e-14)

    def test_matrix_exponential_closed_form(self):
        S = builtin_system("m2-wave")
        xi = np.array([2.0])
        u0 = np.array([1.0, 0.25 - 0.5j])
        ts, traj = direct_integrate(S, xi, u0, SolverConfig(t_step=1e-3))
        A = eval_symbol(S, 0.0, xi)
        for idx in (len(ts) // 2, len(ts) - 1):
            exact = expm(1j * ts[idx] * A) @ u0
            np.testing.assert_allclose(traj[idx], exact, atol=1e-10)

    def test_rotation_grows_like_cosh(self):
        S = builtin_system("m2-nonhyp-control")
        xi = np.array([5.0])
        u0 = np.array([1.0, 1.0]) / np.sqrt(2)
        ts, traj = direct_integrate(S, xi, u0, SolverConfig())
        A = eval_symbol(S, 0.0, xi)
        exact = expm(1j * ts[-1] * A) @ u0
        np.testing.assert_allclose(traj[-1], exact, rtol=1e-6)
        # exp(i t A xi) has modes exp(+-xi t): growth rate xi up to a
        # data-dependent O(1) offset
        assert np.log(np.linalg.norm(traj[-1])) == pytest.approx(
            5.0 * S.horizon + np.log(np.linalg.norm(u0) / np.sqrt(2)), rel=0.05
        )

    def test_step_guard(self):
        S = builtin_system("m2-wave")
        with pytest.raises(DomainError):
            direct_integrate(S, np.array([100.0]), np.array([1.0, 0.0]),
                             SolverConfig(t_step=0.01))


class TestReducedIntegrate:
    def test_zero_state_stays_zero(self):
        S = builtin_system("m2-glaeser")
        trace = reduced_integrate(S, np.array([4.0]), np.zeros(4), SolverConfig())
        assert np.all(trace.V == 0.0)
        assert np.all(trace.E == 0.0)
        assert np.all(trace.K == 0.0)

    def test_oracle_consistency_examples(self):
        cfg = SolverConfig(t_step=1e-3)
        xi = np.array([np.sqrt(99.0)])  # bracket = 10
        assert oracle_gap(builtin_system("m2-glaeser"), xi, np.array([1.0, 1.0]), cfg) <= 1e-6
        assert oracle_gap(builtin_system("m3-tracezero"), xi,
                          np.array([1.0, 0.5, -0.25]), cfg) <= 1e-6

    def test_oracle_convergence_order(self):
        S = builtin_system("m2-glaeser")
        xi = np.array([np.sqrt(99.0)])
        u0 = np.array([1.0, 1.0])
        gaps = [oracle_gap(S, xi, u0, SolverConfig(t_step=h)) for h in (4e-3, 1e-3)]
        order = np.log(gaps[0] / gaps[1]) / np.log(4.0)
        assert order >= 3.5

    def test_constant_hyperbolic_energy_bounded(self):
        S = builtin_system("m2-wave")
        xi = np.array([20.0])
        u0 = np.array([1.0, 0.5])
        V0 = transform_initial_data(S, u0, xi).V
        trace = reduced_integrate(S, xi, V0, SolverConfig())
        lam = np.array([-1.0, 1.0]) * (20.0 / bracket(20.0))
        C_comm = verify_properties(lam, trace.eps).commutator_constant
        kappa0 = np.exp(C_comm * trace.eps * bracket(xi) * S.horizon)
        ratio = trace.E / trace.E[0]
        assert ratio.max() <= kappa0 * (1 + 1e-6)
        assert ratio.min() >= 1.0 / kappa0 * (1 - 1e-6)

    def test_coercivity_along_trajectory(self):
        for name in ("m2-glaeser", "m3-tracezero"):
            S = builtin_system(name)
            xi = np.array([30.0])
            V0 = transform_initial_data(S, np.ones(S.m), xi).V
            trace = reduced_integrate(S, xi, V0, SolverConfig())
            m = S.m
            lower = trace.eps ** (2 * (m - 1)) / trace.coercivity_sup
            norms = np.linalg.norm(trace.V, axis=1) ** 2
            assert np.all(trace.E >= lower * norms * (1 - 1e-9))
            assert np.all(trace.E >= 0.0)

    def test_third_term_bound_with_sandwich_constant(self):
        S = builtin_system("m2-glaeser")
        xi = np.array([100.0])
        V0 = transform_initial_data(S, np.ones(2), xi).V
        trace = reduced_integrate(S, xi, V0, SolverConfig())
        m = S.m
        sw = max(sandwich_constant(S, t, xi)[0] for t in trace.ts[:: len(trace.ts) // 40])
        C3 = 2.0 * factorial(m - 1) * sw
        assert np.all(trace.term3 <= C3 * trace.E * (1 + 1e-6) + 1e-12)

    def test_invalid_state_length(self):
        with pytest.raises(DomainError):
            reduced_integrate(builtin_system("m2-wave"), np.array([1.0]), np.zeros(3),
                              SolverConfig())

    def test_overflow_aborts_without_renormalisation(self):
        from hyposym.errors import NumericError

        S = builtin_system("m2-nonhyp-control")
        xi = np.array([1000.0])
        V0 = transform_initial_data(S, np.ones(2), xi).V
        with pytest.raises(NumericError):
            reduced_integrate(S, xi, V0, SolverConfig(), collect_energy=False)
        # with renormalisation the same run finishes and reports the growth
        trace = reduced_integrate(S, xi, V0, SolverConfig(renormalize=True),
                                  collect_energy=False)
        assert trace.growth_log == pytest.approx(1000.0, rel=0.05)


class TestEnergyInequality:
    @staticmethod
    def traces_for(name, xi_values, renorm=False):
        S = builtin_system(name)
        cfg = SolverConfig(renormalize=renorm)
        out = []
        for xi_mag in xi_values:
            xi = np.array([xi_mag])
            V0 = transform_initial_data(S, np.ones(S.m) / np.sqrt(S.m), xi).V
            out.append(reduced_integrate(S, xi, V0, cfg))
        return out

    def test_constant_coefficients_reduce_to_commutator_term(self):
        S = builtin_system("m2-wave")
        xi = np.array([10.0])
        V0 = transform_initial_data(S, np.ones(2), xi).V
        trace = reduced_integrate(S, xi, V0, SolverConfig())
        assert np.abs(trace.K).max() <= 1e-8
        assert np.abs(trace.term3).max() <= 1e-12
        # dtE then carries only the commutator term plus RK4 energy drift
        N, h = SolverConfig().steps_for(S, xi)
        omega = bracket(xi)
        drift = trace.E.max() * omega * (omega * h) ** 4
        assert np.all(np.abs(trace.dtE) <= trace.term2.max() * 1.05 + drift)
        rep = energy_inequality_check([trace])
        assert rep.passed

    def test_glaeser_passes_and_control_fails(self):
        good = energy_inequality_check(self.traces_for("m2-glaeser", (10.0, 100.0, 1000.0)))
        assert good.passed
        assert all(m <= 0 for m in good.margins)
        bad = energy_inequality_check(self.traces_for("m2-nonhyp-control",
                                                      (10.0, 100.0, 1000.0), renorm=True))
        assert not bad.passed
        assert bad.margins[-1] > 0

    def test_zero_trace_no_residual(self):
        S = builtin_system("m2-wave")
        trace = reduced_integrate(S, np.array([5.0]), np.zeros(4), SolverConfig())
        rep = energy_inequality_check([trace])
        assert rep.passed
        assert rep.margins == (0.0,)

    def test_missing_diagnostics_rejected(self):
        S = builtin_system("m2-wave")
        trace = reduced_integrate(S, np.array([5.0]), np.zeros(4), SolverConfig(),
                                  collect_energy=False)
        with pytest.raises(DomainError):
            energy_inequality_check([trace])


class TestIntegralKSweep:
    def test_reweight_reuses_trajectory(self):
        S = builtin_system("m2-glaeser")
        xi = np.array([10.0])
        V0 = transform_initial_data(S, np.ones(2), xi).V
        base = reduced_integrate(S, xi, V0, SolverConfig())
        re = reweight_energy(base, S, 0.5)
        np.testing.assert_array_equal(re.V, base.V)
        assert re.eps == 0.5

    def test_upper_bound_direction_holds(self):
        # int K <= C1 eps^{-2(m-1)/k} with C1 calibrated at the largest eps.
        S = builtin_system("m2-glaeser")
        rep = integral_K_sweep(S, np.array([10.0]), (1e-1, 1e-2, 1e-3), SolverConfig())
        C1 = rep.C1_values[0]
        for eps, val in zip(rep.eps_values, rep.K_integrals):
            assert val <= C1 * eps ** rep.theoretical_exponent * (1 + 1e-9)

    def test_integral_stable_under_grid_refinement(self):
        S = builtin_system("m2-glaeser")
        vals = []
        for h in (4e-4, 2e-4):
            rep = integral_K_sweep(S, np.array([100.0]), (1e-2,), SolverConfig(t_step=h))
            vals.append(rep.K_integrals[0])
        assert vals[0] == pytest.approx(vals[1], rel=1e-5)


class TestGrowthFit:
    def test_constant_hyperbolic_is_polynomial_and_flat(self):
        S = builtin_system("m2-wave")
        cfg = SolverConfig(xi_grid=tuple(np.geomspace(10, 1000, 5)))
        rep = growth_fit(S, cfg)
        assert rep.classification == "polynomial"
        assert abs(rep.kappa) <= 0.1

    def test_control_exponential_rate(self):
        S = builtin_system("m2-nonhyp-control")
        cfg = SolverConfig(xi_grid=tuple(np.geomspace(10, 1000, 5)))
        rep = growth_fit(S, cfg)
        assert rep.classification == "exponential"
        assert rep.rate == pytest.approx(S.horizon, rel=0.1)

    def test_insufficient_grid(self):
        S = builtin_system("m2-wave")
        with pytest.raises(DomainError):
            growth_fit(S, SolverConfig(xi_grid=(10.0, 20.0, 30.0)))
        with pytest.raises(DomainError):
            growth_fit(S, SolverConfig(xi_grid=(10.0, 1000.0)))


class TestSolveCauchy1d:
    def test_transport_diagonal(self):
        c = 0.7
        S = constant_symbol(np.diag([c, c]))
        n = 128
        x = 2 * np.pi * np.arange(n) / n
        u0 = np.stack([np.exp(1j * x), np.cos(2 * x)]).astype(complex)
        field = solve_cauchy_1d(S, u0, SolverConfig(), [1.0])
        t = field.snapshot_ts[0]
        exact = np.stack([np.exp(1j * (x + c * t)), np.cos(2 * (x + c * t))])
        np.testing.assert_allclose(field.fields[0], exact, atol=1e-7)

    def test_zero_data(self):
        S = builtin_system("m2-wave")
        u0 = np.zeros((2, 64), dtype=complex)
        field = solve_cauchy_1d(S, u0, SolverConfig(), [0.5])
        assert np.abs(field.fields).max() == 0.0

    def test_dalembert_wave(self):
        S = builtin_system("m2-wave")
        n = 256
        x = 2 * np.pi * np.arange(n) / n
        u0 = np.stack([np.cos(x), 0.5 * np.sin(2 * x)]).astype(complex)
        field = solve_cauchy_1d(S, u0, SolverConfig(), [0.5, 1.0])
        u0h = np.fft.fft(u0, axis=1)
        k = np.fft.fftfreq(n, d=1.0 / n)
        for s, t in enumerate(field.snapshot_ts):
            wp = np.fft.ifft((u0h[0] + u0h[1]) * np.exp(1j * k * t))
            wm = np.fft.ifft((u0h[0] - u0h[1]) * np.exp(-1j * k * t))
            exact = np.stack([(wp + wm) / 2.0, (wp - wm) / 2.0])
            err = np.abs(field.fields[s] - exact).max() / np.abs(exact).max()
            assert err <= 1e-6

    def test_time_varying_path(self):
        S = builtin_system("m2-glaeser")
        n = 16
        x = 2 * np.pi * np.arange(n) / n
        u0 = np.stack([np.exp(1j * x), np.zeros(n)]).astype(complex)
        field = solve_cauchy_1d(S, u0, SolverConfig(), [1.0])
        # compare against the per-mode direct oracle
        u0h = np.fft.fft(u0, axis=1)
        k = np.fft.fftfreq(n, d=1.0 / n)
        cfg = SolverConfig(t_step=field.snapshot_ts[-1] / round(1.0 / 0.05 * bracket(8.0)))
        exact_h = np.zeros((2, n), dtype=complex)
        N, h = SolverConfig().steps_for(S, np.array([8.0]))
        for q in range(n):
            ts, traj = direct_integrate(S, np.array([k[q]]), u0h[:, q], SolverConfig(t_step=h))
            exact_h[:, q] = traj[-1]
        exact = np.fft.ifft(exact_h, axis=1)
        np.testing.assert_allclose(field.fields[0], exact, atol=1e-8)

    def test_grid_validation(self):
        S = builtin_system("m2-wave")
        with pytest.raises(DomainError):
            solve_cauchy_1d(S, np.zeros((2, 100), dtype=complex), SolverConfig(), [0.5])
        with pytest.raises(DomainError):
            solve_cauchy_1d(S, np.zeros((3, 64), dtype=complex), SolverConfig(), [0.5])


class TestSolverConfig:
    def test_eps_policies(self):
        cfg = SolverConfig(eps_policy=("fixed", 0.25))
        assert cfg.eps_for(2, 100.0) == 0.25
        cfg = SolverConfig(eps_policy=("inverse",))
        assert cfg.eps_for(2, 3.0) == pytest.approx(1.0 / bracket(3.0))
        cfg = SolverConfig(eps_policy=("balanced", 2))
        assert cfg.eps_for(2, 3.0) == pytest.approx(bracket(3.0) ** (-0.5))

    def test_policy_validation(self):
        with pytest.raises(DomainError):
            SolverConfig(eps_policy=("fixed", 2.0))
        with pytest.raises(DomainError):
            SolverConfig(eps_policy=("mystery",))
        with pytest.raises(DomainError):
            SolverConfig(t_step=-1.0)

    def test_eps_stays_in_unit_interval(self):
        cfg = SolverConfig(eps_policy=("balanced", 2))
        for xi in (0.0, 1.0, 1e4):
            assert 0.0 < cfg.eps_for(3, xi) <= 1.0
