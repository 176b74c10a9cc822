import numpy as np
import pytest

from greenkubo import (DEFAULT_J3, ParameterDomainError, build_basis, build_genou,
                       build_gle, build_magnetic, build_ou, diffusion_tensor,
                       directional_coefficient, gle_subdiffusion_sweep,
                       green_kubo_analytic, solve_galerkin,
                       solve_linear_ansatz)
from greenkubo.poisson import tensor_to_dict

from helpers import green_kubo_quadrature_oracle, rng


class TestLinearAnsatz:
    def test_ou_solution(self):
        gamma = 2.5
        phi = solve_linear_ansatz(build_ou(gamma, 1.0))
        np.testing.assert_allclose(phi.C, [[1.0 / gamma]], atol=1e-14)
        assert phi.residual <= 1e-14

    def test_magnetic_solution(self):
        omega, nu = 1.3, 0.8
        phi = solve_linear_ansatz(build_magnetic(omega, nu, 1.0))
        den = nu**2 + omega**2
        np.testing.assert_allclose(phi.C[0], [nu / den, omega / den, 0.0], atol=1e-13)
        np.testing.assert_allclose(phi.C[1], [-omega / den, nu / den, 0.0], atol=1e-13)
        np.testing.assert_allclose(phi.C[2], [0.0, 0.0, 1.0 / nu], atol=1e-13)

    def test_gle_momentum_coefficient(self):
        lam = np.array([1.0, 0.5])
        alp = np.array([2.0, 1.0])
        phi = solve_linear_ansatz(build_gle(lam, alp, 1.0))
        mass = np.sum(lam**2 / alp)
        assert phi.C[0, 0] == pytest.approx(1.0 / mass, abs=1e-13)
        np.testing.assert_allclose(phi.C[0, 1:], (lam / alp) / mass, atol=1e-13)


class TestGalerkin:
    def test_ou_single_coefficient(self):
        m = build_ou(1.0, 1.0)
        b = build_basis(1, 5, 1.0)
        phi = solve_galerkin(m, b)
        expected = np.zeros(b.size)
        expected[1] = 1.0
        np.testing.assert_allclose(phi.coeffs[0], expected, atol=1e-12)
        assert phi.residual <= 1e-12

    def test_matches_linear_ansatz_for_linear_observable(self):
        m = build_genou(DEFAULT_J3, 1.0, 1.0, 1.0)
        b = build_basis(3, 3, 1.0)
        galerkin = solve_galerkin(m, b)
        ansatz = solve_linear_ansatz(m)
        degree1 = slice(1, 4)
        np.testing.assert_allclose(galerkin.coeffs[:, degree1], ansatz.C, atol=1e-10)
        assert np.abs(galerkin.coeffs[:, 4:]).max() <= 1e-10

    def test_constant_observable_rejected(self):
        m = build_ou(1.0, 1.0)
        b = build_basis(1, 3, 1.0)
        vc = np.zeros((1, b.size))
        vc[0, 0] = 1.0
        with pytest.raises(ParameterDomainError):
            solve_galerkin(m, b, vc)

    def test_galerkin_tensor_equals_ansatz_tensor(self):
        m = build_gle([1.0, 1.0], [1.0, 2.0], 1.0)
        b = build_basis(3, 3, 1.0)
        d_galerkin = diffusion_tensor(m, solve_galerkin(m, b)).D
        d_ansatz = diffusion_tensor(m, solve_linear_ansatz(m)).D
        np.testing.assert_allclose(d_galerkin, d_ansatz, atol=1e-12)


class TestDiffusionTensor:
    def test_einstein_formula(self):
        r = rng(21)
        for _ in range(10):
            gamma, beta = r.uniform(0.1, 10, 2)
            m = build_ou(gamma, beta)
            t = diffusion_tensor(m, solve_linear_ansatz(m))
            assert t.D[0, 0] == pytest.approx(1.0 / (gamma * beta), rel=1e-13)
            assert t.route == "poisson"

    def test_magnetic_tensor_values(self):
        m = build_magnetic(1.0, 1.0, 1.0)
        t = diffusion_tensor(m, solve_linear_ansatz(m))
        assert t.D[0, 0] == pytest.approx(0.5, abs=1e-13)
        assert t.D[2, 2] == pytest.approx(1.0, abs=1e-13)
        assert t.D[0, 1] == pytest.approx(0.5, abs=1e-13)
        assert t.D[1, 0] == pytest.approx(-0.5, abs=1e-13)

    def test_gle_value(self):
        m = build_gle([1.0, 1.0], [1.0, 2.0], 1.0)
        t = diffusion_tensor(m, solve_linear_ansatz(m))
        assert t.D[0, 0] == pytest.approx(2.0 / 3.0, abs=1e-13)

    def test_matches_analytic_green_kubo(self):
        r = rng(22)
        models = [build_ou(1.3, 0.9), build_magnetic(2.0, 0.7, 1.1),
                  build_gle([0.8, 1.1], [1.0, 0.5], 1.4),
                  build_genou(DEFAULT_J3, r.uniform(-1, 1), 0.9, 1.2)]
        for m in models:
            d_poisson = diffusion_tensor(m, solve_linear_ansatz(m)).D
            d_analytic = green_kubo_analytic(m).D
            np.testing.assert_allclose(d_poisson, d_analytic, atol=1e-10,
                                       err_msg=f"model {m.label}")

    def test_matches_quadrature_oracle(self):
        # fully independent route: adaptive quadrature of M e^{Bt} Sigma M^T
        for m in (build_magnetic(1.0, 1.0, 1.0), build_genou(DEFAULT_J3, 1.0, 1.0, 1.0)):
            d_poisson = diffusion_tensor(m, solve_linear_ansatz(m)).D
            d_quad = green_kubo_quadrature_oracle(m, t_max=80.0)
            np.testing.assert_allclose(d_poisson, d_quad, atol=1e-9,
                                       err_msg=f"model {m.label}")

    def test_nonnegative_definite(self):
        r = rng(23)
        m = build_genou(DEFAULT_J3, 1.0, 0.3, 1.0)
        D = diffusion_tensor(m, solve_linear_ansatz(m)).D
        for _ in range(100):
            e = r.standard_normal(3)
            e /= np.linalg.norm(e)
            assert e @ D @ e >= -1e-12

    def test_reversible_implies_symmetric(self):
        for m in (build_ou(1.0, 1.0), build_magnetic(0.0, 1.3, 1.0),
                  build_genou(np.zeros((3, 3)), 1.0, 0.8, 1.0)):
            D = diffusion_tensor(m, solve_linear_ansatz(m)).D
            assert np.abs(D - D.T).max() <= 1e-10

    def test_directional_solve_equals_contraction(self):
        r = rng(24)
        m = build_genou(DEFAULT_J3, 0.6, 1.1, 1.3)
        D = diffusion_tensor(m, solve_linear_ansatz(m)).D
        for _ in range(10):
            e = r.standard_normal(3)
            e /= np.linalg.norm(e)
            assert directional_coefficient(m, e) == pytest.approx(e @ D @ e, rel=1e-12)

    def test_genou_directional_formula(self):
        # D^e = (gamma^2 + |e.xi|^2 alpha^2) / (gamma (3 alpha^2 + gamma^2)), beta = 1
        xi = np.array([1.0, -1.0, 1.0])
        r = rng(25)
        for _ in range(5):
            alpha, gamma = r.uniform(0.2, 3, 2)
            m = build_genou(DEFAULT_J3, alpha, gamma, 1.0)
            e = r.standard_normal(3)
            e /= np.linalg.norm(e)
            expected = (gamma**2 + (e @ xi) ** 2 * alpha**2) / (
                gamma * (3 * alpha**2 + gamma**2))
            assert directional_coefficient(m, e) == pytest.approx(expected, rel=1e-11)

    def test_json_document(self):
        m = build_magnetic(1.0, 1.0, 1.0)
        doc = tensor_to_dict(diffusion_tensor(m, solve_linear_ansatz(m)))
        assert doc["route"] == "poisson"
        assert doc["d"] == 3
        assert len(doc["entries"]) == 9
        assert doc["entries"][1] == pytest.approx(0.5)  # row-major (0,1) entry


class TestSubdiffusionSweep:
    def test_geometric_kernel_converges_to_one(self):
        # lambda_k^2 / alpha_k = 2^-k  =>  sum -> 1, D -> 1
        sweep = gle_subdiffusion_sweep(lambda k: 2.0 ** (-k / 2), lambda k: 1.0,
                                       n_max=40, beta=1.0)
        assert sweep[-1][1] == pytest.approx(1.0, abs=1e-9)

    def test_harmonic_kernel_decays_like_inverse_log(self):
        sweep = gle_subdiffusion_sweep(lambda k: 1.0 / np.sqrt(k), lambda k: 1.0,
                                       n_max=150, beta=1.0)
        values = [d for _, d in sweep]
        assert all(b < a for a, b in zip(values, values[1:]))  # strictly decreasing
        harmonic = np.cumsum(1.0 / np.arange(1, 151))
        np.testing.assert_allclose(values, 1.0 / harmonic, rtol=1e-10)

    def test_single_mode(self):
        sweep = gle_subdiffusion_sweep(lambda k: 1.0, lambda k: 1.0, n_max=1, beta=1.0)
        assert sweep == [(1, pytest.approx(1.0, abs=1e-12))]
