import numpy as np
import pytest

from greenkubo import (DEFAULT_J3, ConvergenceDomainError, build_genou, build_gle,
                       build_magnetic, build_ou, build_G, diffusion_tensor,
                       g_norm_by_degree, hspace_for_model, large_gamma_series,
                       observable_coefficients, reconstruct_tensor, small_gamma_limit,
                       solve_linear_ansatz, spectral_measure,
                       stieltjes_antisymmetric, stieltjes_symmetric,
                       vhat_and_projections)
from greenkubo.operator_analysis import measure_to_dict

from helpers import rng

XI_HAT = np.array([1.0, -1.0, 1.0]) / np.sqrt(3.0)


def genou_setup(alpha=1.0, beta=1.0, degree=2):
    model = build_genou(DEFAULT_J3, alpha, 1.0, beta)  # unit dissipation
    basis, S, A, gop = hspace_for_model(model, degree)
    V = observable_coefficients(model, basis)
    return model, basis, gop, V


def direction_vhat(gop, V, e):
    e = np.asarray(e, dtype=float)
    e = e / np.linalg.norm(e)
    return vhat_and_projections(gop, (e @ V).reshape(1, -1))


class TestBuildG:
    def test_genou_degree_one_block(self):
        alpha = 0.8
        _, basis, gop, _ = genou_setup(alpha=alpha)
        np.testing.assert_allclose(gop.G[:3, :3], -alpha * DEFAULT_J3, atol=1e-12)
        np.testing.assert_allclose(gop.gram[:3, :3], np.eye(3), atol=1e-12)

    def test_ou_operator_vanishes(self):
        model = build_ou(1.0, 1.0)
        _, _, _, gop = hspace_for_model(model, 4)
        np.testing.assert_allclose(gop.G, 0.0, atol=1e-14)
        assert gop.norm <= 1e-14

    def test_antisymmetry_in_h_metric_random_vectors(self):
        model = build_gle([1.0], [1.0], 1.0)
        _, _, _, gop = hspace_for_model(model, 4)
        r = rng(31)
        for _ in range(20):
            f = r.standard_normal(gop.n_meanzero)
            assert abs(f @ gop.gram @ gop.G @ f) <= 1e-10 * max(1.0, np.abs(f).max()) ** 2

    def test_antisymmetry_identity_100_random_pairs(self):
        # <G f, h> + <f, G h> = 0 in the dissipative metric
        model = build_genou(DEFAULT_J3, 0.9, 1.0, 1.0)
        _, _, _, gop = hspace_for_model(model, 3)
        r = rng(32)
        for _ in range(100):
            f = r.standard_normal(gop.n_meanzero)
            h = r.standard_normal(gop.n_meanzero)
            lhs = (gop.G @ f) @ gop.gram @ h + f @ gop.gram @ (gop.G @ h)
            scale = max(abs((gop.G @ f) @ gop.gram @ h), 1.0)
            assert abs(lhs) <= 1e-10 * scale

    def test_antisymmetry_residual_all_catalog_models_degree4(self):
        models = [build_ou(1.0, 1.0), build_magnetic(1.0, 1.0, 1.0),
                  build_gle([1.0, 0.5, 0.25], [1.0, 2.0, 3.0], 1.0),
                  build_genou(DEFAULT_J3, 1.0, 1.0, 1.0)]
        for m in models:
            _, _, _, gop = hspace_for_model(m, 4)
            lhs = gop.gram @ gop.G
            residual = np.abs(lhs + gop.G.T @ gop.gram).max()
            scale = max(np.abs(lhs).max(), 1e-300)
            assert residual <= 1e-10 * max(scale, 1.0), m.label

    def test_mismatched_split_rejected(self):
        model = build_genou(DEFAULT_J3, 1.0, 1.0, 1.0)
        basis, S, A, _ = hspace_for_model(model, 2)
        with pytest.raises(Exception):
            build_G(A, S)  # swapped arguments


class TestVhatProjections:
    def test_null_space_is_the_xi_line(self):
        _, _, gop, V = genou_setup()
        vhat = vhat_and_projections(gop, V)
        # the null projection of V_hat^i is (e_i . xi) xi / beta
        expected_null = np.outer(XI_HAT, XI_HAT)
        np.testing.assert_allclose(vhat.vhat_null[:, 1:4] * np.ones(3), expected_null *
                                   np.ones(3), atol=1e-10)

    def test_orthogonal_direction_has_no_null_component(self):
        _, _, gop, V = genou_setup()
        e = np.array([1.0, 1.0, 0.0])  # e . xi = 0
        vhat = direction_vhat(gop, V, e)
        assert np.abs(vhat.vhat_null).max() <= 1e-12

    def test_null_direction_carries_full_mass(self):
        beta = 2.0
        _, _, gop, V = genou_setup(beta=beta)
        vhat = direction_vhat(gop, V, XI_HAT)
        assert vhat.w_null[0] @ vhat.w_null[0] == pytest.approx(1.0 / beta, abs=1e-12)
        assert np.abs(vhat.w_perp).max() <= 1e-12

    def test_split_is_exact_and_h_orthogonal(self):
        _, _, gop, V = genou_setup()
        vhat = direction_vhat(gop, V, [0.3, -1.2, 0.4])
        np.testing.assert_allclose(vhat.vhat_null + vhat.vhat_perp, vhat.vhat,
                                   atol=1e-14)
        assert abs(vhat.w_null[0] @ vhat.w_perp[0]) <= 1e-12

    def test_gle_observable_reported_outside_geometry(self):
        model = build_gle([1.0], [1.0], 1.0)
        basis, _, _, gop = hspace_for_model(model, 3)
        V = observable_coefficients(model, basis)
        vhat = vhat_and_projections(gop, V)
        # all of V = p has zero dissipative seminorm: nothing survives
        assert vhat.dropped_norm[0] == pytest.approx(1.0, abs=1e-12)
        assert np.abs(vhat.w).max() <= 1e-14


class TestLargeGammaSeries:
    def test_ou_single_term(self):
        model = build_ou(1.0, 2.0)
        basis, _, _, gop = hspace_for_model(model, 3)
        vhat = vhat_and_projections(gop, observable_coefficients(model, basis))
        gamma = 3.0
        sums, terms = large_gamma_series(gop, vhat, gamma, n_terms=5)
        assert terms[0] == pytest.approx(1.0 / (gamma * 2.0), abs=1e-14)
        np.testing.assert_allclose(terms[1:], 0.0, atol=1e-14)

    def test_genou_terms_and_limit(self):
        _, _, gop, V = genou_setup()
        vhat = direction_vhat(gop, V, [1.0, 0.0, 0.0])
        sums, terms = large_gamma_series(gop, vhat, 10.0, n_terms=10)
        assert terms[0] == pytest.approx(0.1, abs=1e-14)
        assert terms[1] == pytest.approx(-2e-3, abs=1e-15)
        assert sums[-1] == pytest.approx(101.0 / 1030.0, abs=1e-12)

    def test_alternating_sign_identity(self):
        # <G^2k v, v> = (-1)^k ||G^k v||^2: the even pairings must alternate
        _, _, gop, V = genou_setup()
        vhat = direction_vhat(gop, V, [0.2, 0.5, -0.1])
        w = vhat.w[0]
        K = gop.skew
        y = w.copy()
        for k in range(1, 4):
            y = K @ y
            pairing = w @ np.linalg.matrix_power(K, 2 * k) @ w
            assert pairing == pytest.approx((-1.0) ** k * (y @ y), abs=1e-10)

    def test_odd_pairings_vanish(self):
        _, _, gop, V = genou_setup()
        vhat = direction_vhat(gop, V, [0.2, 0.5, -0.1])
        w = vhat.w[0]
        K = gop.skew
        for k in range(4):
            odd = np.linalg.matrix_power(K, 2 * k + 1)
            assert abs(w @ odd @ w) <= 1e-10

    def test_all_positive_variant_overshoots(self):
        # summing |terms| reproduces the sign error and exceeds the true value
        _, _, gop, V = genou_setup()
        vhat = direction_vhat(gop, V, [1.0, 0.0, 0.0])
        _, terms = large_gamma_series(gop, vhat, 10.0, n_terms=1)
        exact = 101.0 / 1030.0
        assert terms[0] + abs(terms[1]) >= 0.1
        assert terms[0] + abs(terms[1]) > exact
        assert terms[0] + terms[1] < exact < terms[0]

    def test_geometric_error_ratio(self):
        _, _, gop, V = genou_setup()
        vhat = direction_vhat(gop, V, [1.0, 0.0, 0.0])
        gamma = 10.0
        sums, _ = large_gamma_series(gop, vhat, gamma, n_terms=6)
        exact = 101.0 / 1030.0
        errors = np.abs(sums - exact)
        ratios = errors[1:5] / errors[0:4]
        assert np.all(ratios <= (gop.norm / gamma) ** 2 + 1e-3)

    def test_inside_norm_bound_rejected(self):
        _, _, gop, V = genou_setup()
        vhat = direction_vhat(gop, V, [1.0, 0.0, 0.0])
        with pytest.raises(ConvergenceDomainError):
            large_gamma_series(gop, vhat, 1.0, n_terms=3)  # ||G|| = sqrt(3) > 1


class TestSmallGammaLimit:
    def test_genou_generic_direction(self):
        _, _, gop, V = genou_setup()
        vhat = direction_vhat(gop, V, [1.0, 0.0, 0.0])
        limit, solvable = small_gamma_limit(gop, vhat)
        assert limit == pytest.approx(1.0 / 3.0, abs=1e-12)
        assert solvable

    def test_orthogonal_direction_gives_zero(self):
        _, _, gop, V = genou_setup()
        vhat = direction_vhat(gop, V, [1.0, 1.0, 0.0])
        limit, solvable = small_gamma_limit(gop, vhat)
        assert limit == pytest.approx(0.0, abs=1e-14)
        assert solvable

    def test_ou_everything_is_null(self):
        beta = 2.0
        model = build_ou(1.0, beta)
        basis, _, _, gop = hspace_for_model(model, 3)
        vhat = vhat_and_projections(gop, observable_coefficients(model, basis))
        limit, solvable = small_gamma_limit(gop, vhat)
        assert limit == pytest.approx(1.0 / beta, abs=1e-12)
        assert solvable


class TestSpectralMeasure:
    def test_genou_atoms(self):
        alpha = 1.0
        _, _, gop, V = genou_setup(alpha=alpha)
        vhat = vhat_and_projections(gop, V)
        measure = spectral_measure(gop, vhat)
        lams = sorted(lam for lam, _ in measure.atoms)
        np.testing.assert_allclose(lams, [-np.sqrt(3.0), np.sqrt(3.0)], atol=1e-10)

    def test_ou_has_no_atoms(self):
        model = build_ou(1.0, 1.0)
        basis, _, _, gop = hspace_for_model(model, 3)
        vhat = vhat_and_projections(gop, observable_coefficients(model, basis))
        measure = spectral_measure(gop, vhat)
        assert measure.atoms == ()
        assert measure.null_mass[0, 0] == pytest.approx(1.0, abs=1e-12)

    def test_resolution_of_identity(self):
        beta = 2.0
        _, _, gop, V = genou_setup(beta=beta)
        vhat = vhat_and_projections(gop, V)
        measure = spectral_measure(gop, vhat)
        total = measure.null_mass.astype(complex)
        for _, weight in measure.atoms:
            total = total + weight
        np.testing.assert_allclose(total.real, measure.gram_pairing, atol=1e-10)
        np.testing.assert_allclose(total.real, np.eye(3) / beta, atol=1e-10)
        assert np.abs(total.imag).max() <= 1e-12

    def test_pair_symmetry_and_conjugate_weights(self):
        _, _, gop, V = genou_setup()
        vhat = vhat_and_projections(gop, V)
        measure = spectral_measure(gop, vhat)
        atoms = dict(measure.atoms)
        for lam, weight in measure.atoms:
            partner = atoms[min(atoms, key=lambda x: abs(x + lam))]
            np.testing.assert_allclose(partner, weight.conj(), atol=1e-12)
            diag = np.diag(weight)
            assert np.abs(diag.imag).max() <= 1e-12
            assert diag.real.min() >= -1e-12

    def test_cross_pairing_matches_full_measure_block(self):
        _, _, gop, V = genou_setup()
        full = spectral_measure(gop, vhat_and_projections(gop, V))
        v0 = direction_vhat(gop, V, [1.0, 0.0, 0.0])
        v1 = direction_vhat(gop, V, [0.0, 1.0, 0.0])
        cross = spectral_measure(gop, v0, vhat_second=v1)
        for (lam_f, w_f), (lam_c, w_c) in zip(full.atoms, cross.atoms):
            assert lam_f == pytest.approx(lam_c, abs=1e-12)
            assert w_f[0, 1] == pytest.approx(w_c[0, 0], abs=1e-12)

    def test_json_document(self):
        _, _, gop, V = genou_setup()
        vhat = vhat_and_projections(gop, V)
        doc = measure_to_dict(spectral_measure(gop, vhat))
        assert set(doc) == {"null_mass", "atoms"}
        assert len(doc["atoms"]) == 2
        assert set(doc["atoms"][0]) == {"lambda", "weight_re", "weight_im"}


class TestStieltjesFormulas:
    def test_genou_direction_decomposition(self):
        # D^e(gamma=1) = 1/2 splits into 1/3 (null) + 1/6 (atoms) for e = e1
        _, _, gop, V = genou_setup()
        vhat = direction_vhat(gop, V, [1.0, 0.0, 0.0])
        measure = spectral_measure(gop, vhat)
        null_term = measure.null_mass[0, 0] / 1.0
        total = stieltjes_symmetric(measure, 1.0)[0, 0]
        assert null_term == pytest.approx(1.0 / 3.0, abs=1e-12)
        assert total - null_term == pytest.approx(1.0 / 6.0, abs=1e-12)
        assert total == pytest.approx(0.5, abs=1e-12)

    def test_ou_pure_null(self):
        gamma_model = 1.0
        model = build_ou(gamma_model, 1.0)
        basis, _, _, gop = hspace_for_model(model, 3)
        vhat = vhat_and_projections(gop, observable_coefficients(model, basis))
        measure = spectral_measure(gop, vhat)
        for g in (0.5, 1.0, 4.0):
            assert stieltjes_symmetric(measure, g)[0, 0] == pytest.approx(1.0 / g,
                                                                          abs=1e-12)
            assert np.abs(stieltjes_antisymmetric(measure, g)).max() <= 1e-14

    def test_antisymmetric_value(self):
        alpha = 1.0
        _, _, gop, V = genou_setup(alpha=alpha)
        vhat = vhat_and_projections(gop, V)
        measure = spectral_measure(gop, vhat)
        A = stieltjes_antisymmetric(measure, 1.0)
        assert abs(A[0, 1]) == pytest.approx(alpha / (3 * alpha**2 + 1.0), abs=1e-12)

    def test_cross_route_identity_random_parameters(self):
        r = rng(33)
        for _ in range(5):
            alpha = r.uniform(0.3, 2.0)
            gamma = r.uniform(0.3, 3.0)
            _, _, gop, V = genou_setup(alpha=alpha)
            vhat = vhat_and_projections(gop, V)
            measure = spectral_measure(gop, vhat)
            model = build_genou(DEFAULT_J3, alpha, gamma, 1.0)
            exact = diffusion_tensor(model, solve_linear_ansatz(model))
            np.testing.assert_allclose(stieltjes_antisymmetric(measure, gamma),
                                       exact.antisymmetric_part, atol=1e-10)
            np.testing.assert_allclose(stieltjes_symmetric(measure, gamma),
                                       exact.symmetric_part, atol=1e-10)

    def test_antisymmetric_part_ignores_null_component(self):
        # rebuilt from the orthogonal projection only, the result is identical
        _, _, gop, V = genou_setup()
        vhat_full = vhat_and_projections(gop, V)
        vhat_perp = vhat_and_projections(gop, vhat_full.vhat_perp * 1.0)
        m_full = spectral_measure(gop, vhat_full)
        m_perp = spectral_measure(gop, vhat_perp)
        for g in (0.1, 1.0, 10.0):
            np.testing.assert_allclose(stieltjes_antisymmetric(m_full, g),
                                       stieltjes_antisymmetric(m_perp, g), atol=1e-14)


class TestReconstruction:
    def test_full_tensor_over_grid(self):
        for label, make_unit, make_at in [
            ("ou", lambda: build_ou(1.0, 1.0), lambda g: build_ou(g, 1.0)),
            ("magnetic", lambda: build_magnetic(1.0, 1.0, 1.0),
             lambda g: build_magnetic(1.0, g, 1.0)),
            ("genou", lambda: build_genou(DEFAULT_J3, 1.0, 1.0, 1.0),
             lambda g: build_genou(DEFAULT_J3, 1.0, g, 1.0)),
        ]:
            unit = make_unit()
            basis, _, _, gop = hspace_for_model(unit, 2)
            vhat = vhat_and_projections(gop, observable_coefficients(unit, basis))
            measure = spectral_measure(gop, vhat)
            for g in np.geomspace(1e-2, 1e2, 9):
                model = make_at(float(g))
                exact = diffusion_tensor(model, solve_linear_ansatz(model)).D
                rebuilt = reconstruct_tensor(measure, float(g)).D
                err = np.abs(rebuilt - exact).max()
                assert err <= 1e-10 * max(1.0, np.abs(exact).max()), (label, g, err)


class TestNormGrowth:
    def test_gle_norm_grows_with_degree(self):
        model = build_gle([1.0], [1.0], 1.0)
        norms = dict(g_norm_by_degree(model, [1, 2, 4, 6]))
        assert norms[2] > norms[1]
        assert norms[4] > norms[2]
        assert norms[6] > norms[4]

    def test_genou_norm_saturates(self):
        model = build_genou(DEFAULT_J3, 1.0, 1.0, 1.0)
        norms = [n for _, n in g_norm_by_degree(model, [1, 2, 3, 4])]
        np.testing.assert_allclose(norms, np.sqrt(3.0), atol=1e-10)
