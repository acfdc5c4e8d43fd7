import numpy as np
import pytest

from common.errors import (ConstantFeature, ConstantInput, DimensionMismatch, InvalidInput, KOutOfRange, NotConverged,
                           TooManyComponents)
from common.rng import generator
from pipeline import (OLS, Lasso, kkt_violation, lambda_max, lasso_fit, lasso_path, metrics, ols_fit, pca_fit,
                      select_k_best)
from pipeline.selection import correlation_scores


def _problem(seed, m=40, q=6, noise=0.1):
    rng = generator(seed)
    X = rng.standard_normal((m, q))
    # columnas correlacionadas
    X[:, 1] += 0.5 * X[:, 0]
    y = X @ rng.standard_normal(q) + 2.0 + noise * rng.standard_normal(m)
    return X, y


class TestOLS:

    def test_exact_line(self):
        '''y = 2x → w = [2], b = 0'''
        model = ols_fit([[1.0], [2.0], [3.0]], [2.0, 4.0, 6.0])
        np.testing.assert_allclose(model.weights, [2.0], atol=1e-12)
        assert model.intercept == pytest.approx(0.0, abs=1e-12)

    def test_normal_equations(self, seeds):
        '''Coincide con resolver [1 X]ᵀ[1 X]θ = [1 X]ᵀy'''
        for seed in seeds:
            X, y = _problem(seed)
            A = np.column_stack([np.ones(X.shape[0]), X])
            theta = np.linalg.solve(A.T @ A, A.T @ y)
            model = ols_fit(X, y)
            assert model.intercept == pytest.approx(theta[0], abs=1e-9)
            np.testing.assert_allclose(model.weights, theta[1:], atol=1e-9)

    def test_residual_orthogonal(self):
        X, y = _problem(1)
        residual = y - ols_fit(X, y).predict(X)
        np.testing.assert_allclose(X.T @ residual, 0.0, atol=1e-9)
        assert residual.sum() == pytest.approx(0.0, abs=1e-9)

    def test_rank_deficient(self):
        '''Con una columna repetida se devuelve la solución de norma mínima'''
        X, y = _problem(2, q=3)
        X = np.column_stack([X, X[:, 0]])
        model = ols_fit(X, y)
        assert model.weights[0] == pytest.approx(model.weights[3])
        np.testing.assert_allclose(model.predict(X), ols_fit(X[:, :3], y).predict(X[:, :3]), atol=1e-9)

    def test_regressor_interface(self):
        X, y = _problem(3)
        with pytest.raises(InvalidInput):
            OLS().predict(X)
        assert OLS().fit(X, y).predict(X).shape == (X.shape[0],)
        with pytest.raises(DimensionMismatch):
            OLS().fit(X, y).predict(X[:, :2])


class TestLasso:

    def test_zero_lambda_is_ols(self):
        X, y = _problem(4)
        np.testing.assert_allclose(lasso_fit(X, y, 0.0).weights, ols_fit(X, y).weights, atol=1e-6)

    def test_kkt(self):
        '''Las condiciones de optimalidad se cumplen en 100 problemas al azar'''
        rng = generator(123)
        for trial in range(100):
            X, y = _problem(trial, m=int(rng.integers(20, 40)), q=int(rng.integers(2, 12)))
            lam = float(rng.uniform(0.01, 0.9)) * lambda_max(X, y)
            model = lasso_fit(X, y, lam)
            assert model.converged
            assert kkt_violation(X, y, model, lam) < 1e-6

    def test_above_lambda_max(self):
        '''λ ≥ λ_max → todos los pesos nulos y el intercepto es la media'''
        X, y = _problem(5)
        top = lambda_max(X, y)
        for lam in (top * (1 + 1e-9), 2 * top):
            model = lasso_fit(X, y, lam)
            assert model.n_nonzero == 0
            assert model.intercept == pytest.approx(y.mean())

    def test_orthogonal_design(self):
        '''Con columnas centradas ortonormales la solución es el soft-threshold de Xᵀy/m'''
        rng = generator(6)
        m = 30
        base = rng.standard_normal((m, 5))
        Q, _ = np.linalg.qr(base - base.mean(axis=0))
        y = Q @ np.array([3.0, -2.0, 1.0, 0.5, 0.1]) + 0.01 * rng.standard_normal(m)
        c = Q.T @ (y - y.mean()) / m
        lambdas = np.geomspace(1.01 * lambda_max(Q, y), 1e-4, 15)
        path = lasso_path(Q, y, lambdas)
        counts = [model.n_nonzero for model in path]
        assert counts == sorted(counts)
        assert counts[0] == 0 and counts[-1] == 5
        for lam, model in zip(sorted(lambdas, reverse=True), path):
            expected = m * np.sign(c) * np.maximum(np.abs(c) - lam, 0.0)
            np.testing.assert_allclose(model.weights, expected, atol=1e-6)

    def test_zero_lambda_matches_ols_on_random_problems(self):
        '''Con λ = 0, Lasso converge a la solución de OLS en 100 problemas al azar'''
        rng = generator(124)
        for trial in range(100):
            X, y = _problem(1000 + trial, m=int(rng.integers(30, 50)), q=int(rng.integers(2, 10)))
            model, ols = lasso_fit(X, y, 0.0), ols_fit(X, y)
            assert model.converged
            np.testing.assert_allclose(model.weights, ols.weights, atol=1e-6)
            assert model.intercept == pytest.approx(ols.intercept, abs=1e-6)

    def test_sparsity_along_path(self, seeds):
        '''Columnas casi independientes y efectos marcados: al bajar λ no se pierden pesos no nulos'''
        for seed in seeds:
            rng = generator(seed)
            X = rng.standard_normal((200, 5))
            y = X @ np.array([3.0, -2.0, 1.5, 1.0, 0.5]) + 0.01 * rng.standard_normal(200)
            counts = [model.n_nonzero for model in lasso_path(X, y, n_lambdas=25)]
            assert counts == sorted(counts)
            assert counts[0] == 0 and counts[-1] == 5

    def test_default_path(self):
        X, y = _problem(7)
        path = lasso_path(X, y, n_lambdas=10)
        assert len(path) == 10
        assert path[0].n_nonzero == 0
        assert all(a.lam > b.lam for a, b in zip(path, path[1:]))

    def test_not_converged(self):
        X, y = _problem(8)
        lam = 0.01 * lambda_max(X, y)
        with pytest.raises(NotConverged):
            lasso_fit(X, y, lam, max_iter=1, strict=True)
        model = lasso_fit(X, y, lam, max_iter=1)
        assert not model.converged and model.iterations == 1

    def test_constant_column(self):
        X, y = _problem(9)
        X[:, 2] = 4.0
        model = lasso_fit(X, y, 0.01)
        assert model.weights[2] == 0.0

    def test_negative_lambda(self):
        X, y = _problem(10)
        with pytest.raises(InvalidInput):
            lasso_fit(X, y, -1.0)
        with pytest.raises(InvalidInput):
            Lasso(float("nan")).fit(X, y)


class TestPCA:

    def test_axis_aligned(self):
        '''Datos sobre los ejes: componentes e1 y e2 con varianzas 2/3 y 1/6'''
        X = np.array([[1, 0], [-1, 0], [0, 0.5], [0, -0.5]])
        pca = pca_fit(X, 2)
        np.testing.assert_allclose(pca.components, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(pca.explained_variance, [2 / 3, 1 / 6])
        np.testing.assert_allclose(pca.transform(X), X, atol=1e-12)

    def test_matches_covariance(self, seeds):
        '''Varianzas = autovalores de la covarianza muestral; componentes ortonormales'''
        for seed in seeds:
            X, _ = _problem(seed, m=25, q=6)
            pca = pca_fit(X, 4)
            expected = np.sort(np.linalg.eigvalsh(np.cov(X, rowvar=False)))[::-1][:4]
            np.testing.assert_allclose(pca.explained_variance, expected, rtol=1e-9)
            np.testing.assert_allclose(pca.components @ pca.components.T, np.eye(4), atol=1e-12)
            assert np.all(np.diff(pca.explained_variance) <= 0)

    def test_full_reconstruction(self):
        X, _ = _problem(11, m=20, q=5)
        pca = pca_fit(X, 5)
        np.testing.assert_allclose(pca.inverse_transform(pca.transform(X)), X, atol=1e-10)
        assert pca.explained_variance_ratio.sum() == pytest.approx(1.0)

    def test_reconstruction_error_decreases(self):
        X, _ = _problem(16, m=30, q=8)
        errors = []
        for k in range(1, 9):
            pca = pca_fit(X, k)
            errors.append(np.linalg.norm(pca.inverse_transform(pca.transform(X)) - X))
        assert all(a > b for a, b in zip(errors, errors[1:]))
        assert errors[-1] < 1e-8

    def test_points_on_a_line(self):
        '''Puntos del plano sobre la recta y = 2x + 1: una componente explica toda la varianza'''
        t = np.linspace(-2.0, 3.0, 11)
        pca = pca_fit(np.column_stack([t, 2 * t + 1]), 1)
        assert pca.explained_variance_ratio[0] >= 1 - 1e-10
        np.testing.assert_allclose(np.abs(pca.components[0]), np.array([1.0, 2.0]) / np.sqrt(5), atol=1e-12)

    def test_projection_uses_training_mean(self):
        X, _ = _problem(12, m=20, q=5)
        pca = pca_fit(X, 2)
        np.testing.assert_allclose(pca.transform(pca.mean), 0.0, atol=1e-12)

    @pytest.mark.parametrize("k", [0, 6, 2.5])
    def test_too_many_components(self, k):
        X, _ = _problem(13, m=20, q=5)
        with pytest.raises(TooManyComponents):
            pca_fit(X, k)

    def test_dimension_mismatch(self):
        X, _ = _problem(14, m=20, q=5)
        with pytest.raises(DimensionMismatch):
            pca_fit(X, 2).transform(X[:, :3])


class TestSelection:

    def _data(self):
        rng = generator(15)
        y = rng.standard_normal(30)
        return np.column_stack([rng.standard_normal(30), y, -y, np.full(30, 2.0), y + rng.standard_normal(30)]), y

    def test_ranking(self):
        '''Las dos columnas con |r| = 1 primero, empatadas por índice'''
        X, y = self._data()
        selected = select_k_best(X, y, 3)
        np.testing.assert_array_equal(selected, [1, 2, 4])

    def test_matches_pearson_ranking(self):
        '''En 100 problemas al azar coincide con ordenar |r| de np.corrcoef, empates por índice'''
        rng = generator(321)
        for _ in range(100):
            m, q = int(rng.integers(10, 40)), int(rng.integers(2, 15))
            X, y = rng.standard_normal((m, q)), rng.standard_normal(m)
            k = int(rng.integers(1, q + 1))
            r = [abs(np.corrcoef(X[:, j], y)[0, 1]) for j in range(q)]
            expected = sorted(range(q), key=lambda j: (-r[j], j))[:k]
            np.testing.assert_array_equal(select_k_best(X, y, k), expected)

    def test_rescaling_keeps_ranking(self):
        '''Multiplicar columnas por constantes positivas no cambia el orden'''
        rng = generator(322)
        X = rng.standard_normal((40, 8))
        y = X[:, 2] - 0.5 * X[:, 5] + rng.standard_normal(40)
        scaled = X * rng.uniform(0.1, 100.0, 8)
        np.testing.assert_array_equal(select_k_best(scaled, y, 8), select_k_best(X, y, 8))

    def test_constant_feature(self):
        X, y = self._data()
        assert correlation_scores(X, y)[3] == 0.0
        assert 3 not in select_k_best(X, y, 4)
        with pytest.raises(ConstantFeature):
            select_k_best(X, y, 2, strict=True)

    def test_constant_target(self):
        X, _ = self._data()
        with pytest.raises(ConstantInput):
            select_k_best(X, np.ones(30), 2)

    @pytest.mark.parametrize("k", [0, 6, 1.5, True])
    def test_k_out_of_range(self, k):
        X, y = self._data()
        with pytest.raises(KOutOfRange):
            select_k_best(X, y, k)

    def test_too_few_samples(self):
        X, y = self._data()
        with pytest.raises(InvalidInput):
            select_k_best(X[:2], y[:2], 1)


class TestMetrics:

    def test_perfect(self):
        result = metrics([1, 2, 3], [1, 2, 3])
        assert result["mse"] == 0.0 and result["r2"] == 1.0
        assert result["pearson"] == pytest.approx(1.0)

    def test_reversed(self):
        '''Predicción invertida: MSE 8/3, R² = -3, Pearson = -1'''
        result = metrics([1, 2, 3], [3, 2, 1])
        assert result["mse"] == pytest.approx(8 / 3)
        assert result["rmse"] ** 2 == pytest.approx(result["mse"])
        assert result["r2"] == pytest.approx(-3.0)
        assert result["pearson"] == pytest.approx(-1.0)

    def test_constant_prediction(self):
        '''Predecir la media da R² = 0 y Pearson indefinido'''
        result = metrics([1, 2, 3], [2, 2, 2])
        assert result["r2"] == pytest.approx(0.0)
        assert np.isnan(result["pearson"]) and not result["pearson_defined"]
        with pytest.raises(ConstantInput):
            metrics([1, 2, 3], [2, 2, 2], strict=True)

    def test_constant_target(self):
        assert metrics([1, 1], [1, 1])["r2"] == 1.0
        assert metrics([1, 1], [1, 2])["r2"] == 0.0

    def test_invalid(self):
        with pytest.raises(DimensionMismatch):
            metrics([1, 2, 3], [1, 2])
        with pytest.raises(InvalidInput):
            metrics([1], [1])
