import numpy as np
import pytest

from common.errors import DimensionMismatch, FoldTooSmall, InvalidInput
from common.rng import generator
from pipeline import (OLS, CVScheme, Lasso, PipelineSpec, cross_validate, fmri_style_evaluation, metrics,
                      pseudo_subject_groups)


def _linear_data(seed, m=60, q=8, noise=0.0):
    rng = generator(seed)
    X = rng.standard_normal((m, q))
    y = X @ rng.standard_normal(q) + 1.0 + noise * rng.standard_normal(m)
    return X, y


class TestSplits:

    def test_leave_one_group_out(self):
        '''Grupos [1,1,2,2] → dos folds, uno por grupo'''
        splits = CVScheme.leave_one_group_out([1, 1, 2, 2]).splits(4)
        assert len(splits) == 2
        np.testing.assert_array_equal(splits[0][1], [0, 1])
        np.testing.assert_array_equal(splits[0][0], [2, 3])
        np.testing.assert_array_equal(splits[1][1], [2, 3])

    @pytest.mark.parametrize("shuffle_seed", [None, 3])
    def test_kfold_partition(self, shuffle_seed):
        '''Los folds de test son disjuntos, cubren todo y el train es el complemento'''
        splits = CVScheme.kfold(5, shuffle_seed).splits(23)
        tests = np.concatenate([test for _, test in splits])
        np.testing.assert_array_equal(np.sort(tests), np.arange(23))
        for train, test in splits:
            assert np.intersect1d(train, test).size == 0
            assert train.size + test.size == 23
        assert sorted(test.size for _, test in splits) == [4, 4, 5, 5, 5]

    def test_shuffle_changes_folds(self):
        plain = CVScheme.kfold(4).splits(20)
        shuffled = CVScheme.kfold(4, 1).splits(20)
        assert any(not np.array_equal(a[1], b[1]) for a, b in zip(plain, shuffled))
        np.testing.assert_array_equal(CVScheme.kfold(4, 1).splits(20)[0][1], shuffled[0][1])

    @pytest.mark.parametrize("scheme, n", [
        (CVScheme.kfold(5), 8),
        (CVScheme.kfold(10), 9),
        (CVScheme.kfold(1), 10),
        (CVScheme.leave_one_group_out([0, 0, 0, 1]), 4),
        (CVScheme.leave_one_group_out([7, 7, 7]), 3),
    ], ids=["fold de 1", "más folds que muestras", "un fold", "grupo de 1", "un grupo"])
    def test_fold_too_small(self, scheme, n):
        with pytest.raises(FoldTooSmall):
            scheme.splits(n)

    def test_group_labels_mismatch(self):
        with pytest.raises(InvalidInput):
            CVScheme.leave_one_group_out([0, 1]).splits(4)

    def test_pseudo_subjects(self):
        np.testing.assert_array_equal(pseudo_subject_groups(10, 3), [0, 0, 0, 1, 1, 1, 2, 2, 2, 2])
        with pytest.raises(InvalidInput):
            pseudo_subject_groups(10, 1)


class TestCrossValidate:

    def test_perfect_linear_data(self):
        '''Sin ruido OLS acierta exacto en todos los folds'''
        X, y = _linear_data(0)
        result = cross_validate(X, y, PipelineSpec(), CVScheme.kfold(5))
        assert result.n_folds == 5
        assert result.mean["r2"] == pytest.approx(1.0, abs=1e-9)
        assert result.mean["mse"] == pytest.approx(0.0, abs=1e-12)

    def test_shuffled_target_has_no_skill(self):
        '''Con el objetivo independiente de las features no hay R² significativamente positivo'''
        rng = generator(1)
        X = rng.standard_normal((200, 5))
        y = rng.standard_normal(200)
        result = cross_validate(X, y, PipelineSpec(), CVScheme.kfold(5, 1))
        assert result.mean["r2"] < 3 * result.se["r2"]
        assert result.mean["r2"] < 0.05

    def test_folds_only_see_training_data(self):
        '''Cada fold coincide con ajustar a mano sobre su train y evaluar en su test'''
        X, y = _linear_data(2, m=50, q=12, noise=0.5)
        spec = PipelineSpec(k_best=6, n_components=3)
        cv = CVScheme.kfold(5, 2)
        result = cross_validate(X, y, spec, cv, ("mse", "r2"))
        for (train, test), fold in zip(cv.splits(50), result.fold_scores):
            fitted = spec.fit(X[train], y[train])
            expected = metrics(y[test], fitted.predict(X[test]))
            assert fold["mse"] == pytest.approx(expected["mse"], rel=1e-12)
            assert set(fold) == {"mse", "r2"}

    def test_test_targets_do_not_change_models(self):
        '''Alterar el objetivo de un fold de test no cambia lo que predicen los modelos de ese fold'''
        X, y = _linear_data(3, m=40, q=6, noise=0.3)
        cv = CVScheme.kfold(4)
        train, test = cv.splits(40)[0]
        altered = y.copy()
        altered[test] += 100.0
        spec = PipelineSpec(k_best=3)
        np.testing.assert_array_equal(spec.fit(X[train], y[train]).predict(X[test]),
                                      spec.fit(X[train], altered[train]).predict(X[test]))
        first = cross_validate(X, y, spec, cv).fold_scores
        second = cross_validate(X, altered, spec, cv).fold_scores
        assert first[0]["mse"] != second[0]["mse"]

    def test_standard_error(self):
        X, y = _linear_data(4, noise=1.0)
        result = cross_validate(X, y, PipelineSpec(), CVScheme.kfold(6))
        values = np.array([fold["r2"] for fold in result.fold_scores])
        assert result.se["r2"] == pytest.approx(values.std(ddof=1) / np.sqrt(6))

    def test_pipeline_shapes(self):
        X, y = _linear_data(5, m=40, q=10, noise=0.2)
        fitted = PipelineSpec(k_best=4, n_components=2).fit(X, y)
        assert fitted.selected.shape == (4,)
        assert fitted.transform(X).shape == (40, 2)
        assert fitted.predict(X).shape == (40,)

    def test_feature_weights(self):
        '''Los pesos sobre las columnas originales reproducen las predicciones salvo una constante'''
        X, y = _linear_data(13, m=50, q=10, noise=0.3)
        fitted = PipelineSpec(k_best=6, n_components=3).fit(X, y)
        weights = fitted.feature_weights()
        assert weights.shape == (10,)
        assert set(np.flatnonzero(weights)) <= set(fitted.selected.tolist())
        offset = fitted.predict(X) - X @ weights
        np.testing.assert_allclose(offset, offset[0], atol=1e-9)
        plain = PipelineSpec().fit(X, y)
        np.testing.assert_array_equal(plain.feature_weights(), plain.model.weights)

    def test_unknown_metric(self):
        X, y = _linear_data(6)
        with pytest.raises(InvalidInput):
            cross_validate(X, y, PipelineSpec(), CVScheme.kfold(3), ("mae",))

    def test_invalid_regressor(self):
        with pytest.raises(InvalidInput, match="ols, lasso"):
            PipelineSpec(regressor="ridge")
        with pytest.raises(InvalidInput):
            PipelineSpec(regressor="lasso", lambdas=())

    def test_regressor_classes(self):
        '''El pipeline ajusta con las clases OLS y Lasso'''
        X, y = _linear_data(12, m=50, q=6, noise=0.2)
        assert isinstance(PipelineSpec().make_regressor(X, y), OLS)
        spec = PipelineSpec(regressor="lasso", lambdas=(1.0, 0.01), seed=1)
        regressor = spec.make_regressor(X, y)
        assert isinstance(regressor, Lasso)
        assert regressor.lam == spec.choose_lambda(X, y)
        np.testing.assert_array_equal(spec.fit(X, y).model.weights, Lasso(regressor.lam).fit(X, y).model.weights)
        np.testing.assert_array_equal(PipelineSpec().fit(X, y).model.weights, OLS().fit(X, y).model.weights)


class TestNestedLambda:

    def test_signal_picks_small_lambda(self):
        X, y = _linear_data(7, m=80, q=5, noise=0.1)
        spec = PipelineSpec(regressor="lasso", lambdas=(10.0, 0.01, 0.001), seed=7)
        assert spec.choose_lambda(X, y) in (0.01, 0.001)

    def test_ties_go_to_larger_lambda(self):
        '''Dos λ por encima de λ_max dan el mismo modelo nulo: gana el mayor'''
        X, y = _linear_data(8, m=30, q=4, noise=0.1)
        spec = PipelineSpec(regressor="lasso", lambdas=(1e3, 1e4))
        assert spec.choose_lambda(X, y) == 1e4

    def test_single_lambda(self):
        X, y = _linear_data(9)
        assert PipelineSpec(regressor="lasso", lambdas=(0.5,)).choose_lambda(X, y) == 0.5

    def test_lambdas_reported_per_fold(self):
        X, y = _linear_data(10, m=60, q=5, noise=0.1)
        spec = PipelineSpec(regressor="lasso", lambdas=(1.0, 0.01))
        result = cross_validate(X, y, spec, CVScheme.kfold(4))
        assert len(result.lambdas) == 4
        assert set(result.lambdas) <= {1.0, 0.01}
        ols = cross_validate(X, y, PipelineSpec(), CVScheme.kfold(4))
        assert ols.lambdas == [None] * 4


class TestFmriStyle:

    def test_subject_protocol(self):
        '''Cuatro sujetos: un fold por sujeto con RMSE y Pearson'''
        X, y = _linear_data(11, m=60, q=30, noise=0.1)
        result = fmri_style_evaluation(X, y, pseudo_subject_groups(60, 4))
        assert result.n_folds == 4
        assert set(result.mean) == {"rmse", "pearson"}
        assert result.mean["rmse"] > 0
        assert result.mean["pearson"] > 0.5
        assert result.holdout is None
        assert result.fitted.pca is not None

    def _subjects_and_holdout(self, seed):
        rng = generator(seed)
        w = rng.standard_normal(20)
        X, X_test = rng.standard_normal((80, 20)), rng.standard_normal((30, 20))
        y = X @ w + 1.0 + 0.1 * rng.standard_normal(80)
        y_test = X_test @ w + 1.0 + 0.1 * rng.standard_normal(30)
        return X, y, X_test, y_test

    def test_holdout(self):
        '''El modelo ajustado con todos los sujetos se evalúa en el conjunto separado'''
        X, y, X_test, y_test = self._subjects_and_holdout(14)
        result = fmri_style_evaluation(X, y, pseudo_subject_groups(80, 4), holdout=(X_test, y_test))
        assert set(result.holdout) == {"rmse", "pearson"}
        expected = metrics(y_test, result.fitted.predict(X_test))
        assert result.holdout["rmse"] == pytest.approx(expected["rmse"])
        assert result.holdout["pearson"] == pytest.approx(expected["pearson"])
        assert result.holdout["pearson"] > 0.9

    def test_holdout_columns(self):
        X, y, X_test, y_test = self._subjects_and_holdout(15)
        with pytest.raises(DimensionMismatch):
            fmri_style_evaluation(X, y, pseudo_subject_groups(80, 4), holdout=(X_test[:, :5], y_test))
