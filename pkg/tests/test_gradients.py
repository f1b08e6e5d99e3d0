"""Implicit item gradients against hand oracles and finite differences."""

import numpy as np
import pytest

from conftest import (
    random_classification_data,
    random_cost,
    random_regression_data,
    random_victim,
)
from dppoison import (
    CostSpec,
    Dataset,
    Goal,
    ModelParams,
    batch_item_gradients,
    cost_gradient,
    eval_cost,
    finite_difference_oracle,
    grad_obj_logistic,
    grad_obj_ridge,
    grad_out_logistic,
    grad_out_ridge,
    sigmoid,
    train_base_logistic,
    train_base_ridge_constrained,
    train_mechanism,
)
from dppoison.learners import SolverSettings

TIGHT = SolverSettings(grad_tol=1e-12)


class TestCostGradient:
    def test_zero_at_target(self):
        c = CostSpec(goal=Goal.PARAMETER_TARGETING, target_model=ModelParams([1.0, -2.0]))
        np.testing.assert_array_equal(cost_gradient(c, ModelParams([1.0, -2.0])), [0.0, 0.0])

    def test_label_targeting_logistic_at_zero_model(self):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((6, 3))
        y = np.where(rng.random(6) < 0.5, 1.0, -1.0)
        c = CostSpec(goal=Goal.LABEL_TARGETING, eval_set=Dataset(X, y))
        got = cost_gradient(c, ModelParams(np.zeros(3)))
        np.testing.assert_allclose(got, -(X.T @ y) / (2 * 6), rtol=1e-14)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(1)
        h = 1e-6
        for _ in range(30):
            base = rng.choice(["logistic", "ridge"])
            data = (
                random_classification_data(rng, n=6)
                if base == "logistic"
                else random_regression_data(rng, n=6)
            )
            cost = random_cost(rng, data, base)
            theta = rng.standard_normal(data.dim)
            model = ModelParams(theta)
            analytic = cost_gradient(cost, model)
            fd = np.empty(data.dim)
            for c in range(data.dim):
                e = np.zeros(data.dim)
                e[c] = h
                fd[c] = (
                    eval_cost(cost, ModelParams(theta + e))
                    - eval_cost(cost, ModelParams(theta - e))
                ) / (2 * h)
            np.testing.assert_allclose(analytic, fd, rtol=1e-6, atol=1e-9)

    def test_dimension_mismatch(self):
        c = CostSpec(goal=Goal.PARAMETER_TARGETING, target_model=ModelParams([1.0, 2.0]))
        with pytest.raises(ValueError):
            cost_gradient(c, ModelParams([1.0]))


class TestScalarOracle:
    def test_logistic_implicit_derivative_n1_d1(self):
        # For one item the stationarity condition g(theta, x) = 0 can be
        # differentiated by hand: dtheta/dx = -(dg/dx)/(dg/dtheta).
        rng = np.random.default_rng(2)
        for _ in range(30):
            x = float(rng.uniform(-0.9, 0.9))
            y = float(rng.choice([-1.0, 1.0]))
            lam = float(rng.uniform(0.5, 3.0))
            bval = float(rng.normal(scale=0.5))
            cg = float(rng.normal())
            data = Dataset([[x]], [y])
            model = train_mechanism(
                random_victim(rng, "logistic", "objective", lam=lam),
                data,
                np.array([bval]),
                TIGHT,
            )
            theta = float(model.theta[0])
            p = float(sigmoid(-y * theta * x))
            w = p * (1.0 - p)
            dg_dtheta = lam + w * x * x
            dg_dx = -y * p + w * x * theta
            oracle = -(dg_dx / dg_dtheta) * cg
            got = grad_obj_logistic(data, 0, model, lam, np.array([cg]))
            assert got.d_features[0] == pytest.approx(oracle, abs=1e-8)
            assert got.d_label is None


class TestReductions:
    def test_zero_cost_gradient_gives_zero(self):
        rng = np.random.default_rng(3)
        cdata = random_classification_data(rng, n=8, d=3)
        rdata = random_regression_data(rng, n=8, d=3)
        zero = np.zeros(3)
        lm = train_base_logistic(cdata, lam=1.0)
        rm = train_base_ridge_constrained(rdata, lam=1.0, rho=0.5)
        b = rng.standard_normal(3)
        for g in (
            grad_obj_logistic(cdata, 2, lm, 1.0, zero),
            grad_out_logistic(cdata, 2, ModelParams(lm.theta + b), b, 1.0, zero),
            grad_obj_ridge(rdata, 2, rm, 1.0, zero),
            grad_out_ridge(rdata, 2, ModelParams(rm.theta + b, rm.mu), b, 1.0, zero),
        ):
            assert np.all(g.d_features == 0.0)
            if g.d_label is not None:
                assert g.d_label == 0.0

    def test_output_with_zero_noise_equals_objective(self):
        rng = np.random.default_rng(4)
        cdata = random_classification_data(rng, n=8, d=3)
        cg = rng.standard_normal(3)
        model = train_base_logistic(cdata, lam=1.0)
        a = grad_obj_logistic(cdata, 1, model, 1.0, cg)
        b = grad_out_logistic(cdata, 1, model, np.zeros(3), 1.0, cg)
        np.testing.assert_array_equal(a.d_features, b.d_features)

        rdata = random_regression_data(rng, n=8, d=3)
        rmodel = train_base_ridge_constrained(rdata, lam=1.0, rho=0.5)
        c = grad_obj_ridge(rdata, 1, rmodel, 1.0, cg)
        d = grad_out_ridge(rdata, 1, rmodel, np.zeros(3), 1.0, cg)
        np.testing.assert_array_equal(c.d_features, d.d_features)
        assert c.d_label == d.d_label

    def test_linearity_in_cost_gradient(self):
        rng = np.random.default_rng(5)
        data = random_regression_data(rng, n=10, d=4)
        victim = random_victim(rng, "ridge", "objective", lam=1.0, rho=0.6)
        model = train_mechanism(victim, data, np.zeros(4))
        g1, g2 = rng.standard_normal(4), rng.standard_normal(4)
        a = 2.75
        idx = np.arange(data.n)
        f1, l1 = batch_item_gradients(victim, data, model, np.zeros(4), g1, idx)
        f2, l2 = batch_item_gradients(victim, data, model, np.zeros(4), g2, idx)
        fc, lc = batch_item_gradients(victim, data, model, np.zeros(4), a * g1 + g2, idx)
        np.testing.assert_allclose(fc, a * f1 + f2, rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(lc, a * l1 + l2, rtol=1e-12, atol=1e-14)

    def test_batch_matches_single_item_calls(self):
        rng = np.random.default_rng(6)
        data = random_classification_data(rng, n=9, d=3)
        victim = random_victim(rng, "logistic", "output", lam=2.0)
        b = rng.standard_normal(3) * 0.3
        model = train_mechanism(victim, data, b)
        cg = rng.standard_normal(3)
        feats, labs = batch_item_gradients(victim, data, model, b, cg, np.arange(data.n))
        assert labs is None
        for i in range(data.n):
            single = grad_out_logistic(data, i, model, b, victim.lam, cg)
            # BLAS picks different kernels for one-row and many-row
            # products, so agreement is to rounding, not bit-exact
            np.testing.assert_allclose(feats[i], single.d_features, rtol=1e-13, atol=1e-16)


class TestRidgeClosedFormOracle:
    def test_unconstrained_gradient_matches_closed_form(self):
        # with mu = 0 the trained model is (X'X + lam I)^{-1}(X'y - b);
        # differentiate that closed form numerically, no solver involved
        rng = np.random.default_rng(7)
        h = 1e-6
        for _ in range(10):
            data = random_regression_data(rng, n=8, d=3)
            lam = 2.0
            target = ModelParams(rng.standard_normal(3) * 0.1)
            cost = CostSpec(goal=Goal.PARAMETER_TARGETING, target_model=target, loss="squared")
            model = train_base_ridge_constrained(data, lam, rho=100.0)
            assert model.mu == 0.0
            cg = cost_gradient(cost, model)
            i = int(rng.integers(data.n))
            got = grad_obj_ridge(data, i, model, lam, cg)

            def closed_form_cost(X, y):
                theta = np.linalg.solve(X.T @ X + lam * np.eye(3), X.T @ y)
                return eval_cost(cost, ModelParams(theta))

            fd = np.empty(3)
            for c in range(3):
                Xp, Xm = data.X.copy(), data.X.copy()
                Xp[i, c] += h
                Xm[i, c] -= h
                fd[c] = (closed_form_cost(Xp, data.y) - closed_form_cost(Xm, data.y)) / (2 * h)
            np.testing.assert_allclose(got.d_features, fd, rtol=1e-6, atol=1e-9)

            yp, ym = data.y.copy(), data.y.copy()
            yp[i] += h
            ym[i] -= h
            fd_label = (closed_form_cost(data.X, yp) - closed_form_cost(data.X, ym)) / (2 * h)
            assert got.d_label == pytest.approx(fd_label, rel=1e-6, abs=1e-9)

    def test_label_gradient_sign(self):
        # d_label = x_i' H^{-1} cost_grad; with cost_grad = x_i and H
        # positive definite the quadratic form is strictly positive
        rng = np.random.default_rng(8)
        data = random_regression_data(rng, n=8, d=3)
        model = train_base_ridge_constrained(data, lam=1.0, rho=100.0)
        for i in range(data.n):
            g = grad_obj_ridge(data, i, model, 1.0, data.X[i])
            assert g.d_label > 0.0


class TestFiniteDifferenceOracle:
    def test_step_size_validated(self):
        rng = np.random.default_rng(9)
        data = random_classification_data(rng, n=5, d=2)
        victim = random_victim(rng, "logistic", "objective", lam=1.0)
        cost = random_cost(rng, data, "logistic")
        for h in (1e-7, 1e-3):
            with pytest.raises(ValueError):
                finite_difference_oracle(victim, data, 0, np.zeros(2), cost, h=h)

    def test_error_shrinks_with_h(self):
        rng = np.random.default_rng(10)
        data = random_classification_data(rng, n=6, d=2)
        victim = random_victim(rng, "logistic", "objective", lam=1.0)
        cost = CostSpec(
            goal=Goal.PARAMETER_TARGETING, target_model=ModelParams(rng.standard_normal(2))
        )
        model = train_mechanism(victim, data, np.zeros(2), TIGHT)
        exact = grad_obj_logistic(data, 0, model, victim.lam, cost_gradient(cost, model))
        errs = []
        for h in (1e-4, 5e-5):
            fd = finite_difference_oracle(victim, data, 0, np.zeros(2), cost, h=h, settings=TIGHT)
            errs.append(np.linalg.norm(fd.d_features - exact.d_features))
        # both already deep in agreement; the larger step cannot be better
        # than the smaller one by more than solver noise
        assert errs[0] <= 1e-7
        assert errs[1] <= 1e-7
