"""Implicit gradients of the attack cost with respect to training items.

The trained model is an argmin, so its derivative in a training item
follows from implicit differentiation of the stationarity conditions:
d(theta)/d(z_i) = -(df/dtheta)^{-1} (df/dz_i). Chaining with the cost
gradient dC/dtheta gives, for each victim, a closed-form gradient of
C(M(D, b)) in the item's coordinates at a fixed noise draw b. That
quantity is an unbiased stochastic gradient of the expected cost J.

The linear system (df/dtheta)^{-1} dC/dtheta is shared by all items, so
the batched entry point factors it once and evaluates each item in O(d).
For ridge victims the constraint dual mu is treated as a constant under
differentiation, matching the closed forms; at points where the
constraint switches activity the implicit gradient is discontinuous and
the formulas are used as-is with the solver's returned mu.

A retraining central-difference oracle is included for validation.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import BaseLearner, Goal, Mechanism, eval_cost, sigmoid
from .learners import DEFAULT_SETTINGS, train_mechanism

__all__ = [
    "ItemGradient",
    "cost_gradient",
    "grad_obj_logistic",
    "grad_obj_ridge",
    "grad_out_logistic",
    "grad_out_ridge",
    "batch_item_gradients",
    "finite_difference_oracle",
]


@dataclass(frozen=True)
class ItemGradient:
    """Gradient of the attack cost in one item's coordinates. d_label is
    None for logistic victims (their labels are never modified)."""

    d_features: np.ndarray
    d_label: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "d_features", np.asarray(self.d_features, dtype=float))

    def norm(self):
        s = float(self.d_features @ self.d_features)
        if self.d_label is not None:
            s += self.d_label**2
        return s**0.5


def cost_gradient(cost, model):
    """Analytic gradient of eval_cost in the model parameters."""
    if cost.dim != model.dim:
        raise ValueError(f"dimension mismatch: cost is {cost.dim}d, model is {model.dim}d")
    theta = model.theta
    if cost.goal is Goal.PARAMETER_TARGETING:
        return theta - cost.target_model.theta
    X = cost.eval_set.X
    y = cost.eval_set.y
    m = len(cost.eval_set)
    if cost.loss == "logistic":
        g = -(X.T @ (y * sigmoid(-y * (X @ theta)))) / m
    else:
        g = X.T @ (X @ theta - y) / m
    if cost.goal is Goal.LABEL_AVERSION:
        return -g
    return g


def _logistic_grads(X, y, theta_eff, lam, cost_grad, idx):
    """Feature gradients for logistic victims at the effective parameter
    theta_eff (the argmin itself; for output perturbation that is
    theta - b). Returns an (len(idx), d) array."""
    p = sigmoid(-y * (X @ theta_eff))  # 1 / (1 + s_j)
    w = p * (1.0 - p)  # s_j / (1 + s_j)^2
    H = lam * np.eye(X.shape[1]) + X.T @ (X * w[:, None])
    v = np.linalg.solve(H, cost_grad)
    xv = X[idx] @ v
    return (y[idx] * p[idx])[:, None] * v[None, :] - (w[idx] * xv)[:, None] * theta_eff[None, :]


def _ridge_grads(X, y, theta_eff, lam, mu, cost_grad, idx):
    """Feature and label gradients for ridge victims. Returns
    ((len(idx), d), (len(idx),)) arrays."""
    d = X.shape[1]
    H = X.T @ X + (lam + mu) * np.eye(d)
    v = np.linalg.solve(H, cost_grad)
    xv = X[idx] @ v
    resid = X[idx] @ theta_eff - y[idx]
    d_feat = -(xv[:, None] * theta_eff[None, :] + resid[:, None] * v[None, :])
    return d_feat, xv


def grad_obj_logistic(data, i, model, lam, cost_grad):
    """Stochastic gradient of the cost in item i's features for an
    objective-perturbed logistic victim trained to model."""
    g = _logistic_grads(data.X, data.y, model.theta, lam, np.asarray(cost_grad, float), np.array([i]))
    return ItemGradient(g[0])


def grad_obj_ridge(data, i, model, lam, cost_grad):
    """Stochastic gradient in item i's features and label for an
    objective-perturbed ridge victim; model must carry the solver's mu."""
    f, l = _ridge_grads(
        data.X, data.y, model.theta, lam, model.mu, np.asarray(cost_grad, float), np.array([i])
    )
    return ItemGradient(f[0], float(l[0]))


def grad_out_logistic(data, i, model, b, lam, cost_grad):
    """As grad_obj_logistic for an output-perturbed victim: the argmin is
    model.theta - b, while the cost gradient stays evaluated at model."""
    theta_eff = model.theta - np.asarray(b, dtype=float)
    g = _logistic_grads(data.X, data.y, theta_eff, lam, np.asarray(cost_grad, float), np.array([i]))
    return ItemGradient(g[0])


def grad_out_ridge(data, i, model, b, lam, cost_grad):
    """As grad_obj_ridge for an output-perturbed victim."""
    theta_eff = model.theta - np.asarray(b, dtype=float)
    f, l = _ridge_grads(
        data.X, data.y, theta_eff, lam, model.mu, np.asarray(cost_grad, float), np.array([i])
    )
    return ItemGradient(f[0], float(l[0]))


def batch_item_gradients(victim, data, model, b, cost_grad, indices):
    """Gradients for several items of one trained model, sharing a single
    factored system.

    Returns (features, labels): an (m, d) array and either an (m,) array
    (ridge) or None (logistic).
    """
    idx = np.asarray(indices, dtype=int)
    cost_grad = np.asarray(cost_grad, dtype=float)
    theta_eff = model.theta
    if victim.mechanism is Mechanism.OUTPUT:
        theta_eff = theta_eff - np.asarray(b, dtype=float)
    if victim.base is BaseLearner.LOGISTIC:
        return _logistic_grads(data.X, data.y, theta_eff, victim.lam, cost_grad, idx), None
    return _ridge_grads(data.X, data.y, theta_eff, victim.lam, model.mu, cost_grad, idx)


def finite_difference_oracle(victim, data, i, b, cost, h=1e-5, settings=None):
    """Central differences of C(M(D, b)) in item i's coordinates, holding
    the noise draw b fixed and retraining at each perturbed point.

    Validates the analytic gradients; the error decays as O(h^2). Solver
    tolerances must be well below h for the quotients to be meaningful.
    """
    if not 1e-6 <= h <= 1e-4:
        raise ValueError("h must lie in [1e-6, 1e-4]")
    settings = settings or DEFAULT_SETTINGS

    def cost_at(features, label):
        shifted = data.with_modified([i], features[None, :], np.array([label]))
        return eval_cost(cost, train_mechanism(victim, shifted, b, settings))

    x0 = data.X[i].copy()
    y0 = float(data.y[i])
    d_feat = np.empty(data.dim)
    for c in range(data.dim):
        xp, xm = x0.copy(), x0.copy()
        xp[c] += h
        xm[c] -= h
        d_feat[c] = (cost_at(xp, y0) - cost_at(xm, y0)) / (2.0 * h)
    if victim.base is BaseLearner.LOGISTIC:
        return ItemGradient(d_feat)
    d_label = (cost_at(x0, y0 + h) - cost_at(x0, y0 - h)) / (2.0 * h)
    return ItemGradient(d_feat, float(d_label))
