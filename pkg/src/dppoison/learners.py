"""Base ERM solvers and the two private training mechanisms.

Provides the spherically symmetric noise sampler, a damped-Newton solver
for L2-regularized logistic regression (optionally with a linear noise
term in the objective), a norm-constrained ridge solver that returns the
dual variable of the constraint, and the mechanism dispatcher.

All solvers are pure functions of (data, noise, settings): repeated calls
return bit-identical results. Problem sizes here are small and dense, so
direct linear algebra is used throughout.
"""

from dataclasses import dataclass

import numpy as np

from .core import BaseLearner, Mechanism, ModelParams, sigmoid, softplus

__all__ = [
    "SolverError",
    "SolverSettings",
    "DEFAULT_SETTINGS",
    "sample_noise",
    "train_base_logistic",
    "train_objective_perturbed_logistic",
    "train_base_ridge_constrained",
    "train_mechanism",
]


class SolverError(RuntimeError):
    """Raised when a solver fails to reach its tolerance."""


@dataclass(frozen=True)
class SolverSettings:
    grad_tol: float = 1e-10
    max_iters: int = 10_000
    dual_tol: float = 1e-12

    def __post_init__(self):
        if self.grad_tol <= 0 or self.dual_tol <= 0 or self.max_iters <= 0:
            raise ValueError("solver settings must be positive")


DEFAULT_SETTINGS = SolverSettings()


def sample_noise(dim, scale, rng):
    """Draw noise b = r * u with u uniform on the unit sphere and
    r ~ Gamma(shape=dim, scale=scale).

    This is the spherically symmetric distribution with density
    proportional to exp(-||b|| / scale); the mean norm is dim * scale.
    scale=0 is accepted as the degenerate zero-noise limit.
    """
    if dim < 1:
        raise ValueError("dim must be at least 1")
    if scale < 0:
        raise ValueError("scale must be nonnegative")
    r = rng.gamma(shape=dim, scale=scale)
    g = rng.standard_normal(dim)
    nrm = np.linalg.norm(g)
    while nrm == 0.0:  # probability zero, guarded anyway
        g = rng.standard_normal(dim)
        nrm = np.linalg.norm(g)
    return (r / nrm) * g


def _logistic_objective(theta, X, y, lam, b):
    t = y * (X @ theta)
    return float(np.sum(softplus(-t)) + 0.5 * lam * (theta @ theta) + b @ theta)


def _solve_logistic(X, y, lam, b, settings, warm_start=None):
    """Damped Newton on the perturbed logistic objective.

    Newton directions are backtracked against the objective; if a direction
    stalls, a scaled gradient step is tried before giving up. The objective
    is lam-strongly convex, so this converges for any starting point.
    """
    n, d = X.shape
    if warm_start is not None:
        theta = np.array(warm_start, dtype=float)
    else:
        theta = np.zeros(d)
    eye = np.eye(d)
    for _ in range(settings.max_iters):
        t = y * (X @ theta)
        p = sigmoid(-t)  # 1 / (1 + exp(t_j))
        grad = lam * theta - X.T @ (y * p) + b
        if np.linalg.norm(grad) <= settings.grad_tol:
            return theta
        w = p * (1.0 - p)
        H = lam * eye + X.T @ (X * w[:, None])
        step = np.linalg.solve(H, grad)
        f0 = _logistic_objective(theta, X, y, lam, b)
        # Near the optimum the predicted decrease drops below the rounding
        # resolution of the objective; without this slack the line search
        # rejects steps on floating-point noise and the iteration stalls.
        f_slack = 1e-12 * max(1.0, abs(f0))
        accepted = False
        for direction in (step, grad / (lam + n)):
            slope = float(grad @ direction)
            size = 1.0
            for _ in range(60):
                cand = theta - size * direction
                f_cand = _logistic_objective(cand, X, y, lam, b)
                if f_cand <= f0 - 1e-4 * size * slope + f_slack:
                    theta = cand
                    accepted = True
                    break
                size *= 0.5
            if accepted:
                break
        if not accepted:
            raise SolverError("logistic solver stalled: no descent step found")
    raise SolverError(f"logistic solver did not converge within {settings.max_iters} iterations")


def _check_classification_labels(y):
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("classification labels must be -1 or +1")


def train_base_logistic(data, lam, settings=None, warm_start=None):
    """Fit L2-regularized logistic regression; the noiseless base learner."""
    return train_objective_perturbed_logistic(
        data, lam, np.zeros(data.dim), settings, warm_start=warm_start
    )


def train_objective_perturbed_logistic(data, lam, b, settings=None, warm_start=None):
    """Fit logistic regression with the linear noise term b.theta added to
    the objective. The returned theta satisfies the stationarity condition

        lam*theta - sum_j y_j x_j / (1 + exp(y_j theta.x_j)) + b = 0

    within grad_tol."""
    settings = settings or DEFAULT_SETTINGS
    if lam <= 0:
        raise ValueError("lam must be positive")
    _check_classification_labels(data.y)
    b = np.asarray(b, dtype=float)
    if b.shape != (data.dim,):
        raise ValueError("noise dimension does not match the dataset")
    warm = warm_start.theta if isinstance(warm_start, ModelParams) else warm_start
    theta = _solve_logistic(data.X, data.y, lam, b, settings, warm_start=warm)
    return ModelParams(theta, 0.0)


def train_base_ridge_constrained(data, lam, rho, b=None, settings=None):
    """Solve norm-constrained ridge regression, optionally with a linear
    noise term b.theta in the objective (b=0 gives the base learner).

    Returns theta and the dual mu of the constraint ||theta|| <= rho,
    satisfying (X'X + (lam+mu)I) theta = X'y - b with mu >= 0 and
    complementary slackness. The unconstrained solution is used whenever
    it is feasible (mu = 0 exactly); otherwise mu is found by bisection
    on the strictly decreasing map mu -> ||theta(mu)||.
    """
    settings = settings or DEFAULT_SETTINGS
    if lam <= 0 or rho <= 0:
        raise ValueError("lam and rho must be positive")
    if b is None:
        b = np.zeros(data.dim)
    b = np.asarray(b, dtype=float)
    if b.shape != (data.dim,):
        raise ValueError("noise dimension does not match the dataset")
    X, y = data.X, data.y
    d = data.dim
    A = X.T @ X
    rhs = X.T @ y - b
    theta = np.linalg.solve(A + lam * np.eye(d), rhs)
    if np.linalg.norm(theta) <= rho:
        return ModelParams(theta, 0.0)

    # Constraint active: work in the eigenbasis of X'X so each norm
    # evaluation is O(d), then bisect for the dual.
    evals, Q = np.linalg.eigh(A)
    c = Q.T @ rhs

    def norm_at(mu):
        return float(np.linalg.norm(c / (evals + lam + mu)))

    lo, hi = 0.0, max(1.0, lam)
    for _ in range(500):
        if norm_at(hi) <= rho:
            break
        hi *= 2.0
    else:
        raise SolverError("could not bracket the constraint dual")
    for _ in range(300):
        if hi - lo <= settings.dual_tol * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        if norm_at(mid) > rho:
            lo = mid
        else:
            hi = mid
    mu = 0.5 * (lo + hi)
    theta = Q @ (c / (evals + lam + mu))
    return ModelParams(theta, mu)


def train_mechanism(victim, data, b, settings=None, warm_start=None):
    """Train the victim's private learner on data with noise draw b.

    Objective perturbation adds b.theta to the training objective; output
    perturbation trains the base learner and adds b to the result (so the
    norm constraint of a ridge victim applies to theta - b). Deterministic
    given (data, b)."""
    b = np.asarray(b, dtype=float)
    if b.shape != (data.dim,):
        raise ValueError("noise dimension does not match the dataset")
    if victim.base is BaseLearner.LOGISTIC:
        if victim.mechanism is Mechanism.OBJECTIVE:
            return train_objective_perturbed_logistic(
                data, victim.lam, b, settings, warm_start=warm_start
            )
        base = train_base_logistic(data, victim.lam, settings, warm_start=warm_start)
        return ModelParams(base.theta + b, 0.0)
    if victim.mechanism is Mechanism.OBJECTIVE:
        return train_base_ridge_constrained(data, victim.lam, victim.rho, b, settings)
    base = train_base_ridge_constrained(data, victim.lam, victim.rho, None, settings)
    return ModelParams(base.theta + b, base.mu)
