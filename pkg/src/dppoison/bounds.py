"""Closed-form resistance bounds for private learners under poisoning.

An attacker who modifies at most k items of the training set of an
epsilon-differentially-private learner can shrink (or grow) the expected
attack cost J only by a factor exp(k*epsilon): privacy itself bounds how
effective poisoning can be, independently of the learning procedure.
These calculators evaluate that bound, its (epsilon, delta) relaxation,
and the implied minimum number of items an attacker must touch to reach
a given cost reduction.

Sign conventions: for a nonnegative cost the attacker drives J toward 0
from above, so the bound is a floor below J(D); for a nonpositive cost
the attacker drives J downward and the bound is again a floor (more
negative than J(D)). With delta > 0 the floors need a uniform bound
cbar on |C|.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .core import Sign

__all__ = [
    "BoundQuery",
    "lower_bound_pure",
    "min_items_pure",
    "lower_bound_approx",
    "min_items_approx",
]

# exp overflows shortly above this; callers may legally ask for huge k
# (e.g. tau = infinity sweeps), so clamp instead of overflowing.
_EXP_LIMIT = 700.0

# Slack used when rounding analytic item counts up to an integer, so a
# count that is an integer up to float error does not get bumped by one.
_CEIL_SLACK = 1e-9


def _ceil_with_slack(v):
    f = math.floor(v)
    if v - f <= _CEIL_SLACK * max(1.0, abs(v)):
        return int(f)
    return int(f) + 1


@dataclass(frozen=True)
class BoundQuery:
    """Inputs shared by the bound calculators.

    j_clean is the attack cost on the clean data, k the number of items
    the attacker may modify, tau the desired cost-reduction factor.
    """

    j_clean: float
    epsilon: float
    k: int = 0
    delta: float = 0.0
    cbar: Optional[float] = None
    sign: Sign = Sign.NON_NEGATIVE
    tau: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "sign", Sign(self.sign))
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not 0.0 <= self.delta < 1.0:
            raise ValueError("delta must lie in [0, 1)")
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if self.tau < 1.0:
            raise ValueError("tau must be at least 1")
        if self.sign is Sign.NON_NEGATIVE and self.j_clean < 0:
            raise ValueError("a non-negative cost cannot have j_clean < 0")
        if self.sign is Sign.NON_POSITIVE and self.j_clean > 0:
            raise ValueError("a non-positive cost cannot have j_clean > 0")
        if self.delta > 0 and self.cbar is None:
            raise ValueError("delta > 0 requires cbar")
        if self.cbar is not None and self.cbar <= 0:
            raise ValueError("cbar must be positive")


def lower_bound_pure(q):
    """Floor on J after poisoning k items of a pure epsilon-DP learner.

    exp(-k*eps) * J(D) for a nonnegative cost, exp(k*eps) * J(D) for a
    nonpositive one. For k*eps beyond exp range the limit value is
    returned directly (0, or -inf for a nonpositive cost, which carries
    no finite floor without cbar).
    """
    if q.delta != 0:
        raise ValueError("lower_bound_pure requires delta = 0")
    ke = q.k * q.epsilon
    if q.sign is Sign.NON_NEGATIVE:
        if ke > _EXP_LIMIT:
            return 0.0
        return math.exp(-ke) * q.j_clean
    if q.j_clean == 0.0:
        return 0.0
    if ke > _EXP_LIMIT:
        return -math.inf
    return math.exp(ke) * q.j_clean


def min_items_pure(epsilon, tau):
    """Minimum modified items to cut the cost of a pure epsilon-DP learner
    by a factor tau: ceil(log(tau) / epsilon).

    tau = inf returns inf: pure privacy never lets the cost reach zero.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if tau < 1.0:
        raise ValueError("tau must be at least 1")
    if math.isinf(tau):
        return math.inf
    return _ceil_with_slack(math.log(tau) / epsilon)


def lower_bound_approx(q):
    """Floor on J after poisoning k items of an (epsilon, delta)-DP learner.

    With a = cbar * delta / (exp(eps) - 1):

        nonnegative cost:  max(exp(-k*eps) * (J + a) - a, 0)
        nonpositive cost:  max(exp(+k*eps) * (J - a) + a, -cbar)

    Both reduce exactly to the pure bound at delta = 0. The nonpositive
    branch amplifies with exp(+k*eps): each modified item can cut at most
    a factor exp(eps) plus the delta slack from the cost, and unwinding
    that recursion k times multiplies the (shifted) clean cost by
    exp(k*eps). The cost can never fall below -cbar, hence the clamp.
    """
    if q.cbar is None:
        raise ValueError("lower_bound_approx requires cbar")
    a = q.cbar * q.delta / math.expm1(q.epsilon)
    ke = q.k * q.epsilon
    if q.sign is Sign.NON_NEGATIVE:
        if ke > _EXP_LIMIT:
            return 0.0
        return max(math.exp(-ke) * (q.j_clean + a) - a, 0.0)
    shifted = q.j_clean - a
    if shifted == 0.0:
        return max(a, -q.cbar)
    if ke > _EXP_LIMIT:
        return -q.cbar
    return max(math.exp(ke) * shifted + a, -q.cbar)


def min_items_approx(q):
    """Minimum modified items to reach a cost-reduction factor tau under
    (epsilon, delta) privacy.

    Nonnegative cost (target J(D)/tau, tau >= 1):
        ceil((1/eps) * log(((e^eps - 1) J tau + cbar delta tau)
                           / ((e^eps - 1) J + cbar delta tau)))
    and the tau = inf limit is finite for delta > 0: the weaker guarantee
    lets an attacker null the cost with finitely many items.

    Nonpositive cost (target tau * J(D), tau in [1, -cbar/J(D)]):
        ceil((1/eps) * log(((e^eps - 1) J tau - cbar delta)
                           / ((e^eps - 1) J - cbar delta)))
    """
    if q.cbar is None:
        raise ValueError("min_items_approx requires cbar")
    if q.j_clean == 0.0:
        raise ValueError("min_items_approx requires j_clean != 0")
    em1 = math.expm1(q.epsilon)
    j, tau = q.j_clean, q.tau
    if q.sign is Sign.NON_NEGATIVE:
        if math.isinf(tau):
            if q.delta == 0.0:
                return math.inf
            ratio = 1.0 + em1 * j / (q.cbar * q.delta)
        else:
            ratio = (em1 * j * tau + q.cbar * q.delta * tau) / (em1 * j + q.cbar * q.delta * tau)
    else:
        tau_max = -q.cbar / j
        if tau > tau_max * (1.0 + 1e-12):
            raise ValueError(f"tau must lie in [1, {tau_max}] for this nonpositive cost")
        ratio = (em1 * j * tau - q.cbar * q.delta) / (em1 * j - q.cbar * q.delta)
    return _ceil_with_slack(math.log(ratio) / q.epsilon)
