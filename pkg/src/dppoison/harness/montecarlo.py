"""Monte Carlo estimation of the expected attack cost under mechanism noise."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..core import eval_cost
from ..learners import DEFAULT_SETTINGS, sample_noise, train_mechanism
from ..rng import substream

__all__ = ["CostEstimate", "estimate_attack_cost"]


@dataclass(frozen=True)
class CostEstimate:
    """Sample mean and standard error of the cost over noise draws.

    ``samples`` is the draw count; ``values`` keeps the raw per-draw costs
    for diagnostics.
    """

    mean: float
    stderr: float
    samples: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("samples must be at least 2")
        if self.stderr < 0:
            raise ValueError("stderr must be nonnegative")


def estimate_attack_cost(victim, data, cost, T_e, seed, threads=1, settings=None):
    """Estimate E_b[C(M(data, b))] from T_e independent noise draws.

    Sample s always uses the dedicated stream substream(seed, s) and a cold
    solver start, so the estimate is reproducible bit for bit regardless of
    threads.
    """
    if T_e < 2:
        raise ValueError("T_e must be at least 2 for a standard error")
    if settings is None:
        settings = DEFAULT_SETTINGS
    scale = victim.noise_scale_for(data.n)

    def one(s):
        b = sample_noise(data.dim, scale, substream(seed, s))
        return eval_cost(cost, train_mechanism(victim, data, b, settings=settings))

    samples = np.empty(T_e)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for s, value in zip(range(T_e), pool.map(one, range(T_e))):
                samples[s] = value
    else:
        for s in range(T_e):
            samples[s] = one(s)
    mean = float(samples.mean())
    stderr = float(samples.std(ddof=1) / np.sqrt(T_e))
    return CostEstimate(mean, stderr, T_e, samples)
