"""Shared random corpora of moment sequences."""
import numpy as np

from hausdorff.fparam import IntervalContext
from hausdorff.measures import SamplerConfig, sample_moment_space

INTERVALS = [(0.0, 1.0), (-1.0, 2.0), (-0.5, 0.5)]


def sampled(count, seed=0, q_max=3, kappa_max=5, biases=(0.0, 0.3)):
    """Yield ``(s, e, ctx, cfg)``; sizes kept where double precision suffices."""
    rng = np.random.default_rng(seed)
    for i in range(count):
        a, b = INTERVALS[i % len(INTERVALS)]
        cfg = SamplerConfig(
            q=int(rng.integers(1, q_max + 1)),
            kappa=int(rng.integers(1, kappa_max + 1)),
            seed=int(rng.integers(2**31)),
            boundary_bias=biases[i % len(biases)],
        )
        ctx = IntervalContext(a, b)
        s, e = sample_moment_space(cfg, ctx)
        yield s, e, ctx, cfg
