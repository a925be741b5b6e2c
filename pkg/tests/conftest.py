"""Shared test helpers: seeded image builders and brute-force oracles.

The oracles here deliberately re-derive quantities with plain Python loops
so they stay independent of the vectorised library paths they check.
"""

import math
from pathlib import Path

import numpy as np

import spl

FIXTURE_DIR = Path(__file__).parent / "fixtures"
NATURAL_32 = FIXTURE_DIR / "natural_32.png"


def rand_image(seed, shape=(3, 8, 8), tag=spl.RangeTag.SYMMETRIC):
    """Uniform [-1, 1] samples with 1% nudged +0.5: no degenerate profiles."""
    rng = np.random.default_rng(seed)
    arr = rng.uniform(-1.0, 1.0, shape)
    k = max(1, arr.size // 100)
    arr.flat[rng.choice(arr.size, size=k, replace=False)] += 0.5
    return spl.Image(arr, tag)


def naive_cosine(u, v, eps=1e-12):
    dot = sum(float(x) * float(y) for x, y in zip(u, v))
    nu = math.sqrt(sum(float(x) * float(x) for x in u))
    nv = math.sqrt(sum(float(y) * float(y) for y in v))
    return dot / ((nu + eps) * (nv + eps))


def naive_profile_similarity(a, b, eps=1e-12):
    """Definition-level re-evaluation: explicit loops over rows and columns."""
    channels, height, width = a.shape
    total = 0.0
    for c in range(channels):
        rows = sum(naive_cosine(a[c, i, :], b[c, i, :], eps) for i in range(height))
        cols = sum(naive_cosine(a[c, :, j], b[c, :, j], eps) for j in range(width))
        total += rows / height + cols / width
    return total


def smooth_field(seed, n=32, passes=2):
    """Box-smoothed seeded noise in roughly [-1, 1]."""
    rng = np.random.default_rng(seed)
    field = rng.uniform(-1.0, 1.0, (n, n))
    for _ in range(passes):
        field = (np.roll(field, 1, 0) + np.roll(field, -1, 0)
                 + np.roll(field, 1, 1) + np.roll(field, -1, 1)
                 + 4.0 * field) / 8.0
    return field / np.abs(field).max()


def tinted_grey_source(seed=11, n=32):
    """Visually grey structure with a mild per-channel tint. The tint keeps
    chroma profile norms healthy, away from the eps-regularised regime."""
    g0 = smooth_field(seed, n)
    g0 = (g0 - g0.mean()) * 0.5
    data = np.stack([1.04 * g0 + 0.05, g0, 0.96 * g0 - 0.05])
    return spl.Image(data, spl.RangeTag.SYMMETRIC)


def flat_colour(rgb, n=32):
    data = np.ones((3, n, n)) * np.asarray(rgb, dtype=float)[:, None, None]
    return spl.Image(data, spl.RangeTag.SYMMETRIC)
