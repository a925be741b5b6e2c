"""Central finite-difference oracle for validating the analytic gradients.

Every objective exposes an exact gradient; this module checks them against
(f(x + h e_k) - f(x - h e_k)) / 2h with no knowledge of how the analytic
path is computed. Relative error uses |a - f| / max(1e-8, |a| + |f|), which
stays meaningful when both values approach zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import loss
from .errors import NonFiniteError, UnknownObjectiveError
from .image import Image, RangeTag

OBJECTIVES = ("gp", "cp", "spl", "two_target", "alpha_identity")

REL_ERROR_FLOOR = 1e-8


@dataclass
class GradCheckResult:
    max_rel_error: float
    max_abs_error: float
    worst_index: tuple[int, int, int]  # (channel, row, col)
    n_evaluated: int

    def to_json_dict(self) -> dict:
        return {
            "max_rel_error": self.max_rel_error,
            "max_abs_error": self.max_abs_error,
            "worst_index": list(self.worst_index),
            "n_evaluated": self.n_evaluated,
        }


def finite_diff_gradient(f: Callable[[Image], float], at: Image,
                         h: float = 1e-6,
                         indices: Optional[Sequence[int]] = None) -> np.ndarray:
    """Central differences of f at `at`, one entry per (sub)sampled index.

    `indices` are flat sample indices; None evaluates every sample. Entries
    that were not evaluated stay zero.
    """
    if h <= 0:
        raise ValueError("step size h must be > 0")
    buf = np.zeros_like(at.data)
    flat_idx = range(at.data.size) if indices is None else indices
    base = at.data
    for k in flat_idx:
        plus = base.copy()
        plus.flat[k] += h
        minus = base.copy()
        minus.flat[k] -= h
        fp = f(Image(plus, at.range_tag))
        fm = f(Image(minus, at.range_tag))
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise NonFiniteError(f"objective non-finite at perturbed index {k}")
        buf.flat[k] = (fp - fm) / (2.0 * h)
    return buf


def _random_image(rng: np.random.Generator, shape) -> Image:
    """Uniform samples on [-1, 1] with 1% nudged +0.5 so no profile is
    accidentally degenerate."""
    arr = rng.uniform(-1.0, 1.0, shape)
    k = max(1, arr.size // 100)
    arr.flat[rng.choice(arr.size, size=k, replace=False)] += 0.5
    return Image(arr, RangeTag.SYMMETRIC)


def _objective_under_test(objective: str, rng: np.random.Generator, shape,
                          cfg: loss.LossConfig):
    """Returns (f(Image) -> float, analytic gradient at the base point, base)."""
    gen = _random_image(rng, shape)
    second = _random_image(rng, shape)
    if objective == "gp":
        return (lambda x: loss.gp_loss(x, second, cfg)[0],
                loss.gp_loss(gen, second, cfg)[1], gen)
    if objective == "cp":
        return (lambda x: loss.cp_loss(x, second, cfg)[0],
                loss.cp_loss(gen, second, cfg)[1], gen)
    if objective == "spl":
        return (lambda x: loss.spl_objective(x, second, cfg)[0].objective,
                loss.spl_objective(gen, second, cfg)[1].d_output, gen)
    third = _random_image(rng, shape)
    if objective == "two_target":
        return (lambda x: loss.two_target_objective(x, second, third, cfg)[0].objective,
                loss.two_target_objective(gen, second, third, cfg)[1].d_output, gen)
    if objective == "alpha_identity":
        return (lambda x: loss.alpha_identity_objective(x, second, third, cfg)[0].objective,
                loss.alpha_identity_objective(gen, second, third, cfg)[1].d_output, gen)
    raise UnknownObjectiveError(
        f"unknown objective {objective!r}; expected one of {OBJECTIVES}")


def gradcheck(objective: str, seed: int, size: tuple[int, int, int] = (8, 8, 3),
              h: float = 1e-6, cfg: Optional[loss.LossConfig] = None,
              sabotage: bool = False) -> GradCheckResult:
    """Compare the analytic gradient of one objective against the oracle.

    `size` is (height, width, channels). Deterministic given the seed. The
    `sabotage` hook corrupts the analytic gradient and exists as a negative
    control for the surrounding tooling.
    """
    height, width, channels = size
    shape = (channels, height, width)
    if cfg is None:
        alpha = 0.3 if objective == "alpha_identity" else 0.0
        cfg = loss.LossConfig(alpha_identity=alpha)
    rng = np.random.default_rng(seed)
    f, analytic, base = _objective_under_test(objective, rng, shape, cfg)
    if sabotage:
        analytic = analytic * 1.02 + 1e-3
    n = base.data.size
    if n > 4096:
        indices = np.sort(rng.choice(n, size=max(256, n // 64), replace=False))
    else:
        indices = np.arange(n)
    numeric = finite_diff_gradient(f, base, h, indices)
    a = analytic.flat[indices]
    fd = numeric.flat[indices]
    abs_err = np.abs(a - fd)
    rel_err = abs_err / np.maximum(REL_ERROR_FLOOR, np.abs(a) + np.abs(fd))
    worst = int(np.argmax(rel_err))
    worst_index = np.unravel_index(int(indices[worst]), shape)
    return GradCheckResult(
        max_rel_error=float(rel_err[worst]),
        max_abs_error=float(abs_err.max()),
        worst_index=(int(worst_index[0]), int(worst_index[1]), int(worst_index[2])),
        n_evaluated=int(len(indices)),
    )
