"""Pixel-space evaluation metrics: PSNR, windowed SSIM, mean absolute diff.

PSNR and SSIM assume UNIT-range images (peak 1.0); symmetric inputs must be
converted explicitly rather than silently rescaled. SSIM uses uniform 8x8
windows at stride 1 with population moments, a deliberately simple variant
that is exactly reproducible by direct window enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RangeTagError, ShapeError
from .image import Image, RangeTag

SSIM_WINDOW = 8
SSIM_C1 = 0.01 ** 2
SSIM_C2 = 0.03 ** 2


@dataclass
class MetricReport:
    psnr_db: float  # may be +inf for identical images
    ssim: float
    l1: float

    def to_json_dict(self) -> dict:
        return {
            "psnr_db": "inf" if math.isinf(self.psnr_db) else self.psnr_db,
            "ssim": self.ssim,
            "l1": self.l1,
        }


def _check_pair(a: Image, b: Image, need_unit: bool) -> None:
    if a.data.shape != b.data.shape:
        raise ShapeError(f"image shapes differ: {a.data.shape} vs {b.data.shape}")
    if need_unit and not (a.range_tag is RangeTag.UNIT and b.range_tag is RangeTag.UNIT):
        raise RangeTagError("metric expects UNIT-range images; convert first")


def psnr(a: Image, b: Image) -> float:
    """10 log10(1 / MSE) against unit dynamic range; +inf when MSE is zero."""
    _check_pair(a, b, need_unit=True)
    mse = float(np.mean((a.data - b.data) ** 2))
    return math.inf if mse == 0.0 else 10.0 * math.log10(1.0 / mse)


def _window_sums(x: np.ndarray, k: int) -> np.ndarray:
    """Sums over all k x k windows (stride 1) via an integral image."""
    c = np.cumsum(np.cumsum(x, axis=0), axis=1)
    c = np.pad(c, ((1, 0), (1, 0)))
    return c[k:, k:] - c[:-k, k:] - c[k:, :-k] + c[:-k, :-k]


def ssim(a: Image, b: Image) -> float:
    """Mean local structural similarity over 8x8 sliding windows."""
    _check_pair(a, b, need_unit=True)
    k = SSIM_WINDOW
    if a.height < k or a.width < k:
        raise ShapeError(f"ssim needs H, W >= {k}, got {a.height}x{a.width}")
    n = float(k * k)
    values = []
    for xa, xb in zip(a.data, b.data):
        mu_a = _window_sums(xa, k) / n
        mu_b = _window_sums(xb, k) / n
        var_a = _window_sums(xa * xa, k) / n - mu_a * mu_a
        var_b = _window_sums(xb * xb, k) / n - mu_b * mu_b
        cov = _window_sums(xa * xb, k) / n - mu_a * mu_b
        num = (2.0 * mu_a * mu_b + SSIM_C1) * (2.0 * cov + SSIM_C2)
        den = (mu_a ** 2 + mu_b ** 2 + SSIM_C1) * (var_a + var_b + SSIM_C2)
        values.append(num / den)
    return float(np.mean(values))


def mean_abs_diff(a: Image, b: Image) -> float:
    """Mean of |a - b| over all samples."""
    _check_pair(a, b, need_unit=False)
    return float(np.mean(np.abs(a.data - b.data)))


def compute_metrics(a: Image, b: Image) -> MetricReport:
    return MetricReport(psnr_db=psnr(a, b), ssim=ssim(a, b), l1=mean_abs_diff(a, b))
