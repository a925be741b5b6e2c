"""Forward-difference gradient operator and its exact adjoint.

Gradients are 1-pixel shifted differences on the valid region (no padding):
dx is (C, H, W-1), dy is (C, H-1, W). The adjoint is the literal transpose
of that linear stencil, so <D x, g> == <x, D^T g> holds to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .image import Image


@dataclass(eq=False)
class GradientField:
    """Per-channel horizontal/vertical difference maps of one image."""

    dx: np.ndarray  # (C, H, W-1)
    dy: np.ndarray  # (C, H-1, W)


def gradient(img: Image) -> GradientField:
    """Valid-region forward differences; requires H >= 2 and W >= 2."""
    if img.height < 2 or img.width < 2:
        raise ShapeError(f"gradient needs H, W >= 2, got {img.height}x{img.width}")
    dx, dy = gradient_arrays(img.data)
    return GradientField(dx, dy)


def gradient_arrays(planar: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    dx = planar[:, :, 1:] - planar[:, :, :-1]
    dy = planar[:, 1:, :] - planar[:, :-1, :]
    return dx, dy


def gradient_adjoint(gf: GradientField, h: int, w: int) -> np.ndarray:
    """Apply D^T to a gradient field, yielding an image-shaped buffer.

    out[i, j] accumulates dx[i, j-1] - dx[i, j] and dy[i-1, j] - dy[i, j],
    with out-of-range terms dropped.
    """
    c = gf.dx.shape[0]
    if gf.dx.shape != (c, h, w - 1) or gf.dy.shape != (c, h - 1, w):
        raise ShapeError(
            f"gradient field shapes {gf.dx.shape}/{gf.dy.shape} do not match "
            f"a {h}x{w} domain")
    return gradient_adjoint_arrays(gf.dx, gf.dy, (c, h, w))


def gradient_adjoint_arrays(dx: np.ndarray, dy: np.ndarray,
                            shape: tuple[int, int, int]) -> np.ndarray:
    out = np.zeros(shape)
    out[:, :, :-1] -= dx
    out[:, :, 1:] += dx
    out[:, :-1, :] -= dy
    out[:, 1:, :] += dy
    return out
