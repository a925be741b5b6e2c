"""Row/column profile cosine similarities and their analytic gradients.

The elementary quantity is the similarity of two images a, b of equal shape:

    sim(a, b) = sum_c [ mean_i cos(a_c[i, :], b_c[i, :])
                      + mean_j cos(a_c[:, j], b_c[:, j]) ]

with cos(u, v) = <u, v> / ((|u| + eps) (|v| + eps)). Rows and columns of
each channel are compared as whole vectors, so the measure reacts to the
spatial pattern along each direction rather than to pixelwise error alone.

Four similarity terms are built from it:

* gradient profile (GP):       sim on forward-difference maps (dx and dy
  are separate operands whose similarities are summed)
* plain colour (CP-RGB):       sim on the raw channels
* converted colour (CP-YUV):   sim after the RGB->YUV map
* colour gradients (CP-gYUV):  GP-style sim on gradients of the YUV planes

The objective handed to the optimiser is the negative weighted sum of the
four. Every term's exact gradient is accumulated through its linear chain
(difference-operator adjoint, colour-matrix adjoint).

Degenerate profiles: a profile with exactly zero norm contributes zero
similarity and zero gradient. Norms merely *near* zero are valid inputs
but sit on steep slopes of the eps-regularised cosine, so optimisation
fixtures should keep profile norms well above eps.

Greyscale inputs: the GP and plain-colour terms apply per channel as-is;
the two YUV terms are undefined without three channels and are skipped,
which the report records.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .diffops import gradient_arrays, gradient_adjoint_arrays
from .errors import ChannelError, NonFiniteError, ShapeError
from .image import (BT601, ColourMatrix, Image, apply_colour_adjoint,
                    apply_colour_forward)


@dataclass(frozen=True)
class TermWeights:
    gp: float = 1.0
    cp_rgb: float = 1.0
    cp_yuv: float = 1.0
    cp_grad_yuv: float = 1.0

    def __post_init__(self):
        if min(self.gp, self.cp_rgb, self.cp_yuv, self.cp_grad_yuv) < 0:
            raise ValueError("term weights must be >= 0")


@dataclass(frozen=True)
class LossConfig:
    epsilon: float = 1e-12
    colour_matrix: ColourMatrix = BT601
    weights: TermWeights = field(default_factory=TermWeights)
    alpha_identity: float = 0.0

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        if self.alpha_identity < 0:
            raise ValueError("alpha_identity must be >= 0")


@dataclass
class LossReport:
    """Similarity total, its negation (the minimised objective) and the
    per-term breakdown.

    ``gp_input`` is the extra structure term of the input-anchored
    composite; when present it participates in ``total`` scaled by
    ``alpha``. Skipped YUV terms are reported as None and contribute 0.
    """

    total: float
    objective: float
    gp: float
    cp_rgb: float
    cp_yuv: Optional[float]
    cp_grad_yuv: Optional[float]
    yuv_skipped: bool
    gp_input: Optional[float] = None
    alpha: float = 0.0
    per_channel_row_col: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {
            "total": self.total,
            "objective": self.objective,
            "gp": self.gp,
            "cp_rgb": self.cp_rgb,
            "cp_yuv": self.cp_yuv,
            "cp_grad_yuv": self.cp_grad_yuv,
            "yuv_skipped": self.yuv_skipped,
        }
        if self.gp_input is not None:
            out["gp_input"] = self.gp_input
            out["alpha"] = self.alpha
        return out


@dataclass(eq=False)
class LossGradient:
    """d(objective)/d(generated image), same planar shape as the operand."""

    d_output: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.d_output)):
            raise NonFiniteError("loss gradient contains non-finite entries")


def _check_same_shape(*arrays: np.ndarray) -> None:
    first = arrays[0].shape
    for arr in arrays[1:]:
        if arr.shape != first:
            raise ShapeError(f"operand shapes differ: {first} vs {arr.shape}")


def _profile_terms(a, b, eps, need_grad):
    """Core similarity over one operand pair of shape (C, H, W).

    Returns (row_means, col_means, grad): per-channel averages of the
    profile cosines along each direction and d(sum)/d(a) or None.
    """
    grad = np.zeros_like(a) if need_grad else None
    means = []
    for axis in (2, 1):  # row profiles run along W, column profiles along H
        count = a.shape[1] if axis == 2 else a.shape[2]
        nu = np.sqrt(np.sum(a * a, axis=axis))
        nv = np.sqrt(np.sum(b * b, axis=axis))
        dots = np.sum(a * b, axis=axis)
        cos = dots / ((nu + eps) * (nv + eps))
        means.append(cos.mean(axis=1))
        if need_grad:
            nu_e = np.expand_dims(nu, axis)
            cos_e = np.expand_dims(cos, axis)
            vhat = b / np.expand_dims(nv + eps, axis)
            # cos * u / (|u| (|u| + eps)) vanishes with u, so an exactly-zero
            # profile may safely divide by 1 instead
            denom = nu * (nu + eps)
            denom = np.expand_dims(np.where(denom > 0.0, denom, 1.0), axis)
            grad += (vhat / (nu_e + eps) - cos_e * a / denom) / count
    return means[0], means[1], grad


class _Term:
    """One similarity term: value, per-channel breakdown, image-space grad."""

    __slots__ = ("value", "rows_cols", "grad")

    def __init__(self, value, rows_cols, grad):
        self.value = value
        self.rows_cols = rows_cols
        self.grad = grad


def _plain_term(a, b, eps, need_grad=True) -> _Term:
    rows, cols, grad = _profile_terms(a, b, eps, need_grad)
    return _Term(float(rows.sum() + cols.sum()),
                 np.stack([rows, cols], axis=1).tolist(), grad)


def _gradient_term(a, b, eps, need_grad=True) -> _Term:
    """GP-style similarity: sum over the dx and dy difference operands."""
    if a.shape[1] < 2 or a.shape[2] < 2:
        raise ShapeError(
            f"gradient terms need H, W >= 2, got {a.shape[1]}x{a.shape[2]}")
    dxa, dya = gradient_arrays(a)
    dxb, dyb = gradient_arrays(b)
    rx, cx, gx = _profile_terms(dxa, dxb, eps, need_grad)
    ry, cy, gy = _profile_terms(dya, dyb, eps, need_grad)
    grad = gradient_adjoint_arrays(gx, gy, a.shape) if need_grad else None
    rows_cols = {"dx": np.stack([rx, cx], axis=1).tolist(),
                 "dy": np.stack([ry, cy], axis=1).tolist()}
    return _Term(float(rx.sum() + cx.sum() + ry.sum() + cy.sum()),
                 rows_cols, grad)


def _colour_terms(gen, ref, cfg, need_grad=True):
    """CP-YUV and CP-gYUV terms with gradients pulled back to RGB space."""
    yuv_gen = apply_colour_forward(gen, cfg.colour_matrix)
    yuv_ref = apply_colour_forward(ref, cfg.colour_matrix)
    yuv = _plain_term(yuv_gen, yuv_ref, cfg.epsilon, need_grad)
    gyuv = _gradient_term(yuv_gen, yuv_ref, cfg.epsilon, need_grad)
    if need_grad:
        yuv.grad = apply_colour_adjoint(yuv.grad, cfg.colour_matrix)
        gyuv.grad = apply_colour_adjoint(gyuv.grad, cfg.colour_matrix)
    return yuv, gyuv


def profile_similarity(a: Image, b: Image, epsilon: float = 1e-12) -> float:
    """Summed row+column profile cosine similarity; range [-2C, 2C]."""
    _check_same_shape(a.data, b.data)
    return _plain_term(a.data, b.data, epsilon, need_grad=False).value


def profile_similarity_grad(a: Image, b: Image,
                            epsilon: float = 1e-12) -> tuple[float, np.ndarray]:
    """Similarity and its exact gradient with respect to `a`."""
    _check_same_shape(a.data, b.data)
    term = _plain_term(a.data, b.data, epsilon)
    return term.value, term.grad


def gp_loss(gen: Image, target: Image,
            cfg: LossConfig = LossConfig()) -> tuple[float, np.ndarray]:
    """Gradient-profile similarity and its gradient w.r.t. `gen`."""
    _check_same_shape(gen.data, target.data)
    term = _gradient_term(gen.data, target.data, cfg.epsilon)
    return term.value, term.grad


def cp_loss(gen: Image, target: Image,
            cfg: LossConfig = LossConfig()) -> tuple[float, np.ndarray]:
    """Colour-profile similarity (RGB + YUV + gradient-YUV) and gradient."""
    _check_same_shape(gen.data, target.data)
    if gen.channels != 3:
        raise ChannelError(f"cp_loss needs 3 channels, got {gen.channels}")
    rgb = _plain_term(gen.data, target.data, cfg.epsilon)
    yuv, gyuv = _colour_terms(gen.data, target.data, cfg)
    return rgb.value + yuv.value + gyuv.value, rgb.grad + yuv.grad + gyuv.grad


def _objective(gen, shape_ref, colour_ref, cfg, gp_input=None):
    """Negative weighted sum of the four terms (plus the optional
    input-anchored structure term). Zero-weight terms are skipped in the
    accumulation so single-term configurations reproduce the standalone
    ops bitwise."""
    w = cfg.weights
    gp_term = _gradient_term(gen, shape_ref, cfg.epsilon)
    rgb = _plain_term(gen, colour_ref, cfg.epsilon)
    yuv_skipped = gen.shape[0] != 3
    breakdown = {"gp": gp_term.rows_cols, "cp_rgb": rgb.rows_cols}
    pairs = [(w.gp, gp_term), (w.cp_rgb, rgb)]
    yuv = gyuv = None
    if not yuv_skipped:
        yuv, gyuv = _colour_terms(gen, colour_ref, cfg)
        breakdown["cp_yuv"] = yuv.rows_cols
        breakdown["cp_grad_yuv"] = gyuv.rows_cols
        pairs += [(w.cp_yuv, yuv), (w.cp_grad_yuv, gyuv)]
    alpha = cfg.alpha_identity
    if gp_input is not None:
        breakdown["gp_input"] = gp_input.rows_cols
        pairs.append((alpha, gp_input))
    total = 0.0
    grad = None
    for weight, term in pairs:
        if weight == 0.0:
            continue
        total += term.value if weight == 1.0 else weight * term.value
        part = term.grad if weight == 1.0 else weight * term.grad
        grad = part.copy() if grad is None else grad + part
    if grad is None:
        grad = np.zeros_like(gen)
    report = LossReport(
        total=total,
        objective=-total,
        gp=gp_term.value,
        cp_rgb=rgb.value,
        cp_yuv=None if yuv_skipped else yuv.value,
        cp_grad_yuv=None if yuv_skipped else gyuv.value,
        yuv_skipped=yuv_skipped,
        gp_input=gp_input.value if gp_input is not None else None,
        alpha=alpha if gp_input is not None else 0.0,
        per_channel_row_col=breakdown,
    )
    return report, LossGradient(-grad)


def spl_objective(gen: Image, target: Image,
                  cfg: LossConfig = LossConfig()) -> tuple[LossReport, LossGradient]:
    """Full objective: negative weighted sum of GP and the colour terms."""
    _check_same_shape(gen.data, target.data)
    return _objective(gen.data, target.data, target.data, cfg)


def two_target_objective(gen: Image, shape_src: Image, colour_ref: Image,
                         cfg: LossConfig = LossConfig()) -> tuple[LossReport, LossGradient]:
    """Structure measured against `shape_src`, colour against `colour_ref`."""
    _check_same_shape(gen.data, shape_src.data, colour_ref.data)
    return _objective(gen.data, shape_src.data, colour_ref.data, cfg)


def alpha_identity_objective(gen: Image, input_img: Image, target: Image,
                             cfg: LossConfig = LossConfig()) -> tuple[LossReport, LossGradient]:
    """Full objective plus an input-anchored structure term scaled by alpha."""
    _check_same_shape(gen.data, input_img.data, target.data)
    gp_in = _gradient_term(gen.data, input_img.data, cfg.epsilon)
    return _objective(gen.data, target.data, target.data, cfg, gp_input=gp_in)
