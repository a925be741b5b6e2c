"""Planar floating-point image container, range handling and colour maps.

Images are stored channel-planar as float64 arrays of shape (C, H, W) so
that every row/column profile of a channel is a simple 1-D slice. A range
tag declares how sample values map onto displayable intensities:

* ``UNIT``      -- [0, 1], the file-I/O convention
* ``SYMMETRIC`` -- [-1, 1], the optimisation convention
* ``FREE``      -- unconstrained (e.g. YUV planes, gradient buffers)

Values may drift outside the declared range during optimisation; they are
clamped only when written to disk.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import codec
from .errors import (ChannelError, FormatError, IoError, NonFiniteError,
                     RangeTagError, ShapeError)


class RangeTag(enum.Enum):
    UNIT = "unit"
    SYMMETRIC = "symmetric"
    FREE = "free"


@dataclass(eq=False)
class Image:
    """Channel-planar float64 image. Treat instances as immutable."""

    data: np.ndarray
    range_tag: RangeTag = RangeTag.UNIT

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 3 or min(arr.shape) < 1:
            raise ShapeError(f"image data must be (C, H, W), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("image contains NaN or infinite samples")
        self.data = arr

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape


@dataclass(frozen=True, eq=False)
class ColourMatrix:
    """RGB->YUV 3x3 linear map together with its exact inverse."""

    forward: np.ndarray
    inverse: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        fwd = np.asarray(self.forward, dtype=np.float64)
        if fwd.shape != (3, 3):
            raise ShapeError("colour matrix must be 3x3")
        inv = self.inverse
        inv = np.linalg.inv(fwd) if inv is None else np.asarray(inv, float)
        if np.max(np.abs(fwd @ inv - np.eye(3))) > 1e-12:
            raise ValueError("forward @ inverse deviates from identity")
        luma = fwd[0]
        if np.any(luma < 0) or abs(luma.sum() - 1.0) > 1e-9:
            raise ValueError("luma row must be non-negative and sum to 1")
        object.__setattr__(self, "forward", fwd)
        object.__setattr__(self, "inverse", inv)


# Analog BT.601, the most common "YUV" convention. The exact coefficients
# are configuration, not physics: BT709 is available and custom matrices
# can be supplied wherever a ColourMatrix is accepted.
BT601 = ColourMatrix(np.array([
    [0.299, 0.587, 0.114],
    [-0.14713, -0.28886, 0.436],
    [0.615, -0.51499, -0.10001],
]))

BT709 = ColourMatrix(np.array([
    [0.2126, 0.7152, 0.0722],
    [-0.09991, -0.33609, 0.436],
    [0.615, -0.55861, -0.05639],
]))

_NAMED_MATRICES = {"bt601": BT601, "bt709": BT709}


def colour_matrix_by_name(name: str) -> ColourMatrix:
    try:
        return _NAMED_MATRICES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown colour matrix {name!r}; "
                         f"expected one of {sorted(_NAMED_MATRICES)}") from None


def load_image(path) -> Image:
    """Load a PNG or binary PPM (P6) file as a UNIT-range planar image."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from None
    if data.startswith(codec.PNG_SIGNATURE):
        hwc = codec.decode_png(data)
    elif data.startswith(b"P6"):
        hwc = codec.decode_ppm(data)
    else:
        raise FormatError(f"{path}: neither PNG nor binary PPM")
    return Image(np.ascontiguousarray(hwc.transpose(2, 0, 1)), RangeTag.UNIT)


def save_image(img: Image, path) -> None:
    """Write an 8-bit PNG. Samples are mapped to [0, 1], clamped, quantised."""
    if img.channels not in (1, 3):
        raise ChannelError(f"can only save 1- or 3-channel images, got {img.channels}")
    if img.range_tag is RangeTag.SYMMETRIC:
        unit = (img.data + 1.0) / 2.0
    elif img.range_tag is RangeTag.UNIT:
        unit = img.data
    else:
        raise RangeTagError("cannot save a FREE-range image; convert it first")
    quantised = np.rint(np.clip(unit, 0.0, 1.0) * 255.0).astype(np.uint8)
    png = codec.encode_png(np.ascontiguousarray(quantised.transpose(1, 2, 0)))
    try:
        Path(path).write_bytes(png)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from None


def to_symmetric(img: Image) -> Image:
    """Remap UNIT samples to [-1, 1] via s' = 2s - 1."""
    if img.range_tag is not RangeTag.UNIT:
        raise RangeTagError(f"to_symmetric expects a UNIT image, got {img.range_tag}")
    return Image(2.0 * img.data - 1.0, RangeTag.SYMMETRIC)


def to_unit(img: Image) -> Image:
    """Remap SYMMETRIC samples to [0, 1] via s' = (s + 1) / 2."""
    if img.range_tag is not RangeTag.SYMMETRIC:
        raise RangeTagError(f"to_unit expects a SYMMETRIC image, got {img.range_tag}")
    return Image((img.data + 1.0) / 2.0, RangeTag.UNIT)


def rgb_to_yuv(img: Image, m: ColourMatrix = BT601) -> Image:
    """Apply the forward colour map per pixel. Output range is unconstrained."""
    if img.channels != 3:
        raise ChannelError(f"rgb_to_yuv needs 3 channels, got {img.channels}")
    return Image(apply_colour_forward(img.data, m), RangeTag.FREE)


def apply_colour_forward(planar: np.ndarray, m: ColourMatrix) -> np.ndarray:
    return np.einsum("dc,chw->dhw", m.forward, planar)


def yuv_gradient_adjoint_chain(grad_yuv: Image, m: ColourMatrix = BT601) -> Image:
    """Pull a gradient w.r.t. YUV planes back to RGB: multiply by forward^T."""
    if grad_yuv.channels != 3:
        raise ChannelError("yuv gradient must have 3 channels")
    return Image(apply_colour_adjoint(grad_yuv.data, m), RangeTag.FREE)


def apply_colour_adjoint(planar: np.ndarray, m: ColourMatrix) -> np.ndarray:
    return np.einsum("cd,chw->dhw", m.forward, planar)
