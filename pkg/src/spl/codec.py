"""Minimal PNG and binary-PPM codecs.

Decodes 8/16-bit greyscale and RGB PNGs (non-interlaced, no palette, no
alpha) and binary PPM (P6). Encodes 8-bit PNG only. Everything else is
rejected with FormatError rather than silently approximated.

Built on zlib/struct so the library keeps a numpy-only runtime footprint.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from .errors import FormatError

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def _paeth(a: int, b: int, c: int) -> int:
    p = a + b - c
    pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
    if pa <= pb and pa <= pc:
        return a
    if pb <= pc:
        return b
    return c


def _unfilter(raw: bytes, height: int, stride: int, bpp: int) -> bytearray:
    """Undo PNG per-scanline filtering. stride excludes the filter byte."""
    out = bytearray(height * stride)
    prev = bytearray(stride)
    pos = 0
    for row in range(height):
        ftype = raw[pos]
        line = bytearray(raw[pos + 1:pos + 1 + stride])
        pos += 1 + stride
        if ftype == 0:
            pass
        elif ftype == 1:  # sub
            for i in range(bpp, stride):
                line[i] = (line[i] + line[i - bpp]) & 0xFF
        elif ftype == 2:  # up
            for i in range(stride):
                line[i] = (line[i] + prev[i]) & 0xFF
        elif ftype == 3:  # average
            for i in range(stride):
                left = line[i - bpp] if i >= bpp else 0
                line[i] = (line[i] + ((left + prev[i]) >> 1)) & 0xFF
        elif ftype == 4:  # paeth
            for i in range(stride):
                left = line[i - bpp] if i >= bpp else 0
                upleft = prev[i - bpp] if i >= bpp else 0
                line[i] = (line[i] + _paeth(left, prev[i], upleft)) & 0xFF
        else:
            raise FormatError(f"unknown PNG filter type {ftype}")
        out[row * stride:(row + 1) * stride] = line
        prev = line
    return out


def decode_png(data: bytes) -> np.ndarray:
    """Decode PNG bytes into a (H, W, C) float64 array in [0, 1]."""
    if not data.startswith(PNG_SIGNATURE):
        raise FormatError("not a PNG stream")
    pos = len(PNG_SIGNATURE)
    header = None
    idat = bytearray()
    while pos + 8 <= len(data):
        length, ctype = struct.unpack(">I4s", data[pos:pos + 8])
        chunk = data[pos + 8:pos + 8 + length]
        if len(chunk) != length or pos + 12 + length > len(data):
            raise FormatError("truncated PNG chunk")
        (crc,) = struct.unpack(">I", data[pos + 8 + length:pos + 12 + length])
        if zlib.crc32(ctype + chunk) & 0xFFFFFFFF != crc:
            raise FormatError(f"bad CRC in {ctype!r} chunk")
        pos += 12 + length
        if ctype == b"IHDR":
            header = struct.unpack(">IIBBBBB", chunk)
        elif ctype == b"IDAT":
            idat.extend(chunk)
        elif ctype == b"IEND":
            break
    if header is None:
        raise FormatError("PNG missing IHDR")
    width, height, depth, colour, comp, filt, interlace = header
    if comp != 0 or filt != 0:
        raise FormatError("unsupported PNG compression/filter method")
    if interlace != 0:
        raise FormatError("interlaced PNG is not supported")
    if colour == 3:
        raise FormatError("palette PNG is not supported")
    if colour in (4, 6):
        raise FormatError("PNG alpha channels are not supported")
    if colour not in (0, 2):
        raise FormatError(f"unsupported PNG colour type {colour}")
    if depth not in (8, 16):
        raise FormatError(f"unsupported PNG bit depth {depth}")
    if width == 0 or height == 0:
        raise FormatError("empty PNG image")
    channels = 1 if colour == 0 else 3
    sample_bytes = depth // 8
    bpp = channels * sample_bytes
    stride = width * bpp
    try:
        raw = zlib.decompress(bytes(idat))
    except zlib.error as exc:
        raise FormatError(f"corrupt PNG pixel data: {exc}") from None
    if len(raw) != height * (stride + 1):
        raise FormatError("PNG pixel data has wrong length")
    flat = _unfilter(raw, height, stride, bpp)
    dtype = np.dtype(">u2") if depth == 16 else np.uint8
    arr = np.frombuffer(bytes(flat), dtype=dtype).reshape(height, width, channels)
    maxval = 65535.0 if depth == 16 else 255.0
    return arr.astype(np.float64) / maxval


def encode_png(samples: np.ndarray) -> bytes:
    """Encode a (H, W, C) uint8 array (C in {1, 3}) as PNG bytes."""
    arr = np.asarray(samples)
    if arr.dtype != np.uint8 or arr.ndim != 3 or arr.shape[2] not in (1, 3):
        raise FormatError("PNG encoder expects uint8 (H, W, 1|3) samples")
    height, width, channels = arr.shape
    colour = 0 if channels == 1 else 2
    ihdr = struct.pack(">IIBBBBB", width, height, 8, colour, 0, 0, 0)
    stride = width * channels
    body = bytearray()
    flat = arr.tobytes()
    for row in range(height):
        body.append(0)  # filter type none
        body.extend(flat[row * stride:(row + 1) * stride])
    idat = zlib.compress(bytes(body), 9)

    def chunk(ctype: bytes, payload: bytes) -> bytes:
        return (struct.pack(">I", len(payload)) + ctype + payload
                + struct.pack(">I", zlib.crc32(ctype + payload) & 0xFFFFFFFF))

    return (PNG_SIGNATURE + chunk(b"IHDR", ihdr) + chunk(b"IDAT", idat)
            + chunk(b"IEND", b""))


def _ppm_tokens(data: bytes, count: int):
    """Yield `count` whitespace-separated header tokens, skipping comments."""
    pos = 0
    got = 0
    while got < count:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FormatError("truncated PPM header")
        got += 1
        yield data[start:pos], pos
    # caller uses the position returned with the final token


def decode_ppm(data: bytes) -> np.ndarray:
    """Decode binary PPM (P6) bytes into a (H, W, 3) float64 array in [0, 1]."""
    if not data.startswith(b"P6"):
        raise FormatError("not a binary PPM (P6) stream")
    tokens = list(_ppm_tokens(data, 4))
    magic = tokens[0][0]
    if magic != b"P6":
        raise FormatError("not a binary PPM (P6) stream")
    try:
        width, height, maxval = (int(tokens[i][0]) for i in (1, 2, 3))
    except ValueError:
        raise FormatError("malformed PPM header") from None
    if width <= 0 or height <= 0 or not 0 < maxval < 65536:
        raise FormatError("malformed PPM header values")
    pos = tokens[3][1] + 1  # exactly one whitespace byte after maxval
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
    need = width * height * 3 * dtype.itemsize
    pixels = data[pos:pos + need]
    if len(pixels) != need:
        raise FormatError("truncated PPM pixel data")
    arr = np.frombuffer(pixels, dtype=dtype).reshape(height, width, 3)
    return arr.astype(np.float64) / float(maxval)
