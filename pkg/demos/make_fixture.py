"""Regenerate tests/fixtures/natural_32.png.

A deterministic 32x32 sunset-over-hills crop: warm sky ramp, soft sun disc,
wavy hill line and mild texture, with per-channel means (0.30, 0.20, -0.30)
in symmetric units and structure contrast tuned so direct reconstruction
converges with a wide margin. Run from the repository root:

    python demos/make_fixture.py
"""

from pathlib import Path

import numpy as np

import spl

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "natural_32.png"


def make_scene(n: int = 32, seed: int = 20) -> np.ndarray:
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:n, 0:n].astype(float)
    sky = 0.5 - 0.5 * yy / n
    sun = np.exp(-(((yy - 9) ** 2 + (xx - 21) ** 2) / 18.0))
    hill = 1.0 / (1.0 + np.exp(-(yy - (22.0 + 2.0 * np.sin(xx / 3.0)))))
    tex = rng.uniform(-1, 1, (3, n, n))
    for _ in range(2):
        tex = (np.roll(tex, 1, 1) + np.roll(tex, -1, 1) + np.roll(tex, 1, 2)
               + np.roll(tex, -1, 2) + 4 * tex) / 8.0
    tex /= np.abs(tex).max()
    base = np.stack([
        0.55 * sky + 0.85 * sun - 0.50 * hill,
        0.35 * sky + 0.70 * sun - 0.45 * hill,
        0.15 * sky + 0.45 * sun - 0.30 * hill,
    ])
    img = base + 0.10 * tex
    mu = img.mean(axis=(1, 2), keepdims=True)
    img = (img - mu) * (0.16 / (img - mu).std())
    img += np.array([0.30, 0.20, -0.30])[:, None, None]
    return np.clip(img, -0.92, 0.92)


def main() -> None:
    arr = make_scene()
    image = spl.Image((arr + 1.0) / 2.0, spl.RangeTag.UNIT)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    spl.save_image(image, OUT)
    loaded = spl.to_symmetric(spl.load_image(OUT))
    means = loaded.data.mean(axis=(1, 2))
    print(f"wrote {OUT}")
    print(f"channel means (symmetric): {np.round(means, 4)}")


if __name__ == "__main__":
    main()
