"""Where mean absolute difference is blind, profiles are not.

Two binary 64x64 patterns with the same number of white pixels are built
so that each differs from a source pattern on exactly 1024 pixels: their
L1 distances tie at 0.25 exactly. Row/column profile similarity tells
them apart immediately, because it sees *where* along each line the mass
sits, not just how much of it changed.
"""

from pathlib import Path

import numpy as np

import spl

OUT = Path(__file__).resolve().parent / "output"


def main() -> None:
    OUT.mkdir(exist_ok=True)
    a = np.zeros((1, 64, 64))
    a[0, :, :32] = 1.0           # left half white
    b = np.zeros((1, 64, 64))
    b[0, :, 8:40] = 1.0          # same bar, shifted 8 columns
    c = a.copy()
    c[0, :16, :] = 1.0 - c[0, :16, :]  # top quarter mirrored

    img_a, img_b, img_c = (spl.Image(x, spl.RangeTag.UNIT) for x in (a, b, c))
    print("white pixels:", int(a.sum()), int(b.sum()), int(c.sum()))
    print(f"L1(A, B) = {spl.mean_abs_diff(img_a, img_b)}")
    print(f"L1(A, C) = {spl.mean_abs_diff(img_a, img_c)}")
    print(f"profile similarity (A, B) = {spl.profile_similarity(img_a, img_b):.4f}")
    print(f"profile similarity (A, C) = {spl.profile_similarity(img_a, img_c):.4f}")

    for name, img in (("pattern_a", img_a), ("pattern_b", img_b),
                      ("pattern_c", img_c)):
        spl.save_image(img, OUT / f"{name}.png")
    print(f"wrote the three patterns to {OUT}")


if __name__ == "__main__":
    main()
