"""Regenerates the 256x256 natural-image crops used by the tests.

Crops are cut at fixed offsets from images bundled with scikit-image, without
any resampling, and written as 8-bit PNG.
"""
import pathlib

import numpy as np
import skimage.data
from PIL import Image

CROPS = [
    # name, source, row, col
    ("astronaut", "astronaut", 0, 128),
    ("chelsea", "chelsea", 22, 90),
    ("coffee", "coffee", 72, 172),
    ("camera", "camera", 64, 160),
    ("rocket", "rocket", 85, 192),
    ("brick", "brick", 128, 128),
    ("grass", "grass", 128, 128),
    ("gravel", "gravel", 128, 128),
    ("coins", "coins", 24, 64),
    ("moon", "moon", 128, 128),
    ("hubble", "hubble_deep_field", 300, 372),
    ("immuno", "immunohistochemistry", 128, 128),
]

SIDE = 256


def main():
    out = pathlib.Path(__file__).resolve().parent / "crops"
    out.mkdir(exist_ok=True)
    for name, source, row, col in CROPS:
        image = getattr(skimage.data, source)()
        crop = np.ascontiguousarray(image[row:row + SIDE, col:col + SIDE])
        assert crop.shape[:2] == (SIDE, SIDE), (name, crop.shape)
        Image.fromarray(crop).save(out / f"{name}.png")


if __name__ == "__main__":
    main()
