"""Writes the small PNG fixtures used by the image I/O tests."""
import pathlib

import numpy as np
from PIL import Image


def main():
    out = pathlib.Path(__file__).resolve().parent / "png"
    out.mkdir(exist_ok=True)
    Image.fromarray(np.full((2, 2, 3), 255, np.uint8)).save(out / "rgb_white_2x2.png")
    Image.fromarray(np.zeros((1, 1), np.uint8)).save(out / "gray_black_1x1.png")
    Image.fromarray(np.full((1, 1), 128, np.uint8)).save(out / "gray_128_1x1.png")
    # Distinct values per channel and position: value = 10 * (3 * (2 * r + c) + ch).
    rgb = np.array([[[10 * (3 * (2 * r + c) + ch) for ch in range(3)] for c in range(2)]
                    for r in range(2)], np.uint8)
    Image.fromarray(rgb).save(out / "rgb_ramp_2x2.png")
    rgba = np.zeros((2, 2, 4), np.uint8)
    rgba[..., 0] = 200
    rgba[..., 3] = 7
    Image.fromarray(rgba, "RGBA").save(out / "rgba_2x2.png")
    Image.fromarray(np.full((2, 2), 1000, np.uint16)).save(out / "gray16_2x2.png")
    Image.fromarray(np.zeros((2, 2), np.uint8)).convert("P").save(out / "palette_2x2.png")
    Image.fromarray(np.full((16, 16), 90, np.uint8)).save(out / "constant_16x16.png")
    (out / "not_a_png.png").write_bytes(b"this is not a png file\n")


if __name__ == "__main__":
    main()
