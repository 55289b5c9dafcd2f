"""Deterministic synthetic test images."""

from __future__ import annotations

import numpy as np


def stripes_and_blobs(size: int = 64, low: float = 30.0, high: float = 220.0) -> np.ndarray:
    """Oriented stripes in the upper half, soft blobs and a bright square below.

    Values stay inside ``[low, high]`` so the image is strictly positive.
    """
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    s = size / 64.0
    img = np.full((size, size), 0.35)
    top = y < size / 2
    stripes = 0.5 + 0.5 * np.sign(np.sin(2 * np.pi * (x + 0.5 * y) / (8 * s)))
    img[top] = 0.15 + 0.7 * stripes[top]
    for cx, cy, r, amp in ((0.25, 0.75, 7, 0.55), (0.6, 0.72, 5, -0.25),
                           (0.82, 0.85, 4, 0.45)):
        d2 = (x - cx * size) ** 2 + (y - cy * size) ** 2
        img += amp * np.exp(-d2 / (2 * (r * s) ** 2))
    sq = (np.abs(x - 0.45 * size) < 5 * s) & (np.abs(y - 0.9 * size) < 3 * s)
    img[sq] = 0.95
    img = np.clip(img, 0.0, 1.0)
    return low + (high - low) * img
