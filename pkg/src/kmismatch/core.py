"""Small shared vocabulary: the infinite answer and update targets."""
from __future__ import annotations

import math
from typing import Union

#: Answer returned when the Hamming distance exceeds the threshold.
INF = math.inf

Answer = Union[int, float]

PATTERN = "P"
TEXT = "T"


def normalize_target(target: str) -> str:
    t = str(target).upper()
    if t in ("P", "PATTERN"):
        return PATTERN
    if t in ("T", "TEXT"):
        return TEXT
    raise ValueError(f"unknown update target {target!r}")


def thresholded(d: int, k: int) -> Answer:
    return d if d <= k else INF
