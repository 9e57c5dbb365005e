"""Independent reference implementations used only to check the real ones.

Nothing here imports from the metric implementation: costs are computed with
plain math over raw channel lists, and the warping optimum is found by
exhaustively enumerating alignment paths.
"""

from __future__ import annotations

import math


def frame_cost(a_frame, b_frame, weights, ranges):
    """Weighted Euclidean over normalized channels; wrap-aware."""
    total = 0.0
    for name, weight in weights.items():
        if weight <= 0:
            continue
        lo, hi, wrap = ranges[name]
        diff = a_frame[name] - b_frame[name]
        if wrap:
            width = hi - lo
            diff = (diff + width / 2) % width - width / 2
        total += weight * (diff / (hi - lo)) ** 2
    return math.sqrt(total)


def exhaustive_dtw(a_frames, b_frames, weights, ranges):
    """Minimum cost over every monotone alignment path, enumerated one by one.

    Exponential on purpose (no memoization), so it stays a genuinely
    independent check; usable only for trajectories of a few frames.
    """
    n, m = len(a_frames), len(b_frames)
    best = [math.inf]

    def walk(i, j, acc):
        acc += frame_cost(a_frames[i], b_frames[j], weights, ranges)
        if i == n - 1 and j == m - 1:
            best[0] = min(best[0], acc)
            return
        if i + 1 < n:
            walk(i + 1, j, acc)
        if j + 1 < m:
            walk(i, j + 1, acc)
        if i + 1 < n and j + 1 < m:
            walk(i + 1, j + 1, acc)

    walk(0, 0, 0.0)
    return best[0]


def recursive_levenshtein(a, b):
    """Textbook recursion; fine for token lists up to length ~6."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    if a[0] == b[0]:
        return recursive_levenshtein(a[1:], b[1:])
    return 1 + min(
        recursive_levenshtein(a[1:], b),
        recursive_levenshtein(a, b[1:]),
        recursive_levenshtein(a[1:], b[1:]),
    )
