"""Compiled inner loops for the high-volume samplers."""

import numpy as np
from numba import njit


@njit(cache=True)
def sequential_top_m(weights, uniforms, out):
    """Fill ``out[r]`` with a top-m ranking drawn by successive inverse-CDF winners.

    ``weights`` holds the scores of the played subset in subset order;
    ``uniforms`` has shape ``(rounds, m)`` and row ``r`` drives round ``r``.
    Entries of ``out`` are positions within the subset, not item ids.
    """
    k = weights.shape[0]
    rounds, m = uniforms.shape
    w = np.empty(k)
    for r in range(rounds):
        for j in range(k):
            w[j] = weights[j]
        for step in range(m):
            # re-accumulate so the remaining mass matches the inverse-CDF scan exactly
            total = 0.0
            for j in range(k):
                total += w[j]
            x = uniforms[r, step] * total
            acc = 0.0
            chosen = -1
            for j in range(k):
                if w[j] > 0.0:
                    chosen = j
                    acc += w[j]
                    if acc > x:
                        break
            out[r, step] = chosen
            w[chosen] = 0.0
    return out
