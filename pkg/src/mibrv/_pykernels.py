"""NumPy/SciPy fallback for the hot distance kernels.

Used when the compiled extension is not built. Mirrors the compiled
module's interface exactly: raw float64 arrays in, float64 arrays out.

Means are taken over values sorted ascending so that results are exact
under any permutation of the input instances, and every mean is clamped
into [min, max] of its summands to guard against a last-ulp rounding
step that would break the min <= mean <= max orderings.
"""

import numpy as np
from scipy.spatial.distance import cdist

BACKEND_NAME = "numpy"


def cross_distance_matrix(a, b):
    """All pairwise Euclidean distances, shape (len(a), len(b))."""
    return cdist(a, b)


def _chunk_means(dists, k, largest):
    """Per-row mean of the k smallest (or largest) entries of a distance matrix."""
    n = dists.shape[1]
    kk = min(k, n)
    if kk == 1:
        return dists.max(axis=1) if largest else dists.min(axis=1)
    if kk == n:
        chunk = np.sort(dists, axis=1)
    elif largest:
        chunk = np.sort(np.partition(dists, n - kk, axis=1)[:, n - kk:], axis=1)
    else:
        chunk = np.sort(np.partition(dists, kk - 1, axis=1)[:, :kk], axis=1)
    means = chunk.sum(axis=1) / kk
    return np.clip(means, chunk[:, 0], chunk[:, -1])


def _aggregate(stats):
    s = np.sort(stats)
    mean = s.sum() / s.size
    mean = min(max(mean, s[0]), s[-1])
    return s[0], mean, s[-1]


def operator_table(a, b, k):
    """All six operator values for one bag pair, indexed by operator number - 1.

    Entries 0..2 aggregate the per-instance nearest-k means with
    min/mean/max; entries 3..5 do the same for the farthest-k means.
    """
    dists = cdist(a, b)
    small = _chunk_means(dists, k, largest=False)
    large = _chunk_means(dists, k, largest=True)
    out = np.empty(6)
    out[0], out[1], out[2] = _aggregate(small)
    out[3], out[4], out[5] = _aggregate(large)
    return out


def operator_table_block(a, refs, offsets, k):
    """operator_table of one bag against every reference, shape (R, 6).

    refs stacks all reference instances; offsets[r]:offsets[r+1] slices
    reference r's rows.
    """
    n_refs = len(offsets) - 1
    out = np.empty((n_refs, 6))
    for r in range(n_refs):
        out[r] = operator_table(a, refs[offsets[r]:offsets[r + 1]], k)
    return out
