"""Compiled extension vs. NumPy fallback: same interface, same numbers."""

import numpy as np
import pytest

from mibrv import _kernels, _pykernels

needs_compiled = pytest.mark.skipif(
    "cython" not in _kernels.available_backends(),
    reason="compiled extension not built",
)

try:
    from mibrv import _ckernels
except ImportError:
    _ckernels = None


def _random_case(rng, m, n, d):
    a = rng.uniform(-10, 10, (m, d))
    b = rng.uniform(-10, 10, (n, d))
    return np.ascontiguousarray(a), np.ascontiguousarray(b)


@needs_compiled
def test_cross_distance_matrix_agreement(rng):
    for _ in range(25):
        m, n, d = (int(rng.integers(1, 12)) for _ in range(3))
        a, b = _random_case(rng, m, n, d)
        got = _ckernels.cross_distance_matrix(a, b)
        want = _pykernels.cross_distance_matrix(a, b)
        assert got.shape == want.shape == (m, n)
        assert np.abs(got - want).max() <= 1e-12


@needs_compiled
def test_operator_table_agreement(rng):
    for _ in range(40):
        m, n, d = (int(rng.integers(1, 10)) for _ in range(3))
        a, b = _random_case(rng, m, n, d)
        for k in (1, 2, 3, 5, 20):
            got = _ckernels.operator_table(a, b, k)
            want = _pykernels.operator_table(a, b, k)
            assert np.abs(got - want).max() <= 1e-12


@needs_compiled
def test_operator_table_with_ties(rng):
    # duplicated instances force equal distances through the selection code
    base = rng.uniform(-2, 2, (3, 2))
    a = np.ascontiguousarray(np.vstack([base, base]))
    b = np.ascontiguousarray(np.vstack([base[:2], base[:2], base[:2]]))
    for k in (1, 2, 3, 4, 6):
        got = _ckernels.operator_table(a, b, k)
        want = _pykernels.operator_table(a, b, k)
        assert np.abs(got - want).max() <= 1e-12


@needs_compiled
def test_block_matches_single_pairs(rng):
    a = np.ascontiguousarray(rng.uniform(-5, 5, (6, 3)))
    sizes = [1, 4, 2, 7]
    refs = [np.ascontiguousarray(rng.uniform(-5, 5, (s, 3))) for s in sizes]
    stacked = np.ascontiguousarray(np.vstack(refs))
    offsets = np.cumsum([0] + sizes).astype(np.int64)
    for backend in (_ckernels, _pykernels):
        block = backend.operator_table_block(a, stacked, offsets, 2)
        assert block.shape == (4, 6)
        for r, ref in enumerate(refs):
            assert np.array_equal(block[r], backend.operator_table(a, ref, 2))


def test_use_backend_switches_and_rejects_unknown():
    current = _kernels.backend_name()
    for name in _kernels.available_backends():
        _kernels.use_backend(name)
        assert _kernels.backend_name() == name
    with pytest.raises(ValueError):
        _kernels.use_backend("fortran")
    _kernels.use_backend(current)


@needs_compiled
def test_compiled_is_default():
    assert _kernels.available_backends() == ("cython", "numpy")


def test_long_rows_exercise_qsort_path(rng):
    # > 32 instances per bag switches the compiled sort from insertion to qsort
    a = np.ascontiguousarray(rng.uniform(-10, 10, (50, 4)))
    b = np.ascontiguousarray(rng.uniform(-10, 10, (64, 4)))
    for k in (1, 3, 40, 64, 80):
        want = _pykernels.operator_table(a, b, k)
        if _ckernels is not None:
            got = _ckernels.operator_table(a, b, k)
            assert np.abs(got - want).max() <= 1e-12
        assert want[0] <= want[1] <= want[2]
        assert want[3] <= want[4] <= want[5]
