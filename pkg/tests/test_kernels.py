import itertools

import numpy as np
import pytest

from signforms import _kernels_py
from signforms._kernels import kernel_backend
from signforms._util import split_range
from signforms.norms import _merge_kernel_results

try:
    from signforms import _accel
except ImportError:
    _accel = None

BACKENDS = [("python", _kernels_py.best_sign_pattern)]
if _accel is not None:
    BACKENDS.append(("compiled", _accel.best_sign_pattern))


def brute_best(M):
    """Independent oracle: full sweep in lexicographic pattern order."""
    m = M.shape[0]
    best_v, best_s = -np.inf, None
    for pat in itertools.product((-1.0, 1.0), repeat=m):
        s = np.array(pat)
        v = float(np.abs(s @ M).sum())
        if v > best_v:  # first maximum in lex order
            best_v, best_s = v, s
    return best_v, best_s.astype(np.int8)


def cases():
    gen = np.random.Generator(np.random.Philox(key=7))
    out = []
    for m in (1, 2, 3, 5, 6):
        for n in (1, 2, 4):
            out.append(gen.integers(-3, 4, size=(m, n)).astype(np.float64))
    # tie-rich inputs
    out.append(np.zeros((4, 3)))
    out.append(np.ones((5, 2)))
    out.append(np.array([[1.0, -1.0], [-1.0, 1.0]]))
    return out


@pytest.mark.parametrize("name,kernel", BACKENDS)
def test_full_range_matches_brute_force(name, kernel):
    for M in cases():
        M = np.ascontiguousarray(M)
        want_v, want_s = brute_best(M)
        got_v, got_s = kernel(M, 0, 1 << M.shape[0])
        assert got_v == want_v, name
        assert np.array_equal(got_s, want_s), (name, M)


@pytest.mark.parametrize("name,kernel", BACKENDS)
@pytest.mark.parametrize("parts", [2, 3, 5])
def test_chunked_merge_matches_full(name, kernel, parts):
    for M in cases():
        M = np.ascontiguousarray(M)
        full = kernel(M, 0, 1 << M.shape[0])
        ranges = split_range(0, 1 << M.shape[0], parts)
        merged = _merge_kernel_results(kernel(M, lo, hi) for lo, hi in ranges)
        assert merged[0] == full[0]
        assert np.array_equal(merged[1], full[1])


@pytest.mark.skipif(_accel is None, reason="compiled extension not built")
def test_backends_agree_on_integer_matrices():
    # integer-valued input is the exact regime (and the only one the norm
    # driver uses); bit-identical values and patterns required
    gen = np.random.Generator(np.random.Philox(key=51))
    for _ in range(20):
        M = np.ascontiguousarray(gen.integers(-3, 4, size=(8, 4)).astype(np.float64))
        pv, ps = _kernels_py.best_sign_pattern(M, 0, 1 << 8)
        cv, cs = _accel.best_sign_pattern(M, 0, 1 << 8)
        assert pv == cv
        assert np.array_equal(ps, cs)


@pytest.mark.skipif(_accel is None, reason="compiled extension not built")
def test_backends_agree_on_floats_up_to_rounding():
    # f(s) = f(-s), so the max is always a tie; with float input the gray
    # path's incremental rounding may split it, hence values to 1e-12 and
    # each pattern checked directly against its own objective
    gen = np.random.Generator(np.random.Philox(key=99))
    for _ in range(10):
        M = np.ascontiguousarray(gen.standard_normal((8, 3)))
        pv, ps = _kernels_py.best_sign_pattern(M, 0, 1 << 8)
        cv, cs = _accel.best_sign_pattern(M, 0, 1 << 8)
        assert cv == pytest.approx(pv, rel=1e-12)
        direct = float(np.abs(cs.astype(np.float64) @ M).sum())
        assert direct == pytest.approx(pv, rel=1e-12)


@pytest.mark.parametrize("name,kernel", BACKENDS)
def test_kernel_rejects_bad_ranges(name, kernel):
    M = np.zeros((2, 2))
    with pytest.raises(ValueError):
        kernel(M, 3, 3)
    with pytest.raises(ValueError):
        kernel(np.zeros((63, 1)), 0, 1)


def test_backend_name():
    assert kernel_backend() in ("compiled", "python")
    if _accel is not None:
        assert kernel_backend() == "compiled"
