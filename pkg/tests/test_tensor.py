import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signforms import rng
from signforms.tensor import (
    MixedNormSpec,
    SignTensor,
    conjugate,
    diagonal_block_tensor,
    dual_maximizer,
    evaluate,
    exponents_from_json,
    exponents_to_json,
    iter_sign_tensors,
    mixed_norm,
    partial_coefficients,
    validate_dims,
    validate_exponents,
)

H2 = SignTensor([[1, 1], [1, -1]])


def random_tensor(dims, key):
    total = math.prod(dims)
    return SignTensor(rng.signs(key, 0, total).reshape(dims))


def random_point(dims, key):
    gen = np.random.Generator(np.random.Philox(key=key))
    return tuple(gen.standard_normal(n) for n in dims)


# --- SignTensor basics ---------------------------------------------------


def test_sign_tensor_validation():
    with pytest.raises(ValueError):
        SignTensor([[1, 0], [1, 1]])
    with pytest.raises(ValueError):
        SignTensor([[1, 2], [1, 1]])
    t = SignTensor([1, -1, 1])
    assert t.dims == (3,)
    assert t.order == 1
    assert t.size == 3


def test_sign_tensor_immutable():
    t = SignTensor([[1, -1], [1, 1]])
    with pytest.raises(ValueError):
        t.signs[0, 0] = -1
    with pytest.raises(AttributeError):
        t.signs = None


def test_sign_tensor_eq_hash():
    a = SignTensor([[1, -1], [1, 1]])
    b = SignTensor([[1, -1], [1, 1]])
    c = SignTensor([[1, -1], [1, -1]])
    assert a == b and hash(a) == hash(b)
    assert a != c
    assert a != SignTensor([1, -1, 1, 1])


@settings(max_examples=60)
@given(st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=3), st.integers(0, 2**64 - 1))
def test_json_round_trip(dims, key):
    t = random_tensor(tuple(dims), key)
    back = SignTensor.from_json(t.to_json())
    assert back == t


def test_from_json_rejects_short_payload():
    obj = SignTensor([1, 1, 1, 1, 1, 1, 1, 1, 1]).to_json()
    obj["signs"] = obj["signs"][:2]  # one packed byte only
    with pytest.raises(ValueError):
        SignTensor.from_json(obj)


def test_exponent_json_round_trip():
    p = (2.0, math.inf, 4.0 / 3.0)
    assert exponents_from_json(exponents_to_json(p)) == p
    assert exponents_to_json(p)[1] == "inf"
    with pytest.raises(ValueError):
        exponents_from_json(["infty"])


def test_validators():
    assert validate_dims([3, 2]) == (3, 2)
    with pytest.raises(ValueError):
        validate_dims([])
    with pytest.raises(ValueError):
        validate_dims([2, 0])
    assert validate_exponents((1, math.inf), 2) == (1.0, math.inf)
    with pytest.raises(ValueError):
        validate_exponents((0.5, 2), 2)
    with pytest.raises(ValueError):
        validate_exponents((2.0,), 2)


def test_conjugate():
    assert conjugate(1.0) == math.inf
    assert conjugate(math.inf) == 1.0
    assert conjugate(2.0) == 2.0
    assert conjugate(4.0) == pytest.approx(4.0 / 3.0, rel=1e-15)
    assert conjugate(conjugate(3.7)) == pytest.approx(3.7, rel=1e-12)
    with pytest.raises(ValueError):
        conjugate(0.9)


# --- evaluate / partial_coefficients -------------------------------------


def test_evaluate_against_explicit_sum():
    dims = (2, 3, 2)
    t = random_tensor(dims, 11)
    xs = random_point(dims, 12)
    expected = 0.0
    for idx in itertools.product(*(range(n) for n in dims)):
        term = float(t.signs[idx])
        for k, i in enumerate(idx):
            term *= xs[k][i]
        expected += term
    assert evaluate(t, xs) == pytest.approx(expected, rel=1e-12)


def test_evaluate_shape_errors():
    t = random_tensor((2, 3), 1)
    with pytest.raises(ValueError, match="coordinate 1"):
        evaluate(t, (np.ones(2), np.ones(4)))
    with pytest.raises(ValueError):
        evaluate(t, (np.ones(2),))


@settings(max_examples=30)
@given(st.integers(0, 2**32), st.integers(0, 2**32))
def test_evaluate_homogeneity(key_t, key_x):
    dims = (3, 2, 2)
    t = random_tensor(dims, key_t)
    xs = random_point(dims, key_x | 1)
    gen = np.random.Generator(np.random.Philox(key=key_x ^ 3))
    scales = gen.uniform(0.5, 2.0, len(dims))
    scaled = tuple(c * x for c, x in zip(scales, xs))
    lhs = evaluate(t, scaled)
    rhs = float(np.prod(scales)) * evaluate(t, xs)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_partial_coefficients_against_basis_oracle(k):
    dims = (2, 3, 2)
    t = random_tensor(dims, 21)
    xs = list(random_point(dims, 22))
    c = partial_coefficients(t, xs, k)
    assert c.shape == (dims[k],)
    for j in range(dims[k]):
        basis = list(xs)
        e = np.zeros(dims[k])
        e[j] = 1.0
        basis[k] = e
        assert c[j] == pytest.approx(evaluate(t, basis), rel=1e-12, abs=1e-12)


def test_partial_coefficients_ignores_slot_k():
    t = random_tensor((2, 2), 31)
    xs = [None, np.array([1.0, -1.0])]
    c = partial_coefficients(t, xs, 0)
    explicit = t.signs.astype(float) @ np.array([1.0, -1.0])
    assert np.allclose(c, explicit)
    with pytest.raises(ValueError):
        partial_coefficients(t, xs, 2)


# --- dual_maximizer -------------------------------------------------------


def _lq_norm(c, q):
    if math.isinf(q):
        return float(np.max(np.abs(c)))
    return float(np.sum(np.abs(c) ** q) ** (1.0 / q))


@pytest.mark.parametrize("p", [1.0, 1.2, 2.0, 3.7, 10.0, math.inf])
def test_dual_maximizer_invariants(p):
    gen = np.random.Generator(np.random.Philox(key=5))
    for _ in range(20):
        c = gen.standard_normal(7)
        x, value = dual_maximizer(c, p)
        q = conjugate(p)
        if math.isinf(p):
            assert float(np.max(np.abs(x))) == pytest.approx(1.0, rel=1e-12)
        else:
            assert float(np.sum(np.abs(x) ** p) ** (1 / p)) == pytest.approx(1.0, rel=1e-9)
        assert float(np.dot(c, x)) == pytest.approx(value, rel=1e-12)
        assert value == pytest.approx(_lq_norm(c, q), rel=1e-12)


def test_dual_maximizer_conventions():
    # zero coefficients: zero maximizer
    x, v = dual_maximizer(np.zeros(3), 2.0)
    assert v == 0.0
    assert np.array_equal(x, np.zeros(3))
    # sign(0) counts as +1 at p = inf
    x, v = dual_maximizer(np.array([0.0, -3.0]), math.inf)
    assert np.array_equal(x, np.array([1.0, -1.0]))
    assert v == 3.0
    # p = 1 ties resolve to the lowest index
    x, v = dual_maximizer(np.array([2.0, -2.0, 1.0]), 1.0)
    assert np.array_equal(x, np.array([1.0, 0.0, 0.0]))
    assert v == 2.0
    with pytest.raises(ValueError):
        dual_maximizer(np.array([1.0]), 0.5)


def test_dual_maximizer_extreme_p_is_stable():
    c = np.array([1e-8, 3e5, -2.0])
    for p in (1.0001, 1e6):
        x, v = dual_maximizer(c, p)
        assert math.isfinite(v)
        assert float(np.dot(c, x)) == pytest.approx(v, rel=1e-9)


# --- mixed_norm -----------------------------------------------------------


def test_mixed_norm_hand_values():
    assert mixed_norm(H2.signs, MixedNormSpec((1.0, 2.0))) == pytest.approx(
        2.0 * math.sqrt(2.0), rel=1e-12
    )
    assert mixed_norm(H2.signs, MixedNormSpec((2.0, 2.0))) == pytest.approx(2.0, rel=1e-12)
    assert mixed_norm(H2.signs, MixedNormSpec((1.0, 1.0))) == pytest.approx(4.0, rel=1e-12)
    # innermost exponent acts on the last axis
    arr = np.array([[1.0, 1.0, 1.0], [0.0, 0.0, 0.0]])
    assert mixed_norm(arr, MixedNormSpec((1.0, 2.0))) == pytest.approx(math.sqrt(3.0))
    assert mixed_norm(arr, MixedNormSpec((2.0, 1.0))) == pytest.approx(3.0)


def test_mixed_norm_validation():
    with pytest.raises(ValueError):
        MixedNormSpec((1.0, math.inf))
    with pytest.raises(ValueError):
        MixedNormSpec((0.0,))
    with pytest.raises(ValueError):
        mixed_norm(np.ones((2, 2)), MixedNormSpec((2.0,)))
    with pytest.raises(ValueError):
        mixed_norm(np.array([np.nan]), MixedNormSpec((2.0,)))


def test_mixed_norm_unimodular_identity():
    t = random_tensor((3, 4, 2), 17)
    rhos = (1.5, 2.0, 3.0)
    expected = math.prod(n ** (1.0 / r) for n, r in zip((3, 4, 2), rhos))
    assert mixed_norm(t.signs, MixedNormSpec(rhos)) == pytest.approx(expected, rel=1e-12)


# --- diagonal_block_tensor -------------------------------------------------


def test_diagonal_block_tensor_identity_blocks():
    t = random_tensor((2, 3), 44)
    out = diagonal_block_tensor(t, (1, 1))
    assert np.array_equal(out, t.signs)


def test_diagonal_block_tensor_full_diagonal():
    assert np.array_equal(diagonal_block_tensor(H2, (2,)), np.array([1, -1], dtype=np.int8))


def test_diagonal_block_tensor_mixed_blocks():
    t = random_tensor((3, 3, 2), 45)
    out = diagonal_block_tensor(t, (2, 1))
    assert out.shape == (3, 2)
    for j in range(3):
        for k in range(2):
            assert out[j, k] == t.signs[j, j, k]


def test_diagonal_block_tensor_errors():
    t = random_tensor((3, 2, 2), 46)
    with pytest.raises(ValueError, match="unequal dims"):
        diagonal_block_tensor(t, (2, 1))
    with pytest.raises(ValueError):
        diagonal_block_tensor(t, (1, 1))
    with pytest.raises(ValueError):
        diagonal_block_tensor(t, (1, 1, 0))


# --- enumeration -----------------------------------------------------------


def test_iter_sign_tensors_enumerates_all():
    seen = list(iter_sign_tensors((2, 2)))
    assert len(seen) == 16
    assert len(set(seen)) == 16
    assert np.all(seen[0].signs == -1)
    assert np.all(seen[-1].signs == 1)


def test_iter_sign_tensors_refuses_large():
    with pytest.raises(ValueError):
        next(iter_sign_tensors((5, 5)))
