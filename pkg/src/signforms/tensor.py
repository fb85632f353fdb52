"""Sign tensors and multilinear form primitives.

Conventions used across the package:

* axes are zero-based and storage is row-major (C order);
* exponent tuples live in [1, inf] with ``math.inf`` as the infinity token,
  never a large float;
* a point tuple is a sequence of d one-dimensional float arrays, one per
  coordinate slot.
"""

from __future__ import annotations

import base64
import math
from dataclasses import dataclass

import numpy as np


def validate_dims(dims) -> tuple[int, ...]:
    """Normalize and check a shape: nonempty tuple of positive ints."""
    try:
        out = tuple(int(n) for n in dims)
    except (TypeError, ValueError):
        raise ValueError(f"dims must be a sequence of integers, got {dims!r}")
    if len(out) == 0:
        raise ValueError("dims must be nonempty")
    for i, n in enumerate(out):
        if n < 1:
            raise ValueError(f"dims[{i}] must be positive, got {n}")
    total = math.prod(out)
    if total > np.iinfo(np.intp).max:
        raise ValueError(f"total size {total} exceeds addressable budget")
    return out


def validate_exponents(p, d: int) -> tuple[float, ...]:
    """Normalize and check an exponent tuple: d entries in [1, inf]."""
    out = tuple(float(q) for q in p)
    if len(out) != d:
        raise ValueError(f"expected {d} exponents, got {len(out)}")
    for i, q in enumerate(out):
        if math.isnan(q) or q < 1.0:
            raise ValueError(f"p[{i}] must lie in [1, inf], got {q}")
    return out


def exponents_to_json(p) -> list:
    """Exponents as JSON values, math.inf spelled as the string 'inf'."""
    return ["inf" if math.isinf(q) else float(q) for q in p]


def exponents_from_json(items) -> tuple[float, ...]:
    """Inverse of exponents_to_json; accepts numbers or the string 'inf'."""
    out = []
    for q in items:
        if isinstance(q, str):
            if q.strip().lower() != "inf":
                raise ValueError(f"bad exponent token {q!r}")
            out.append(math.inf)
        else:
            out.append(float(q))
    return tuple(out)


def conjugate(p: float) -> float:
    """Conjugate exponent: 1 <-> inf, else p/(p-1)."""
    if math.isnan(p) or p < 1.0:
        raise ValueError(f"p must lie in [1, inf], got {p}")
    if p == 1.0:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


class SignTensor:
    """Immutable array of +-1 coefficients defining a multilinear form.

    The coefficient at multi-index (i_1, ..., i_d) multiplies
    x^1_{i_1} * ... * x^d_{i_d} in the form.
    """

    __slots__ = ("signs",)

    def __init__(self, signs):
        arr = np.asarray(signs)
        validate_dims(arr.shape if arr.ndim > 0 else ())
        if not np.all(np.abs(arr) == 1):
            raise ValueError("entries must be +1 or -1")
        arr = arr.astype(np.int8).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "signs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("SignTensor is immutable")

    @property
    def dims(self) -> tuple[int, ...]:
        return self.signs.shape

    @property
    def order(self) -> int:
        return self.signs.ndim

    @property
    def size(self) -> int:
        return self.signs.size

    def __eq__(self, other):
        if not isinstance(other, SignTensor):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.signs, other.signs)

    def __hash__(self):
        return hash((self.dims, self.signs.tobytes()))

    def __repr__(self):
        return f"SignTensor(dims={self.dims})"

    def to_json(self) -> dict:
        """JSON form: dims plus base64 of bit-packed signs (+1 -> 1, -1 -> 0)."""
        bits = (self.signs.ravel() > 0).astype(np.uint8)
        packed = np.packbits(bits)
        return {
            "dims": list(self.dims),
            "signs": base64.b64encode(packed.tobytes()).decode("ascii"),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SignTensor":
        dims = validate_dims(obj["dims"])
        total = math.prod(dims)
        packed = np.frombuffer(base64.b64decode(obj["signs"]), dtype=np.uint8)
        if packed.size * 8 < total:
            raise ValueError("packed sign data shorter than dims require")
        bits = np.unpackbits(packed, count=total)
        return cls((2 * bits.astype(np.int8) - 1).reshape(dims))


def _check_point(x, n: int, k: int) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != n:
        raise ValueError(
            f"coordinate {k} expects a vector of length {n}, got shape {v.shape}"
        )
    return v


def evaluate(tensor: SignTensor, xs) -> float:
    """Value of the form at a point tuple.

    Contracts one coordinate at a time from the last axis inward, so the cost
    is sum_k n_1*...*n_k rather than d * prod n_k.
    """
    dims = tensor.dims
    if len(xs) != len(dims):
        raise ValueError(f"expected {len(dims)} vectors, got {len(xs)}")
    t = tensor.signs.astype(np.float64)
    for k in range(len(dims) - 1, -1, -1):
        t = t @ _check_point(xs[k], dims[k], k)
    return float(t)


def partial_coefficients(tensor: SignTensor, xs, k: int) -> np.ndarray:
    """Coefficient vector of the linear functional in slot k.

    All coordinates except k are contracted with the supplied vectors;
    xs[k] is ignored and may be None.  Returns a float vector of length n_k.
    """
    dims = tensor.dims
    d = len(dims)
    if not 0 <= k < d:
        raise ValueError(f"slot {k} out of range for order-{d} tensor")
    if len(xs) != d:
        raise ValueError(f"expected {d} entries in the point tuple, got {len(xs)}")
    t = tensor.signs.astype(np.float64)
    for j in range(d - 1, k, -1):
        t = t @ _check_point(xs[j], dims[j], j)
    for j in range(k):
        t = np.tensordot(_check_point(xs[j], dims[j], j), t, axes=(0, 0))
    return t


def dual_maximizer(c, p: float) -> tuple[np.ndarray, float]:
    """Maximizer of <c, x> over the unit ball of l_p, with the value ||c||_{p'}.

    :param c: coefficient vector.
    :param p: primal exponent in [1, inf].
    :returns: pair (x, value) with ||x||_p = 1 unless c = 0, in which case
        x = 0 and value = 0.  Conventions: sign(0) counts as +1; for p = 1
        ties go to the lowest index.
    """
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 1:
        raise ValueError("c must be a vector")
    if math.isnan(p) or p < 1.0:
        raise ValueError(f"p must lie in [1, inf], got {p}")
    a = np.abs(c)
    amax = float(a.max()) if c.size else 0.0
    if amax == 0.0:
        return np.zeros(c.shape), 0.0
    sgn = np.where(c >= 0, 1.0, -1.0)
    if p == 1.0:
        i = int(np.argmax(a))
        x = np.zeros(c.shape)
        x[i] = sgn[i]
        return x, amax
    if math.isinf(p):
        return sgn, float(a.sum())
    q = p / (p - 1.0)
    u = (a / amax) ** (q - 1.0)
    x = sgn * u
    x /= float(np.sum(np.abs(x) ** p)) ** (1.0 / p)
    value = amax * float(np.sum((a / amax) ** q)) ** (1.0 / q)
    return x, value


@dataclass(frozen=True)
class MixedNormSpec:
    """Exponent tuple for nested l_rho norms, innermost entry acting on the
    last axis.  All entries are finite positive reals."""

    rhos: tuple[float, ...]

    def __post_init__(self):
        rhos = tuple(float(r) for r in self.rhos)
        for i, r in enumerate(rhos):
            if not (r > 0.0 and math.isfinite(r)):
                raise ValueError(f"rho[{i}] must be a finite positive real, got {r}")
        object.__setattr__(self, "rhos", rhos)


def mixed_norm(arr, spec: MixedNormSpec) -> float:
    """Nested norm ( sum_{j_1} ( ... ( sum_{j_k} |T|^{rho_k} )^{rho_{k-1}/rho_k} ... ) )^{1/rho_1}.

    Reduces the last axis first with exponent rho_k, then works outward.
    """
    t = np.asarray(arr, dtype=np.float64)
    if t.ndim != len(spec.rhos):
        raise ValueError(
            f"array of order {t.ndim} needs {t.ndim} exponents, got {len(spec.rhos)}"
        )
    if not np.all(np.isfinite(t)):
        raise ValueError("entries must be finite")
    t = np.abs(t)
    for rho in reversed(spec.rhos):
        t = np.sum(t**rho, axis=-1) ** (1.0 / rho)
    return float(t)


def diagonal_block_tensor(tensor: SignTensor, blocks) -> np.ndarray:
    """Restrict an order-d tensor to block-diagonal multi-indices.

    blocks = (m_1, ..., m_k) with sum m_i = d groups the axes into k
    consecutive blocks; axis dims inside each block must agree.  Entry
    (j_1, ..., j_k) of the result is the tensor entry whose i-th block of
    indices is j_i repeated m_i times.
    """
    dims = tensor.dims
    blocks = tuple(int(m) for m in blocks)
    if any(m < 1 for m in blocks):
        raise ValueError("block sizes must be positive")
    if sum(blocks) != len(dims):
        raise ValueError(
            f"block sizes {blocks} must sum to the tensor order {len(dims)}"
        )
    out_dims = []
    off = 0
    for i, m in enumerate(blocks):
        group = dims[off : off + m]
        if len(set(group)) != 1:
            raise ValueError(f"block {i} spans axes with unequal dims {group}")
        out_dims.append(group[0])
        off += m
    grids = np.ix_(*[np.arange(n) for n in out_dims])
    index = []
    for i, m in enumerate(blocks):
        index.extend([grids[i]] * m)
    return tensor.signs[tuple(index)]


def iter_sign_tensors(dims):
    """Yield every sign tensor of the given shape, ascending in the integer
    whose bits (MSB first, +1 bit = 1) spell the flattened entries."""
    dims = validate_dims(dims)
    total = math.prod(dims)
    if total > 24:
        raise ValueError(f"enumeration of 2**{total} tensors refused")
    shifts = np.arange(total - 1, -1, -1, dtype=np.uint64)
    for t in range(1 << total):
        bits = ((np.uint64(t) >> shifts) & np.uint64(1)).astype(np.int8)
        yield SignTensor((2 * bits - 1).reshape(dims))
