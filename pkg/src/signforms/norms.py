"""Operator norms of sign forms on mixed l_p products.

Exact values come from three routes: the closed dual form for linear forms,
vertex enumeration for sup norms (the maximum over the product of l_inf
balls is attained at sign vertices, and the last slot collapses to an l_1
sum), and Gram power iteration for bilinear l_2.  Everything else is
bracketed: alternating dual ascent from below, Frobenius-type chains and the
sup-norm relaxation from above.

All routines are deterministic for fixed arguments, including the worker
count: enumeration chunks merge by (value, lexicographic pattern) and
restarts merge by (value, restart index).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from signforms._kernels import best_sign_pattern
from signforms._util import pmap, split_range
from signforms.rng import lp_sphere_point, mix64
from signforms.tensor import (
    SignTensor,
    dual_maximizer,
    partial_coefficients,
    validate_exponents,
)

DEFAULT_BUDGET = 1 << 24


class BudgetExceededError(ValueError):
    """Raised when vertex enumeration would exceed the assignment budget."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration needs {required} sign assignments, budget is {budget}"
        )


class ConvergenceError(RuntimeError):
    """Power iteration ran out of iterations; carries the best estimate."""

    def __init__(self, best_estimate: float, iterations: int):
        self.best_estimate = best_estimate
        self.iterations = iterations
        super().__init__(
            f"no convergence after {iterations} iterations,"
            f" best estimate {best_estimate!r}"
        )


@dataclass(frozen=True)
class BoundReport:
    """Certified two-sided bracket for an operator norm.

    lower is achieved by `witness` (when present); upper is a proof, not an
    estimate.  lower == upper marks an exact evaluation.
    """

    lower: float
    upper: float
    lower_method: str
    upper_method: str
    witness: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        if not (self.lower <= self.upper * (1.0 + 1e-9) + 1e-12):
            raise ValueError(
                f"bracket inverted: lower {self.lower} > upper {self.upper}"
            )

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "lower_method": self.lower_method,
            "upper_method": self.upper_method,
            "witness": None
            if self.witness is None
            else [[float(v) for v in x] for x in self.witness],
        }


def _enumeration_count(dims) -> int:
    return 1 << sum(dims[:-1])


def _merge_kernel_results(results):
    # results: iterable of (value, int8 pattern); smallest pattern wins ties
    best_v = -math.inf
    best_s = None
    for v, s in results:
        if v > best_v or (v == best_v and tuple(s) < tuple(best_s)):
            best_v, best_s = v, s
    return best_v, best_s


def _completion(y: np.ndarray) -> np.ndarray:
    # lexicographically smallest optimal last slot: -1 wherever the partial
    # coefficient vanishes
    return np.where(y > 0, 1.0, -1.0)


def exhaustive_linf_report(
    tensor: SignTensor, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> BoundReport:
    """Exact sup norm over the product of l_inf balls, with witness.

    Enumerates sign assignments of slots 0..d-2 (the maximum sits at +-1
    vertices); the last slot is the sign completion of the partial
    coefficients.  Witness ties resolve to the lexicographically smallest
    full sign pattern, with -1 ordered before +1.

    :raises BudgetExceededError: if 2**(n_0+...+n_{d-2}) exceeds `budget`.
    """
    dims = tensor.dims
    d = len(dims)
    if d == 1:
        c = tensor.signs.astype(np.float64)
        x = _completion(c)
        value = float(np.abs(c).sum())
        return BoundReport(value, value, "exhaustive", "exhaustive", (x,))
    required = _enumeration_count(dims)
    if required > budget:
        raise BudgetExceededError(required, budget)

    if d == 2:
        M = np.ascontiguousarray(tensor.signs, dtype=np.float64)
        ranges = split_range(0, 1 << dims[0], max(1, workers) * 4)
        chunks = pmap(lambda r: best_sign_pattern(M, r[0], r[1]), ranges, workers)
        value, s = _merge_kernel_results(chunks)
        x0 = s.astype(np.float64)
        y = M.T @ x0
        witness = (x0, _completion(y))
        return BoundReport(value, value, "exhaustive", "exhaustive", witness)

    # d >= 3: lexicographic prefixes over slots 0..d-3, kernel on the rest
    m_prefix = sum(dims[: d - 2])
    tail = np.ascontiguousarray(tensor.signs, dtype=np.float64)

    def one_prefix(prefix):
        xs = []
        off = 0
        for n in dims[: d - 2]:
            xs.append(np.array(prefix[off : off + n], dtype=np.float64))
            off += n
        B = tail
        for x in xs:  # axis 0 is always the next uncontracted slot
            B = np.tensordot(x, B, axes=(0, 0))
        v, s = best_sign_pattern(np.ascontiguousarray(B), 0, 1 << dims[d - 2])
        return v, xs, s, B

    prefixes = itertools.product((-1.0, 1.0), repeat=m_prefix)
    best = None
    while True:
        batch = list(itertools.islice(prefixes, 1024))
        if not batch:
            break
        # ascending prefix order: the first maximum is the lex smallest
        for v, xs, s, B in pmap(one_prefix, batch, workers):
            if best is None or v > best[0]:
                best = (v, xs, s, B)
    value, xs, s, B = best
    x_pen = s.astype(np.float64)
    y = B.T @ x_pen
    witness = (*xs, x_pen, _completion(y))
    return BoundReport(value, value, "exhaustive", "exhaustive", witness)


def exact_norm_linf(
    tensor: SignTensor, budget: int = DEFAULT_BUDGET, workers: int = 1
) -> float:
    """Exact norm when every slot carries l_inf.  See exhaustive_linf_report."""
    return exhaustive_linf_report(tensor, budget, workers).lower


def _perturb(v: np.ndarray) -> np.ndarray:
    w = v + 2.0 ** -np.arange(len(v), dtype=np.float64)
    nrm = float(np.linalg.norm(w))
    if nrm == 0.0:
        w = np.zeros(len(v))
        w[0] = 1.0
        return w
    return w / nrm


def _gram_power(tensor: SignTensor, tol: float, max_iter: int):
    """Top singular value of the matrix of a bilinear form, with witness.

    Power iteration on the smaller Gram operator, started from the all-ones
    direction.  On stagnation the iterate is perturbed once by the fixed
    vector (1, 1/2, 1/4, ...); that kick has weight in every eigendirection,
    so an unlucky start orthogonal to the top space cannot trap the
    iteration.  Accepts when a geometric tail estimate of the remaining gain
    drops below tol relative to the Rayleigh quotient.
    """
    if tensor.order != 2:
        raise ValueError(f"bilinear route needs an order-2 tensor, got {tensor.order}")
    M = tensor.signs.astype(np.float64)
    n0, n1 = M.shape
    right = n1 <= n0
    G = M.T @ M if right else M @ M.T
    n = G.shape[0]
    v = np.ones(n) / math.sqrt(n)
    lam = 0.0
    perturbed = False
    prev_gain = math.inf
    stall = 0
    eps = np.finfo(np.float64).eps
    for _ in range(max_iter):
        w = G @ v
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            if perturbed:
                lam = 0.0
                break
            v = _perturb(v)
            perturbed = True
            continue
        lam_new = float(v @ w)
        gain = max(lam_new - lam, 0.0)
        lam = lam_new
        v = w / nw
        if gain > tol * max(lam, 1.0):
            prev_gain = gain
            stall = 0
            continue
        if not perturbed:
            v = _perturb(v)
            perturbed = True
            prev_gain = math.inf
            stall = 0
            continue
        stall += 1
        if stall < 2:
            prev_gain = gain
            continue
        if gain <= 8.0 * eps * max(lam, 1.0):
            break
        ratio = gain / prev_gain if prev_gain > 0 else 0.0
        if ratio < 1.0 and gain * ratio / (1.0 - ratio) <= tol * max(lam, 1.0):
            break
        prev_gain = gain
    else:
        raise ConvergenceError(math.sqrt(max(lam, 0.0)), max_iter)

    if right:
        x1 = v
        y = M @ x1
        sigma = float(np.linalg.norm(y))
        x0 = y / sigma if sigma > 0 else _completion(y) / math.sqrt(n0)
    else:
        x0 = v
        y = M.T @ x0
        sigma = float(np.linalg.norm(y))
        x1 = y / sigma if sigma > 0 else _completion(y) / math.sqrt(n1)
    return sigma, (x0, x1)


def exact_norm_l2_bilinear(
    tensor: SignTensor, tol: float = 1e-12, max_iter: int = 100_000
) -> float:
    """Largest singular value of an order-2 sign tensor to relative tol."""
    sigma, _ = _gram_power(tensor, tol, max_iter)
    return sigma


def alt_max_norm(
    tensor: SignTensor,
    p,
    restarts: int = 8,
    tol: float = 1e-10,
    seed: int = 0,
    workers: int = 1,
    max_sweeps: int = 500,
) -> tuple[float, tuple[np.ndarray, ...]]:
    """Lower bound by alternating dual ascent.

    Each sweep replaces every slot in turn by the dual maximizer of its
    partial coefficients, so the objective never decreases; a sweep whose
    relative gain stays below tol twice in a row ends the restart.  Restart i
    starts from l_p sphere points keyed by mix64(seed, i) and the best
    (value, restart index) wins, independent of worker count.

    Returns (value, witness); the witness point tuple achieves the value.
    """
    dims = tensor.dims
    d = len(dims)
    p = validate_exponents(p, d)
    if restarts < 1:
        raise ValueError("restarts must be positive")

    def one(i: int):
        key = mix64(seed, i)
        attempt = 0

        def fresh_point():
            pk = mix64(key, attempt)
            return [lp_sphere_point(p[k], dims[k], mix64(pk, k)) for k in range(d)]

        xs = fresh_point()
        val = 0.0
        stall = 0
        sweeps = 0
        while sweeps < max_sweeps:
            sweeps += 1
            prev = val
            degenerate = False
            for k in range(d):
                c = partial_coefficients(tensor, xs, k)
                x, v = dual_maximizer(c, p[k])
                if v == 0.0:
                    degenerate = True
                    break
                if v < val - 1e-12 * max(1.0, val):
                    raise RuntimeError(
                        f"ascent decreased from {val} to {v} in slot {k}"
                    )
                xs[k] = x
                val = v
            if degenerate:
                attempt += 1
                if attempt > 8:
                    break
                xs = fresh_point()
                val = 0.0
                stall = 0
                continue
            if val > 0.0 and val - prev <= tol * val:
                stall += 1
                if stall >= 2:
                    break
            else:
                stall = 0
        return val, tuple(xs)

    results = pmap(one, range(restarts), workers)
    best_val, best_xs = results[0]
    for val, xs in results[1:]:
        if val > best_val:
            best_val, best_xs = val, xs
    return best_val, best_xs


def upper_bound_frobenius(tensor: SignTensor, p) -> float:
    """Frobenius chain upper bound, valid when every p_k >= 2.

    ||A|| <= ||A||_F * prod n_k^(1/2 - 1/p_k).  For a sign tensor the
    Frobenius norm is (prod n_k)^(1/2).
    """
    dims = tensor.dims
    p = validate_exponents(p, len(dims))
    for k, q in enumerate(p):
        if q < 2.0:
            raise ValueError(f"p[{k}] = {q} < 2: the chain bound does not apply")
    frob = math.sqrt(tensor.size)
    return frob * math.prod(n ** (0.5 - 1.0 / q) for n, q in zip(dims, p))


def _frobenius_chain_any_p(dims, p) -> float:
    # clipped exponents: for p < 2 the l_p ball sits inside the l_2 ball, so
    # the p = 2 factor (exponent 0) certifies those slots too
    frob = math.sqrt(math.prod(dims))
    return frob * math.prod(n ** max(0.5 - 1.0 / q, 0.0) for n, q in zip(dims, p))


def norm_bracket(
    tensor: SignTensor,
    p,
    budget: int = DEFAULT_BUDGET,
    restarts: int = 8,
    tol: float = 1e-10,
    seed: int = 0,
    workers: int = 1,
) -> BoundReport:
    """Certified bracket for the norm of the form on l_{p_1} x ... x l_{p_d}.

    Exact routes when applicable: closed dual form for d = 1, vertex
    enumeration when every slot is l_inf and the assignment count fits the
    budget, Gram power iteration for d = 2 with p = (2, 2).  Otherwise the
    lower side is alternating ascent and the upper side is the smaller of
    the clipped Frobenius chain and (when affordable) the exact sup norm,
    which dominates every l_p ball norm.
    """
    dims = tensor.dims
    d = len(dims)
    p = validate_exponents(p, d)

    if d == 1:
        x, value = dual_maximizer(tensor.signs.astype(np.float64), p[0])
        return BoundReport(value, value, "dual_exact", "dual_exact", (x,))

    all_inf = all(math.isinf(q) for q in p)
    if all_inf and _enumeration_count(dims) <= budget:
        return exhaustive_linf_report(tensor, budget, workers)

    if d == 2 and p == (2.0, 2.0):
        sigma, witness = _gram_power(tensor, min(tol, 1e-12), 100_000)
        return BoundReport(sigma, sigma, "gram_power", "gram_power", witness)

    lower, witness = alt_max_norm(tensor, p, restarts, tol, seed, workers)
    upper_method = "frobenius_chain"
    upper = _frobenius_chain_any_p(dims, p)
    if _enumeration_count(dims) <= budget:
        relaxed = exhaustive_linf_report(tensor, budget, workers).upper
        if relaxed < upper:
            upper, upper_method = relaxed, "linf_relax"
    return BoundReport(lower, upper, "alt_max", upper_method, witness)
