"""Kahane-Salem-Zygmund constants and certified sign-form sampling.

The existence statement behind this module: for independent signs, the norm
of the resulting form on l_{p_1} x ... x l_{p_d} stays below an explicit
threshold with probability at least 1/2 per draw, so repeated seeded draws
plus a certifying norm bound produce a tensor with a proven small norm.

All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from signforms import rng
from signforms.norms import DEFAULT_BUDGET, BoundReport, norm_bracket
from signforms.tensor import (
    SignTensor,
    exponents_to_json,
    validate_dims,
    validate_exponents,
)


def ksz_constant(d: int, p) -> float:
    """C_d = 8 * (d!)^(1 - max(1/2, 1/p_max)) * sqrt(ln(1 + 4d)).

    p_max is the largest entry of p; the factorial power interpolates
    between no factorial loss at p_max = 1 and the square root at
    p_max >= 2.
    """
    if d < 1:
        raise ValueError("d must be positive")
    p = validate_exponents(p, d)
    pmax = max(p)
    inv = 0.0 if math.isinf(pmax) else 1.0 / pmax
    return (
        8.0
        * math.factorial(d) ** (1.0 - max(0.5, inv))
        * math.sqrt(math.log(1.0 + 4.0 * d))
    )


def ksz_gamma(p) -> float:
    """gamma = min(2, max{p_k : p_k <= 2}); 2 when no exponent is below 2."""
    p = tuple(p)
    p = validate_exponents(p, len(p))
    low = [q for q in p if q <= 2.0]
    if not low:
        return 2.0
    return min(2.0, max(low))


def ksz_bound(dims, p) -> float:
    """Norm threshold C_d^(2(1-1/gamma)) * (sum n_k)^(1-1/gamma) * prod n_k^max(1/gamma-1/p_k, 0).

    With gamma = 2 (all p_k >= 2) this reduces to
    C_d * sqrt(sum n_k) * prod n_k^(1/2 - 1/p_k).
    """
    dims = validate_dims(dims)
    d = len(dims)
    p = validate_exponents(p, d)
    g = ksz_gamma(p)
    c = ksz_constant(d, p)
    total = float(sum(dims))
    prod = 1.0
    for n, q in zip(dims, p):
        inv = 0.0 if math.isinf(q) else 1.0 / q
        prod *= float(n) ** max(1.0 / g - inv, 0.0)
    return c ** (2.0 * (1.0 - 1.0 / g)) * total ** (1.0 - 1.0 / g) * prod


def threshold_r_lambda(dims, p) -> tuple[float, float]:
    """Deviation threshold R and tilt lambda from the exponential moment bound.

    R = sqrt(2 * D * L) and lambda = R / D, where
    D = (d!)^(2(1-1/min(p_max,2))) * prod n_k^(2(1/2 - 1/max(p_k,2))) and
    L = ln 8 + 2 (sum n_k) ln(1 + 4d).  L is kept in log form so the
    (1+4d)^(2 sum n) covering factor never overflows.
    """
    dims = validate_dims(dims)
    d = len(dims)
    p = validate_exponents(p, d)
    pmax = max(p)
    mp = 2.0 if math.isinf(pmax) else min(pmax, 2.0)
    dfac = math.factorial(d) ** (2.0 * (1.0 - 1.0 / mp))
    prod = 1.0
    for n, q in zip(dims, p):
        bigm = math.inf if math.isinf(q) else max(q, 2.0)
        inv = 0.0 if math.isinf(bigm) else 1.0 / bigm
        prod *= float(n) ** (2.0 * (0.5 - inv))
    dval = dfac * prod
    lterm = math.log(8.0) + 2.0 * sum(dims) * math.log(1.0 + 4.0 * d)
    r = math.sqrt(2.0 * dval * lterm)
    return r, r / dval


def covering_log_count(r: float, n: int) -> float:
    """log of the r-net cardinality bound for the unit ball of R^n: 2n ln(1+2/r)."""
    if not (r > 0.0):
        raise ValueError(f"net radius must be positive, got {r}")
    if n < 1:
        raise ValueError("n must be positive")
    return 2.0 * n * math.log(1.0 + 2.0 / r)


def confidence_constant(xi: float, d: int, dims) -> float:
    """Constant scaling the threshold when the failure probability drops to 1/xi.

    sqrt(2) * max(ln(4 xi), 2 (sum n_k) ln(1 + 4d))^(1/2); requires xi > 1.
    """
    if not xi > 1.0:
        raise ValueError(f"xi must exceed 1, got {xi}")
    dims = validate_dims(dims)
    if d != len(dims):
        raise ValueError(f"d = {d} does not match {len(dims)} dims")
    return math.sqrt(2.0) * math.sqrt(
        max(math.log(4.0 * xi), 2.0 * sum(dims) * math.log(1.0 + 4.0 * d))
    )


@dataclass(frozen=True)
class KszParameters:
    """All constants attached to one (shape, p) problem."""

    dims: tuple[int, ...]
    p: tuple[float, ...]
    gamma: float
    c_d: float
    r: float
    lam: float
    bound: float

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "p": exponents_to_json(self.p),
            "gamma": self.gamma,
            "C_d": self.c_d,
            "R": self.r,
            "lambda": self.lam,
            "bound": self.bound,
        }


def ksz_parameters(dims, p) -> KszParameters:
    """Bundle gamma, C_d, R, lambda and the norm bound for (dims, p)."""
    dims = validate_dims(dims)
    p = validate_exponents(p, len(dims))
    r, lam = threshold_r_lambda(dims, p)
    return KszParameters(
        dims=dims,
        p=p,
        gamma=ksz_gamma(p),
        c_d=ksz_constant(len(dims), p),
        r=r,
        lam=lam,
        bound=ksz_bound(dims, p),
    )


def sample_signs(dims, seed: int) -> SignTensor:
    """Sign tensor with entries from the splitmix stream of `seed`.

    Entry at flat index i (row-major) is the sign bit of stream word i, so
    the draw is reproducible entry by entry and independent of chunking.
    """
    dims = validate_dims(dims)
    total = math.prod(dims)
    return SignTensor(rng.signs(seed, 0, total).reshape(dims))


class DrawsExhaustedError(RuntimeError):
    """No draw certified below the threshold.

    This signals that the certifying upper bound is too weak for the
    configuration, not that the probabilistic bound failed.  Carries the
    best draw seen.
    """

    def __init__(self, best_tensor, best_report, draws: int, threshold: float):
        self.best_tensor = best_tensor
        self.best_report = best_report
        self.draws = draws
        self.threshold = threshold
        super().__init__(
            f"no draw certified within {draws} attempts: best certified upper"
            f" {best_report.upper} exceeds threshold {threshold}"
        )


@dataclass(frozen=True)
class SampleCertificate:
    """A drawn tensor together with the proof that its norm is small."""

    tensor: SignTensor
    params: KszParameters
    report: BoundReport
    threshold: float
    threshold_kind: str
    draws: int
    seed: int

    def __post_init__(self):
        if not self.report.upper <= self.threshold:
            raise ValueError(
                f"certificate invalid: upper {self.report.upper}"
                f" > threshold {self.threshold}"
            )

    def to_json(self) -> dict:
        return {
            "tensor": self.tensor.to_json(),
            "params": self.params.to_json(),
            "report": self.report.to_json(),
            "threshold": self.threshold,
            "threshold_kind": self.threshold_kind,
            "draws": self.draws,
            "seed": self.seed,
        }


def sample_small_norm_form(
    dims,
    p,
    seed: int = 0,
    max_draws: int = 64,
    norm_budget: int = DEFAULT_BUDGET,
    restarts: int = 2,
    tol: float = 1e-8,
    workers: int = 1,
) -> SampleCertificate:
    """Draw sign tensors until one is certified below min(2 sqrt(2) R, bound).

    Draw i uses key mix64(seed, i) for its signs and an independent child
    key for the certifying bracket, so draws can be replayed or distributed
    without changing the result.

    :raises DrawsExhaustedError: after max_draws failures; the error carries
        the draw with the smallest certified upper bound.
    """
    if max_draws < 1:
        raise ValueError("max_draws must be positive")
    params = ksz_parameters(dims, p)
    tail = 2.0 * math.sqrt(2.0) * params.r
    if tail <= params.bound:
        threshold, kind = tail, "tail"
    else:
        threshold, kind = params.bound, "bound"
    best = None
    for i in range(max_draws):
        key = rng.mix64(seed, i)
        tensor = sample_signs(params.dims, rng.mix64(key, 0))
        report = norm_bracket(
            tensor,
            params.p,
            budget=norm_budget,
            restarts=restarts,
            tol=tol,
            seed=rng.mix64(key, 1),
            workers=workers,
        )
        if report.upper <= threshold:
            return SampleCertificate(
                tensor=tensor,
                params=params,
                report=report,
                threshold=threshold,
                threshold_kind=kind,
                draws=i + 1,
                seed=seed,
            )
        if best is None or report.upper < best[1].upper:
            best = (tensor, report)
    raise DrawsExhaustedError(best[0], best[1], max_draws, threshold)
