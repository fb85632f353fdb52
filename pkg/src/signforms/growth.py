"""Growth of the smallest attainable norm over sign tensors.

Two-sided window: every unimodular form is at least lower_const * f(shape)
in norm, and some sign choice stays below the sampling threshold, so the
smallest norm grows exactly like f.  window_experiment measures where
actual draws (or the full enumeration, when small enough) land inside that
window.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from signforms._util import pmap
from signforms.ksz import ksz_bound, ksz_gamma, sample_signs
from signforms.norms import DEFAULT_BUDGET, norm_bracket
from signforms.rng import mix64
from signforms.tensor import (
    SignTensor,
    exponents_to_json,
    iter_sign_tensors,
    validate_dims,
    validate_exponents,
)


def growth_function(dims, p) -> float:
    """f(shape, p) = (sqrt(n_1) + ... + sqrt(n_d)) * prod n_j^(1/2 - 1/p_j).

    Defined for p_j >= 2 only; below 2 the exponent would go negative and
    the growth statement does not apply.
    """
    dims = validate_dims(dims)
    p = validate_exponents(p, len(dims))
    for k, q in enumerate(p):
        if q < 2.0:
            raise ValueError(f"p[{k}] = {q} < 2: growth function undefined")
    head = sum(math.sqrt(n) for n in dims)
    prod = 1.0
    for n, q in zip(dims, p):
        inv = 0.0 if math.isinf(q) else 1.0 / q
        prod *= float(n) ** (0.5 - inv)
    return head * prod


def norm_lower_bound(dims, p) -> float:
    """Valid lower bound for every sign tensor: f(shape, p) / (d * 2^((d-1)/2))."""
    dims = validate_dims(dims)
    d = len(dims)
    return growth_function(dims, p) / (d * 2.0 ** ((d - 1) / 2.0))


def conjectured_growth(dims, p) -> float:
    """(sum n_k^(1-1/gamma)) * prod n_k^max(1/gamma - 1/p_k, 0), any p.

    Coincides with growth_function whenever every p_k >= 2 (gamma = 2).
    """
    dims = validate_dims(dims)
    p = validate_exponents(p, len(dims))
    g = ksz_gamma(p)
    head = sum(float(n) ** (1.0 - 1.0 / g) for n in dims)
    prod = 1.0
    for n, q in zip(dims, p):
        inv = 0.0 if math.isinf(q) else 1.0 / q
        prod *= float(n) ** max(1.0 / g - inv, 0.0)
    return head * prod


def littlewood_mixed_sum(tensor: SignTensor, pivot: int, placement: str) -> float:
    """Mixed l_1/l_2 sum with the l_1 index at slot `pivot`.

    placement 'outer_l1': sum_{i_pivot} (sum_rest |T|^2)^(1/2);
    placement 'inner_l1': (sum_rest (sum_{i_pivot} |T|)^2)^(1/2).
    """
    d = tensor.order
    if not 0 <= pivot < d:
        raise ValueError(f"pivot {pivot} out of range for order-{d} tensor")
    t = np.abs(tensor.signs.astype(np.float64))
    if placement == "outer_l1":
        rows = np.moveaxis(t, pivot, 0).reshape(tensor.dims[pivot], -1)
        return float(np.sqrt((rows**2).sum(axis=1)).sum())
    if placement == "inner_l1":
        collapsed = t.sum(axis=pivot)
        return float(np.sqrt((collapsed**2).sum()))
    raise ValueError(f"placement must be 'outer_l1' or 'inner_l1', got {placement!r}")


@dataclass(frozen=True)
class WindowRow:
    trial: int
    lower: float
    upper: float
    ratio: float
    method: str


@dataclass(frozen=True)
class WindowReport:
    """Per-tensor norm-to-f ratios against the proven window.

    violated means some exact ratio fell below lower_const (a theorem
    failure); warned means even the smallest ratio exceeded upper_const,
    which sampling cannot refute and is reported informationally.
    """

    dims: tuple[int, ...]
    p: tuple[float, ...]
    seed: int
    mode: str
    f_value: float
    lower_const: float
    upper_const: float
    rows: tuple[WindowRow, ...]
    min_ratio: float
    violated: bool
    warned: bool

    def to_csv(self, fp) -> None:
        w = csv.writer(fp, lineterminator="\n")
        w.writerow(["seed", "trial", "norm_lower", "norm_upper", "ratio", "method"])
        for r in self.rows:
            w.writerow([self.seed, r.trial, r.lower, r.upper, r.ratio, r.method])

    def json_summary(self) -> dict:
        return {
            "min_ratio": self.min_ratio,
            "lower_const": self.lower_const,
            "f_value": self.f_value,
            "violated": self.violated,
            "upper_const": self.upper_const,
            "warned": self.warned,
            "mode": self.mode,
            "trials": len(self.rows),
        }


def _exact_route(dims, p, budget: int) -> bool:
    d = len(dims)
    if d == 1:
        return True
    if all(math.isinf(q) for q in p) and (1 << sum(dims[:-1])) <= budget:
        return True
    return d == 2 and p == (2.0, 2.0)


def window_experiment(
    dims,
    p,
    trials: int = 100,
    seed: int = 0,
    enumerate_cap: int = 1 << 12,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> WindowReport:
    """Measure norm/f over sign tensors against the proven growth window.

    Every tensor's exact norm must sit above lower_const * f; that side is
    asserted per row and reported via `violated`.  When 2**(prod dims) is
    within enumerate_cap the experiment enumerates every sign tensor (the
    true minimum); otherwise it draws `trials` tensors keyed by
    mix64(seed, trial).

    Requires an exactly computable norm: d = 1, all slots l_inf within
    budget, or the bilinear l_2 case.
    """
    dims = validate_dims(dims)
    p = validate_exponents(p, len(dims))
    d = len(dims)
    if not _exact_route(dims, p, budget):
        raise ValueError(
            "window experiment needs an exact norm route:"
            " d = 1, all-inf exponents within budget, or d = 2 with p = (2, 2)"
        )
    f = growth_function(dims, p)
    lower_const = 1.0 / (d * 2.0 ** ((d - 1) / 2.0))
    upper_const = ksz_bound(dims, p) / f
    total = math.prod(dims)
    if total <= 24 and (1 << total) <= enumerate_cap:
        mode = "exhaustive"
        tensors = list(iter_sign_tensors(dims))
    else:
        if trials < 1:
            raise ValueError("trials must be positive")
        mode = "sampled"
        tensors = [sample_signs(dims, mix64(seed, i)) for i in range(trials)]

    def one(item: tuple[int, SignTensor]) -> WindowRow:
        i, tensor = item
        report = norm_bracket(tensor, p, budget=budget, seed=mix64(seed, i))
        return WindowRow(
            trial=i,
            lower=report.lower,
            upper=report.upper,
            ratio=report.lower / f,
            method=report.lower_method,
        )

    rows = tuple(pmap(one, enumerate(tensors), workers))
    min_ratio = min(r.ratio for r in rows)
    return WindowReport(
        dims=dims,
        p=p,
        seed=seed,
        mode=mode,
        f_value=f,
        lower_const=lower_const,
        upper_const=upper_const,
        rows=rows,
        min_ratio=min_ratio,
        violated=min_ratio < lower_const - 1e-9,
        warned=min_ratio > upper_const + 1e-9,
    )


def window_json(report: WindowReport) -> dict:
    """Full JSON form: summary plus configuration echo and per-trial rows."""
    return {
        "dims": list(report.dims),
        "p": exponents_to_json(report.p),
        "seed": report.seed,
        **report.json_summary(),
        "rows": [
            {
                "trial": r.trial,
                "norm_lower": r.lower,
                "norm_upper": r.upper,
                "ratio": r.ratio,
                "method": r.method,
            }
            for r in report.rows
        ],
    }
