"""Admissibility and blow-up exponents for block-diagonal mixed sums.

A block structure groups the d slots of a form into k consecutive blocks;
restricting to multi-indices constant on each block and taking nested l_rho
norms gives the mixed sums studied here.  Admissibility of (rho, p) is a
family of subset inequalities; when they fail, the smallest possible
constant blows up polynomially and the exponent is explicit.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from signforms._util import pmap
from signforms.ksz import ksz_bound, sample_small_norm_form
from signforms.norms import DEFAULT_BUDGET
from signforms.rng import mix64
from signforms.tensor import (
    MixedNormSpec,
    SignTensor,
    diagonal_block_tensor,
    exponents_to_json,
    mixed_norm,
)

# slacks of exactly admissible rationals (rho = 2d/(d+1) and friends) land
# within a few ulps of zero in float arithmetic; below this they count as 0
ADMISSIBILITY_TOL = 1e-12

_MAX_BLOCKS = 20


@dataclass(frozen=True)
class BlockExponents:
    """Block structure with source exponents and target norm exponents.

    blocks are the block lengths (m_1, ..., m_k) summing to the form order;
    p holds one exponent per slot, grouped by block, each in (1, inf];
    rhos holds one target exponent per block, positive and finite.
    """

    blocks: tuple[int, ...]
    p: tuple[float, ...]
    rhos: tuple[float, ...]

    def __post_init__(self):
        blocks = tuple(int(m) for m in self.blocks)
        if not blocks or any(m < 1 for m in blocks):
            raise ValueError("blocks must be a nonempty tuple of positive ints")
        if len(blocks) > _MAX_BLOCKS:
            raise ValueError(f"more than {_MAX_BLOCKS} blocks not supported")
        p = tuple(float(q) for q in self.p)
        if len(p) != sum(blocks):
            raise ValueError(
                f"expected {sum(blocks)} slot exponents, got {len(p)}"
            )
        for i, q in enumerate(p):
            if math.isnan(q) or q <= 1.0:
                raise ValueError(f"p[{i}] must lie in (1, inf], got {q}")
        rhos = tuple(float(r) for r in self.rhos)
        if len(rhos) != len(blocks):
            raise ValueError(f"expected {len(blocks)} rho entries, got {len(rhos)}")
        for i, r in enumerate(rhos):
            if not (r > 0.0 and math.isfinite(r)):
                raise ValueError(f"rho[{i}] must be a finite positive real, got {r}")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rhos", rhos)

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def order(self) -> int:
        return sum(self.blocks)

    def inv_p_block(self, j: int) -> float:
        """sum of 1/p over the slots of block j (zero-based j)."""
        off = sum(self.blocks[:j])
        out = 0.0
        for q in self.p[off : off + self.blocks[j]]:
            out += 0.0 if math.isinf(q) else 1.0 / q
        return out


@dataclass(frozen=True)
class AdmissibilityVerdict:
    """Outcome of the subset inequalities.

    worst_subset uses one-based block labels, matching the usual statement
    over subsets of {1, ..., k}; slack is RHS - LHS there (negative means
    violated).
    """

    admissible: bool
    worst_subset: tuple[int, ...]
    slack: float

    def to_json(self) -> dict:
        return {
            "admissible": self.admissible,
            "worst_subset": list(self.worst_subset),
            "slack": self.slack,
        }


def _subsets(k: int):
    for mask in range(1, 1 << k):
        yield tuple(j + 1 for j in range(k) if mask >> j & 1)


def admissible(spec: BlockExponents) -> AdmissibilityVerdict:
    """Check sum_{j in I} 1/rho_j <= (|I|+1)/2 - sum_{j in I} |1/p^j| for all I.

    Equality counts as admissible.  The verdict carries the subset with the
    smallest slack; ties go to the smaller subset, then lexicographic order.
    """
    worst = None
    for labels in _subsets(spec.k):
        lhs = sum(1.0 / spec.rhos[j - 1] for j in labels)
        rhs = (len(labels) + 1) / 2.0 - sum(spec.inv_p_block(j - 1) for j in labels)
        slack = rhs - lhs
        key = (slack, len(labels), labels)
        if worst is None or key < worst:
            worst = key
    slack, _, labels = worst
    return AdmissibilityVerdict(
        admissible=slack >= -ADMISSIBILITY_TOL, worst_subset=labels, slack=slack
    )


def _check_blow_up_hypotheses(rhos, p) -> tuple[tuple[float, ...], tuple[float, ...]]:
    rhos = tuple(float(r) for r in rhos)
    p = tuple(float(q) for q in p)
    if len(rhos) != len(p) or not rhos:
        raise ValueError("rhos and p must be nonempty and of equal length")
    for i, r in enumerate(rhos):
        if not 1.0 <= r <= 2.0:
            raise ValueError(f"rho[{i}] must lie in [1, 2], got {r}")
    inv = 0.0
    for i, q in enumerate(p):
        if math.isnan(q) or q <= 1.0:
            raise ValueError(f"p[{i}] must lie in (1, inf], got {q}")
        inv += 0.0 if math.isinf(q) else 1.0 / q
    if inv > 0.5 + 1e-12:
        raise ValueError(f"sum of 1/p_k is {inv}, must not exceed 1/2")
    return rhos, p


def blow_up_exponent(rhos, p) -> float:
    """max(sum 1/rho_j - (d+1)/2 + sum 1/p_j, 0) for trivial blocks.

    Requires rho in [1, 2]^d and sum 1/p_j <= 1/2; zero exactly when the
    full-set inequality is admissible.
    """
    rhos, p = _check_blow_up_hypotheses(rhos, p)
    d = len(rhos)
    inv_r = sum(1.0 / r for r in rhos)
    inv_p = sum(0.0 if math.isinf(q) else 1.0 / q for q in p)
    return max(inv_r - (d + 1) / 2.0 + inv_p, 0.0)


def blowup_power_bounds(rhos, p) -> dict[tuple[int, ...], float]:
    """Per-subset lower bounds on the blow-up power of the constant.

    For each nonempty I: max(0, sum_I 1/rho_j - (|I|+1)/2 + sum_I 1/p_j),
    keyed by one-based index tuples.  The full set reproduces
    blow_up_exponent.
    """
    rhos, p = _check_blow_up_hypotheses(rhos, p)
    d = len(rhos)
    out = {}
    for labels in _subsets(d):
        inv_r = sum(1.0 / rhos[j - 1] for j in labels)
        inv_p = sum(
            0.0 if math.isinf(p[j - 1]) else 1.0 / p[j - 1] for j in labels
        )
        out[labels] = max(inv_r - (len(labels) + 1) / 2.0 + inv_p, 0.0)
    return out


def diagonal_mixed_norm(tensor: SignTensor, spec: BlockExponents) -> float:
    """Mixed l_rho norm of the block-diagonal restriction of the tensor.

    For unimodular tensors with trivial blocks this is exactly
    prod n_j^(1/rho_j).
    """
    return mixed_norm(
        diagonal_block_tensor(tensor, spec.blocks), MixedNormSpec(spec.rhos)
    )


@dataclass(frozen=True)
class SweepRow:
    d: int
    n: int
    rhos: tuple[float, ...]
    p: tuple[float, ...]
    hl_lhs: float
    ksz_bound: float
    ratio: float


def growth_witness_sweep(
    d: int,
    p,
    rhos,
    n_list,
    trials: int = 1,
    seed: int = 0,
    workers: int = 1,
    max_draws: int = 64,
    norm_budget: int = DEFAULT_BUDGET,
) -> tuple[SweepRow, ...]:
    """Certified-tensor mixed sums against the sampling bound, per shape (n,..,n).

    For each n and trial, draws a certified small-norm tensor and records
    the trivial-block mixed sum, the norm bound and their ratio.  The
    log-log slope of ratio against n estimates the blow-up exponent of the
    constant for (rhos, p).
    """
    if d < 1:
        raise ValueError("d must be positive")
    rhos = tuple(float(r) for r in rhos)
    if len(rhos) != d:
        raise ValueError(f"expected {d} rho entries, got {len(rhos)}")
    spec_rho = MixedNormSpec(rhos)
    n_list = [int(n) for n in n_list]
    if not n_list or any(n < 1 for n in n_list):
        raise ValueError("n_list must be a nonempty list of positive ints")
    if trials < 1:
        raise ValueError("trials must be positive")

    jobs = [(ni, n, t) for ni, n in enumerate(n_list) for t in range(trials)]

    def one(job):
        ni, n, t = job
        dims = (n,) * d
        cert = sample_small_norm_form(
            dims,
            p,
            seed=mix64(mix64(seed, ni), t),
            max_draws=max_draws,
            norm_budget=norm_budget,
        )
        lhs = mixed_norm(diagonal_block_tensor(cert.tensor, (1,) * d), spec_rho)
        bound = ksz_bound(dims, cert.params.p)
        return SweepRow(
            d=d,
            n=n,
            rhos=rhos,
            p=cert.params.p,
            hl_lhs=lhs,
            ksz_bound=bound,
            ratio=lhs / bound,
        )

    return tuple(pmap(one, jobs, workers))


def sweep_csv(rows, fp) -> None:
    """CSV with columns d,n,rho_list,p_list,hl_lhs,ksz_bound,ratio.

    List-valued cells join entries with ';' so the file stays one value per
    column.
    """
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(["d", "n", "rho_list", "p_list", "hl_lhs", "ksz_bound", "ratio"])
    for r in rows:
        w.writerow(
            [
                r.d,
                r.n,
                ";".join(str(x) for x in r.rhos),
                ";".join(str(x) for x in exponents_to_json(r.p)),
                r.hl_lhs,
                r.ksz_bound,
                r.ratio,
            ]
        )


def fit_log_slope(ns, values) -> float:
    """Least-squares slope of log(values) against log(ns)."""
    ns = np.asarray(ns, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if ns.shape != values.shape or ns.size < 2:
        raise ValueError("need at least two (n, value) pairs of equal length")
    if np.any(ns <= 0) or np.any(values <= 0):
        raise ValueError("log fit needs positive inputs")
    return float(np.polyfit(np.log(ns), np.log(values), 1)[0])
