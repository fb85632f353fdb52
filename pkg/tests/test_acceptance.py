"""Acceptance gate: ten end-to-end criteria, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -s` to see the lines as they
print; without -s pytest shows them for failing criteria only.  Every
criterion is self-contained and finishes well under a minute.
"""

import itertools
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from signforms.growth import norm_lower_bound, window_experiment
from signforms.hardy_littlewood import (
    BlockExponents,
    admissible,
    diagonal_mixed_norm,
    fit_log_slope,
    growth_witness_sweep,
)
from signforms.ksz import ksz_bound, ksz_constant, sample_signs, threshold_r_lambda
from signforms.norms import alt_max_norm, exact_norm_l2_bilinear, exact_norm_linf
from signforms.rng import mix64
from signforms.tensor import SignTensor, iter_sign_tensors

INF = math.inf


def _report(num: int, name: str, ok: bool, detail: str = "") -> bool:
    line = f"ACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  [{detail}]"
    print(line)
    return ok


def test_criterion_01_hadamard_anchor():
    h = SignTensor(np.array([[1, 1], [1, -1]], dtype=np.int8))
    linf = exact_norm_linf(h)
    l2 = exact_norm_l2_bilinear(h)
    lb = norm_lower_bound((2, 2), (INF, INF))
    ok = (
        abs(linf - 2.0) <= 1e-9
        and abs(l2 - math.sqrt(2.0)) <= 1e-9
        and abs(lb - 2.0) <= 1e-12 * 2.0
    )
    assert _report(
        1, "hadamard_anchor", ok, f"linf={linf}, l2={l2:.15f}, lower={lb:.15f}"
    )


def test_criterion_02_lower_bound_theorem():
    lb = norm_lower_bound((3, 3), (INF, INF))
    violations = 0
    worst = math.inf
    for t in iter_sign_tensors((3, 3)):
        v = exact_norm_linf(t)
        worst = min(worst, v)
        if v < lb - 1e-9:
            violations += 1
    ok = violations == 0
    assert _report(
        2,
        "lower_bound_theorem",
        ok,
        f"512 tensors, min norm {worst}, bound {lb:.6f}, violations {violations}",
    )


def test_criterion_03_sampler_success_probability():
    r, _ = threshold_r_lambda((4, 4), (INF, INF))
    threshold = 2.0 * math.sqrt(2.0) * r
    draws = 400
    over = 0
    for i in range(draws):
        t = sample_signs((4, 4), mix64(2026, i))
        if exact_norm_linf(t) > threshold:
            over += 1
    frac = over / draws
    limit = 0.5 + 3.0 * math.sqrt(0.25 / draws)
    ok = frac <= limit
    assert _report(
        3,
        "sampler_success_probability",
        ok,
        f"fraction {frac:.4f} <= {limit:.4f} (threshold {threshold:.2f})",
    )


def test_criterion_04_bound_chain_identity():
    checked = 0
    ok = True
    for d in (1, 2, 3, 4):
        for dims in itertools.product((1, 2, 4, 8, 16), repeat=d):
            for p in itertools.product((2.0, 4.0, INF), repeat=d):
                bound = ksz_bound(dims, p)
                r, _ = threshold_r_lambda(dims, p)
                if 2.0 * math.sqrt(2.0) * r > bound * (1.0 + 1e-12):
                    ok = False
                want = ksz_constant(d, p) * math.sqrt(sum(dims))
                for n, q in zip(dims, p):
                    inv = 0.0 if math.isinf(q) else 1.0 / q
                    want *= n ** (0.5 - inv)
                if abs(bound - want) > 1e-12 * want:
                    ok = False
                checked += 1
    assert _report(4, "bound_chain_identity", ok, f"{checked} (shape, p) combinations")


def test_criterion_05_window_experiment():
    rep = window_experiment((8, 8), (2.0, 2.0), trials=200, seed=14)
    svd_ok = True
    for row in rep.rows:
        t = sample_signs((8, 8), mix64(14, row.trial))
        want = float(np.linalg.svd(t.signs.astype(float), compute_uv=False)[0])
        if abs(row.lower - want) > 1e-9 * want:
            svd_ok = False
    lower_ok = rep.min_ratio >= rep.lower_const - 1e-9
    upper_note = "<=" if rep.min_ratio <= rep.upper_const else ">"
    ok = lower_ok and svd_ok and not rep.violated
    assert _report(
        5,
        "window_experiment",
        ok,
        f"min ratio {rep.min_ratio:.4f} >= {rep.lower_const:.4f},"
        f" {upper_note} upper {rep.upper_const:.1f}, svd agreement {svd_ok}",
    )


def test_criterion_06_hl_identity():
    gen = np.random.Generator(np.random.Philox(key=1207))
    worst = 0.0
    for trial in range(50):
        d = int(gen.integers(1, 4))
        dims = tuple(int(n) for n in gen.integers(1, 7, size=d))
        rhos = tuple(float(r) for r in gen.uniform(1.0, 2.0, size=d))
        spec = BlockExponents(blocks=(1,) * d, p=(4.0,) * d, rhos=rhos)
        t = sample_signs(dims, mix64(606, trial))
        got = diagonal_mixed_norm(t, spec)
        want = math.prod(n ** (1.0 / r) for n, r in zip(dims, rhos))
        worst = max(worst, abs(got - want) / want)
    ok = worst <= 1e-12
    assert _report(6, "hl_identity", ok, f"50 cases, worst relative error {worst:.2e}")


def test_criterion_07_admissibility_goldens():
    ok = True
    v = admissible(BlockExponents((1, 1), (INF, INF), (4.0 / 3.0, 4.0 / 3.0)))
    ok &= v.admissible and abs(v.slack) <= 1e-12
    for d in (1, 2, 3, 4, 5):
        rho = 2.0 * d / (d + 1.0)
        v = admissible(BlockExponents((1,) * d, (INF,) * d, (rho,) * d))
        ok &= v.admissible and abs(v.slack) <= 1e-12
    v = admissible(BlockExponents((1, 1), (INF, INF), (1.0, 1.0)))
    ok &= (
        not v.admissible
        and v.worst_subset == (1, 2)
        and abs(v.slack + 0.5) <= 1e-12
    )
    assert _report(
        7, "admissibility_goldens", ok, "4/3 critical, 2d/(d+1) for d<=5, (1,1) rejected"
    )


def test_criterion_08_blow_up_slope():
    ns = [2, 4, 8, 16]
    rows = growth_witness_sweep(2, (INF, INF), (1.0, 1.0), ns, seed=4)
    slope_blow = fit_log_slope([r.n for r in rows], [r.ratio for r in rows])
    rows = growth_witness_sweep(2, (INF, INF), (4.0 / 3.0,) * 2, ns, seed=4)
    slope_adm = fit_log_slope([r.n for r in rows], [r.ratio for r in rows])
    ok = abs(slope_blow - 0.5) <= 0.1 and abs(slope_adm) <= 0.1
    assert _report(
        8,
        "blow_up_slope",
        ok,
        f"rho=1 slope {slope_blow:.4f} (want 0.5+-0.1),"
        f" rho=4/3 slope {slope_adm:.4f} (want |.|<=0.1)",
    )


def test_criterion_09_alternating_ascent_oracle():
    # monotonicity is asserted inside every sweep: the ascent raises
    # RuntimeError if the objective ever decreases
    worst = 0.0
    for trial in range(50):
        t = sample_signs((6, 6), mix64(5150, trial))
        val, _ = alt_max_norm(t, (2.0, 2.0), restarts=20)
        want = float(np.linalg.svd(t.signs.astype(float), compute_uv=False)[0])
        worst = max(worst, abs(val - want) / want)
    ok = worst <= 1e-6
    assert _report(
        9,
        "alternating_ascent_oracle",
        ok,
        f"50 matrices, worst relative error {worst:.2e}",
    )


def test_criterion_10_cli_determinism(tmp_path):
    h = tmp_path / "h22.json"
    h.write_text(json.dumps(SignTensor(np.array([[1, 1], [1, -1]], np.int8)).to_json()))
    t33 = tmp_path / "t33.json"
    t33.write_text(json.dumps(sample_signs((3, 3), 1).to_json()))
    t222 = tmp_path / "t222.json"
    t222.write_text(json.dumps(sample_signs((2, 2, 2), 2).to_json()))
    configs = [
        ("constants", "-n", "4,4", "-p", "inf,inf"),
        ("sample", "-n", "4,4", "-p", "inf,inf", "--seed", "5"),
        ("sample", "-n", "8,8", "-p", "inf,inf", "--seed", "9"),
        ("norm", "--tensor", str(h), "-p", "inf,inf"),
        ("norm", "--tensor", str(t33), "-p", "2,2"),
        ("norm", "--tensor", str(t222), "-p", "2,2,2", "--restarts", "4",
         "--seed", "11"),
        ("window", "-n", "2,2", "-p", "inf,inf", "--format", "csv"),
        ("window", "-n", "5,5", "-p", "inf,inf", "--trials", "6", "--seed", "2",
         "--format", "json"),
        ("hl", "-p", "inf,inf", "--rho", "1,1"),
        ("sweep", "-d", "2", "-p", "inf,inf", "--rho", "1,1", "--n-list", "2,4,8",
         "--seed", "3", "--format", "csv"),
    ]
    ok = True
    for args in configs:
        outputs = []
        for w in ("1", "2", "4"):
            res = subprocess.run(
                [sys.executable, "-m", "signforms", *args, "--workers", w],
                capture_output=True,
            )
            if res.returncode != 0:
                ok = False
            outputs.append(res.stdout)
        if not (outputs[0] == outputs[1] == outputs[2] and outputs[0]):
            ok = False
    assert _report(
        10, "cli_determinism", ok, f"{len(configs)} configs x workers 1/2/4"
    )
