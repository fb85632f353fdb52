"""Command line front end.

Every subcommand is a thin wrapper over one library entry point, prints
deterministically for a fixed seed (independent of --workers), and exits
with 0 on success, 1 when a theorem-check fails, 2 on usage errors and 3
when a budget or draw limit is exhausted.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from signforms.growth import window_experiment, window_json
from signforms.hardy_littlewood import (
    BlockExponents,
    admissible,
    blow_up_exponent,
    blowup_power_bounds,
    diagonal_mixed_norm,
    growth_witness_sweep,
    sweep_csv,
)
from signforms.ksz import (
    DrawsExhaustedError,
    confidence_constant,
    ksz_parameters,
    sample_small_norm_form,
)
from signforms.norms import DEFAULT_BUDGET, BudgetExceededError, norm_bracket
from signforms.tensor import SignTensor, exponents_to_json


def _parse_exponent(tok: str) -> float:
    tok = tok.strip().lower()
    if tok == "inf":
        return math.inf
    return float(tok)


def _parse_p(text: str) -> tuple[float, ...]:
    return tuple(_parse_exponent(t) for t in text.split(","))


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.split(","))


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(","))


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation; component preconditions are checked at dispatch."""

    subcommand: str
    dims: tuple[int, ...] | None = None
    p: tuple[float, ...] | None = None
    rhos: tuple[float, ...] | None = None
    blocks: tuple[int, ...] | None = None
    d: int | None = None
    seed: int = 0
    trials: int = 100
    budget: int = DEFAULT_BUDGET
    restarts: int = 8
    tol: float = 1e-10
    workers: int = 1
    max_draws: int = 64
    xi: float = 8.0
    tensor_path: str | None = None
    n_list: tuple[int, ...] | None = None
    out: str | None = None
    fmt: str = "json"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(cfg: RunConfig, obj) -> None:
    _emit(cfg, json.dumps(obj, indent=2) + "\n")


def _infer_d(cfg: RunConfig, length: int, what: str) -> None:
    if cfg.d is not None and cfg.d != length:
        raise ValueError(f"-d {cfg.d} does not match {length} entries in {what}")


def _load_tensor(path: str) -> SignTensor:
    with open(path, encoding="utf-8") as fp:
        return SignTensor.from_json(json.load(fp))


def cmd_constants(cfg: RunConfig) -> int:
    if cfg.dims is None or cfg.p is None:
        raise ValueError("constants requires -n and -p")
    _infer_d(cfg, len(cfg.dims), "-n")
    params = ksz_parameters(cfg.dims, cfg.p)
    obj = params.to_json()
    obj["xi"] = cfg.xi
    obj["confidence_constant"] = confidence_constant(cfg.xi, len(cfg.dims), cfg.dims)
    _emit_json(cfg, obj)
    return 0


def cmd_sample(cfg: RunConfig) -> int:
    if cfg.dims is None or cfg.p is None:
        raise ValueError("sample requires -n and -p")
    cert = sample_small_norm_form(
        cfg.dims,
        cfg.p,
        seed=cfg.seed,
        max_draws=cfg.max_draws,
        norm_budget=cfg.budget,
        restarts=cfg.restarts,
        tol=cfg.tol,
        workers=cfg.workers,
    )
    _emit_json(cfg, cert.to_json())
    return 0


def cmd_norm(cfg: RunConfig) -> int:
    if cfg.tensor_path is None or cfg.p is None:
        raise ValueError("norm requires --tensor and -p")
    tensor = _load_tensor(cfg.tensor_path)
    report = norm_bracket(
        tensor,
        cfg.p,
        budget=cfg.budget,
        restarts=cfg.restarts,
        tol=cfg.tol,
        seed=cfg.seed,
        workers=cfg.workers,
    )
    obj = {"dims": list(tensor.dims), "p": exponents_to_json(cfg.p)}
    obj.update(report.to_json())
    _emit_json(cfg, obj)
    return 0


def cmd_window(cfg: RunConfig) -> int:
    if cfg.dims is None or cfg.p is None:
        raise ValueError("window requires -n and -p")
    report = window_experiment(
        cfg.dims,
        cfg.p,
        trials=cfg.trials,
        seed=cfg.seed,
        budget=cfg.budget,
        workers=cfg.workers,
    )
    if cfg.fmt == "csv":
        buf = io.StringIO()
        report.to_csv(buf)
        _emit(cfg, buf.getvalue())
    else:
        _emit_json(cfg, window_json(report))
    return 1 if report.violated else 0


def cmd_hl(cfg: RunConfig) -> int:
    if cfg.rhos is None or cfg.p is None:
        raise ValueError("hl requires --rho and -p")
    blocks = cfg.blocks
    if blocks is None:
        if len(cfg.p) != len(cfg.rhos):
            raise ValueError(
                "without --blocks, -p and --rho must have equal length"
            )
        blocks = (1,) * len(cfg.rhos)
    _infer_d(cfg, sum(blocks), "the block structure")
    spec = BlockExponents(blocks=blocks, p=cfg.p, rhos=cfg.rhos)
    verdict = admissible(spec)
    obj = verdict.to_json()
    notes = []
    trivial = all(m == 1 for m in blocks)
    if trivial:
        try:
            obj["blow_up_exponent"] = blow_up_exponent(cfg.rhos, cfg.p)
            obj["s_lower_bounds"] = {
                ",".join(str(i) for i in labels): v
                for labels, v in blowup_power_bounds(cfg.rhos, cfg.p).items()
            }
        except ValueError as exc:
            obj["blow_up_exponent"] = None
            obj["s_lower_bounds"] = None
            notes.append(f"blow-up hypotheses not met: {exc}")
    else:
        obj["blow_up_exponent"] = None
        obj["s_lower_bounds"] = None
        notes.append("blow-up exponents apply to trivial blocks only")
    if cfg.tensor_path is not None:
        obj["hl_lhs"] = diagonal_mixed_norm(_load_tensor(cfg.tensor_path), spec)
    else:
        obj["hl_lhs"] = None
    obj["notes"] = notes
    _emit_json(cfg, obj)
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.d is None or cfg.p is None or cfg.rhos is None or cfg.n_list is None:
        raise ValueError("sweep requires -d, -p, --rho and --n-list")
    rows = growth_witness_sweep(
        cfg.d,
        cfg.p,
        cfg.rhos,
        cfg.n_list,
        trials=cfg.trials,
        seed=cfg.seed,
        workers=cfg.workers,
        max_draws=cfg.max_draws,
        norm_budget=cfg.budget,
    )
    if cfg.fmt == "csv":
        buf = io.StringIO()
        sweep_csv(rows, buf)
        _emit(cfg, buf.getvalue())
    else:
        _emit_json(
            cfg,
            {
                "rows": [
                    {
                        "d": r.d,
                        "n": r.n,
                        "rho_list": list(r.rhos),
                        "p_list": exponents_to_json(r.p),
                        "hl_lhs": r.hl_lhs,
                        "ksz_bound": r.ksz_bound,
                        "ratio": r.ratio,
                    }
                    for r in rows
                ]
            },
        )
    return 0


_COMMANDS = {
    "constants": cmd_constants,
    "sample": cmd_sample,
    "norm": cmd_norm,
    "window": cmd_window,
    "hl": cmd_hl,
    "sweep": cmd_sweep,
}


def _add_common(sp, fmt_default: str) -> None:
    sp.add_argument("--seed", type=int, default=0, help="64-bit base seed")
    sp.add_argument("--workers", type=int, default=1, help="thread count; never affects results")
    sp.add_argument("-o", "--out", default=None, help="write output to this path instead of stdout")
    sp.add_argument(
        "--format",
        dest="fmt",
        choices=("json", "csv"),
        default=fmt_default,
        help=f"output format (default {fmt_default})",
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="signforms",
        description="Random sign forms on mixed l_p products: certified sampling,"
        " norm brackets, growth windows and admissibility checks.",
    )
    sub = ap.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser(
        "constants",
        help="print all constants for (shape, p)",
        description="Evaluates C_d = 8 (d!)^(1-max(1/2,1/p_max)) sqrt(ln(1+4d)),"
        " gamma = min(2, max{p_k : p_k <= 2}), the deviation threshold"
        " R = sqrt(2 D L) with D = (d!)^(2(1-1/min(p_max,2)))"
        " prod n_k^(2(1/2-1/max(p_k,2))) and L = ln 8 + 2 (sum n_k) ln(1+4d),"
        " the tilt lambda = R/D, the norm bound C_d^(2(1-1/gamma))"
        " (sum n_k)^(1-1/gamma) prod n_k^max(1/gamma-1/p_k,0), and the"
        " confidence constant sqrt(2) max(ln(4 xi), 2 (sum n_k) ln(1+4d))^(1/2).",
    )
    sp.add_argument("-d", type=int, default=None, help="order; must match -n when given")
    sp.add_argument("-n", dest="dims", type=_parse_ints, default=None, help="comma list of dims")
    sp.add_argument("-p", type=_parse_p, default=None, help="comma list of exponents; token inf allowed")
    sp.add_argument("--xi", type=float, default=8.0, help="failure probability knob 1/xi (xi > 1)")
    _add_common(sp, "json")

    sp = sub.add_parser(
        "sample",
        help="draw a sign tensor certified below the norm threshold",
        description="Draws sign tensors keyed by mix64(seed, draw) until a"
        " certified norm upper bound falls below min(2 sqrt(2) R, bound),"
        " the high-probability sup-norm threshold for random signs.",
    )
    sp.add_argument("-n", dest="dims", type=_parse_ints, default=None, help="comma list of dims")
    sp.add_argument("-p", type=_parse_p, default=None, help="comma list of exponents")
    sp.add_argument("--max-draws", type=int, default=64, help="draw limit before giving up (exit 3)")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration budget for the certifier")
    sp.add_argument("--restarts", type=int, default=2, help="ascent restarts inside the certifier")
    sp.add_argument("--tol", type=float, default=1e-8, help="ascent stop tolerance")
    _add_common(sp, "json")

    sp = sub.add_parser(
        "norm",
        help="bracket the norm of a stored tensor",
        description="Certified bracket for ||A|| on l_{p_1} x ... x l_{p_d}:"
        " exact by dual form (d=1), vertex enumeration (all p = inf) or Gram"
        " power iteration (d=2, p=(2,2)); otherwise alternating-ascent lower"
        " bound against the Frobenius chain upper bound"
        " (prod n_k)^(1/2) prod n_k^max(1/2-1/p_k,0).",
    )
    sp.add_argument("--tensor", dest="tensor_path", default=None, help="path to tensor JSON")
    sp.add_argument("-p", type=_parse_p, default=None, help="comma list of exponents")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="vertex enumeration budget")
    sp.add_argument("--restarts", type=int, default=8, help="ascent restarts")
    sp.add_argument("--tol", type=float, default=1e-10, help="ascent stop tolerance")
    _add_common(sp, "json")

    sp = sub.add_parser(
        "window",
        help="norm-to-growth ratios over sign tensors",
        description="Compares exact norms of sign tensors against the growth"
        " function f = (sum sqrt(n_k)) prod n_k^(1/2-1/p_k): every ratio"
        " must stay above 1/(d 2^((d-1)/2)) (exit 1 otherwise); the"
        " sampling threshold gives the upper edge of the window.",
    )
    sp.add_argument("-n", dest="dims", type=_parse_ints, default=None, help="comma list of dims")
    sp.add_argument("-p", type=_parse_p, default=None, help="comma list of exponents, all >= 2")
    sp.add_argument("--trials", type=int, default=100, help="sampled tensors when enumeration is too large")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="vertex enumeration budget")
    _add_common(sp, "csv")

    sp = sub.add_parser(
        "hl",
        help="admissibility verdict and blow-up exponents",
        description="Checks sum_{j in I} 1/rho_j <= (|I|+1)/2 -"
        " sum_{j in I} |1/p^j| over every nonempty subset I of blocks;"
        " when rejected with trivial blocks, the constant blows up at least"
        " like n^max(sum 1/rho_j - (d+1)/2 + sum 1/p_j, 0).",
    )
    sp.add_argument("-d", type=int, default=None, help="order; must match the block structure")
    sp.add_argument("-p", type=_parse_p, default=None, help="comma list of slot exponents in (1, inf]")
    sp.add_argument("--rho", dest="rhos", type=_parse_floats, default=None, help="comma list of target exponents")
    sp.add_argument("--blocks", type=_parse_ints, default=None, help="comma list of block lengths (default trivial)")
    sp.add_argument("--tensor", dest="tensor_path", default=None, help="optional tensor JSON for the mixed sum")
    _add_common(sp, "json")

    sp = sub.add_parser(
        "sweep",
        help="mixed-sum growth against the norm bound over n",
        description="For shapes (n, ..., n), certifies a small-norm tensor and"
        " emits the trivial-block mixed sum prod n^(1/rho_j) against the"
        " norm bound; the log-log slope of the ratio estimates the blow-up"
        " exponent max(sum 1/rho_j - (d+1)/2 + sum 1/p_j, 0).",
    )
    sp.add_argument("-d", type=int, default=None, help="order of the sampled forms")
    sp.add_argument("-p", type=_parse_p, default=None, help="comma list of exponents")
    sp.add_argument("--rho", dest="rhos", type=_parse_floats, default=None, help="comma list of target exponents")
    sp.add_argument("--n-list", dest="n_list", type=_parse_ints, default=None, help="comma list of n values")
    sp.add_argument("--trials", type=int, default=1, help="certified draws per n")
    sp.add_argument("--max-draws", type=int, default=64, help="draw limit per certificate (exit 3)")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration budget for the certifier")
    _add_common(sp, "csv")

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    fields = {f for f in RunConfig.__dataclass_fields__}
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if k in fields})
    try:
        return _COMMANDS[cfg.subcommand](cfg)
    except (DrawsExhaustedError, BudgetExceededError) as exc:
        print(f"signforms: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, KeyError) as exc:
        print(f"signforms: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
