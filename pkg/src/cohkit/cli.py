"""Reproducible experiment driver.

Subcommands: sh-scan, axioms, plane, walk, eur, gil.  All outputs are CSV
(12 significant digits) or JSON and are byte-identical for a fixed seed at
any worker count.  Exit codes: 0 success, 1 property violation (details in
JSON dumps), 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from functools import partial
from pathlib import Path

import numpy as np

from ._pool import parallel_map
from .channels import AXIOM_NAMES, axiom_suite
from .entropy_plane import (boundary_samples, computational_basis,
                            eur_curve_point, fourier_basis, haar_basis,
                            basis_from_json, refined_eur_report,
                            valid_families)
from .linalg import eigh, load_matrix_json, validate_density
from .majorization import gil_report, schur_horn_report
from .measures import (EntropyConfig, MEASURE_TAGS, MeasureId, c2_measure,
                       c_l1, c_rel_ent, shannon_entropy, tsallis2)
from .random_states import SeedStream, coherence_walk, random_density

ENV_SEED = "COHKIT_SEED"
DEFAULT_SEED = 7
GIL_VERDICTS = ("forward_holds", "reverse_holds", "mixed")


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# formatting and small helpers

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value) + 0.0, ".12g")


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _dump_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _matrix_payload(matrix) -> dict:
    m = np.asarray(matrix, dtype=complex)
    return {"dim": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def _parse_ints(text: str) -> tuple[int, ...]:
    """Accept '4', '2..6', or '2,4,6'."""
    text = str(text).strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return tuple(range(lo, hi + 1))
        if "," in text:
            return tuple(int(part) for part in text.split(","))
        return (int(text),)
    except ValueError as exc:
        raise ConfigError(f"cannot parse integer range {text!r}") from exc


def _entropy_config(args, default_eta: float = 0.0) -> EntropyConfig:
    base = 2.0 if args.base == "2" else math.e
    eta = default_eta if args.eta is None else args.eta
    try:
        return EntropyConfig(log_base=base, regularization_eta=eta)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _mixed_random_density(rng, d: int, rank: int | None = None,
                          method: str = "mixed"):
    rank = int(rng.integers(1, d + 1)) if rank is None else rank
    if method == "mixed":
        method = "ginibre" if rng.integers(2) == 0 else "spectrum-haar"
    return random_density(d, rank, method, rng), rank


def _resolve_state(name: str, d: int, rank, rng, method: str = "mixed"):
    if name == "maximally-mixed":
        return np.eye(d, dtype=complex) / d
    if name == "random":
        return _mixed_random_density(rng, d, rank, method)[0]
    matrix = load_matrix_json(name)
    if matrix.shape[0] != d:
        raise ConfigError(f"state file has dim {matrix.shape[0]}, expected {d}")
    return validate_density(matrix, tol=1e-8)


def _resolve_basis(name: str, d: int, rng, index: int):
    if name == "computational":
        return computational_basis(d)
    if name == "fourier":
        return fourier_basis(d)
    if name == "haar":
        return haar_basis(d, rng, label=f"haar{index}")
    return basis_from_json(name, label=Path(name).stem)


# ---------------------------------------------------------------------------
# sh-scan

def _sh_trial(trial: int, *, seed: int, dims: tuple, perturb: float,
              tol: float, method: str) -> dict:
    rng = SeedStream(seed, trial).generator()
    d = int(dims[rng.integers(len(dims))])
    rho, _ = _mixed_random_density(rng, d, method=method)
    if perturb > 0:
        g = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
        rho = validate_density(rho + perturb * 0.5 * (g + g.conj().T), tol=0.1)
    report = schur_horn_report(rho, tol)
    result = {
        "trial": trial,
        "d": d,
        "plain_ok": report.plain_ok,
        "squared_ok": report.squared_ok,
        "worst_margin_plain": report.worst_margin_plain,
        "worst_margin_squared": report.worst_margin_squared,
        "k_at_worst": report.k_at_worst,
    }
    if not (report.plain_ok and report.squared_ok):
        dec = eigh(rho)
        result["dump"] = {
            "matrix": _matrix_payload(rho),
            "spectrum": dec.spectrum.tolist(),
            "diagonal": np.real(np.diagonal(rho)).tolist(),
            "k": report.k_at_worst,
            "margin": min(report.worst_margin_plain, report.worst_margin_squared),
        }
    return result


def cmd_sh_scan(args) -> int:
    dims = _parse_ints(args.d)
    runner = partial(_sh_trial, seed=args.seed, dims=dims,
                     perturb=args.perturb, tol=args.tol, method=args.method)
    results = parallel_map(runner, range(args.trials), workers=args.workers)
    header = ("trial", "d", "plain_ok", "squared_ok", "worst_margin_plain",
              "worst_margin_squared", "k_at_worst")
    rows = [[r[name] for name in header] for r in results]
    out = _outdir(args)
    _write_csv(out / "sh_scan.csv", header, rows)
    violations = [r["dump"] for r in results if "dump" in r]
    if violations:
        _dump_json(out / "sh_scan_violations.json", violations)
    worst_plain = min(r["worst_margin_plain"] for r in results)
    worst_squared = min(r["worst_margin_squared"] for r in results)
    print(f"sh-scan: trials={args.trials} violations={len(violations)} "
          f"worst_plain={worst_plain:.3e} worst_squared={worst_squared:.3e}")
    return 1 if violations else 0


# ---------------------------------------------------------------------------
# axioms

def cmd_axioms(args) -> int:
    dims = _parse_ints(args.d)
    kraus = _parse_ints(args.kraus)
    kraus_range = (min(kraus), max(kraus))
    is_cross = args.measure in ("c_cross", "c_cross_partial")
    cfg = _entropy_config(args, default_eta=1e-9 if is_cross else 0.0)
    try:
        measure = MeasureId(args.measure, args.k)
        report = axiom_suite(measure, dims, args.trials, kraus_range,
                             strict=args.strict, cfg=cfg, seed=args.seed,
                             tol=args.tol, chain_steps=args.chain_steps,
                             fresh_channels=not args.iterate_channel,
                             workers=args.workers)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = _outdir(args)
    rows = [(name, report.checks, report.pass_counts[name],
             report.worst_margins[name])
            for name in AXIOM_NAMES if name in report.pass_counts]
    _write_csv(out / f"axioms_{report.measure}.csv",
               ("axiom", "checks", "passes", "worst_margin"), rows)
    if report.mean_delta_a is not None:
        _write_csv(out / f"axioms_{report.measure}_asymmetry.csv",
                   ("mean_delta_a", "mean_delta_b"),
                   [(report.mean_delta_a, report.mean_delta_b)])
    if report.failures:
        _dump_json(out / f"axioms_{report.measure}_failures.json", report.failures)
    print(f"axioms[{report.measure}]: trials={report.trials} "
          f"failures={len(report.failures)}")
    return 0 if report.all_passed else 1


# ---------------------------------------------------------------------------
# plane

def _scatter_trial(trial: int, *, seed: int, d: int, base: str, eta: float,
                   method: str) -> tuple:
    cfg = EntropyConfig(log_base=2.0 if base == "2" else math.e,
                        regularization_eta=eta)
    rng = SeedStream(seed, trial).generator()
    rho, rank = _mixed_random_density(rng, d, method=method)
    lam = eigh(rho).spectrum
    return (trial, d, rank, tsallis2(lam), shannon_entropy(lam, cfg),
            c_l1(rho), c_rel_ent(rho, cfg), c2_measure(rho))


def cmd_plane(args) -> int:
    dims = _parse_ints(args.d)
    if len(dims) != 1:
        raise ConfigError("plane takes a single dimension")
    d = dims[0]
    cfg = _entropy_config(args)
    out = _outdir(args)
    for family in valid_families(d):
        rows = [(family.tag, d, t, point[0], point[1])
                for t, point in boundary_samples(family, args.samples, cfg)]
        _write_csv(out / f"plane_{family.tag}.csv",
                   ("family", "d", "t", "s2", "svn"), rows)
    if args.scatter_trials > 0:
        runner = partial(_scatter_trial, seed=args.seed, d=d, base=args.base,
                         eta=args.eta if args.eta is not None else 0.0,
                         method=args.method)
        rows = parallel_map(runner, range(args.scatter_trials), workers=args.workers)
        _write_csv(out / "plane_scatter.csv",
                   ("seed", "d", "rank", "s2", "svn", "c_l1", "c_r", "c2"), rows)
    print(f"plane: d={d} families={len(valid_families(d))} "
          f"scatter={args.scatter_trials}")
    return 0


# ---------------------------------------------------------------------------
# walk

def cmd_walk(args) -> int:
    dims = _parse_ints(args.d)
    if len(dims) != 1:
        raise ConfigError("walk takes a single dimension")
    d = dims[0]
    cfg = _entropy_config(args)
    rng = SeedStream(args.seed, 0).generator()
    state = _resolve_state(args.state, d, args.rank, rng, args.method)
    trajectory = coherence_walk(state, args.steps, args.strength, rng, cfg)
    rows = [(0, 1, *trajectory.records[0])]
    for step in range(1, args.steps + 1):
        rows.append((step, bool(trajectory.accepted[step - 1]),
                     *trajectory.records[step]))
    out = _outdir(args)
    _write_csv(out / "walk.csv", ("step", "accepted", "c_l1", "s2", "svn"), rows)
    accepted = int(trajectory.accepted.sum())
    print(f"walk: steps={args.steps} accepted={accepted}")
    return 0


# ---------------------------------------------------------------------------
# eur

def _eur_trial(trial: int, *, seed: int, d: int, rank, basis_names: tuple,
               base: str, eta: float, root: int, state_arg: str | None,
               method: str) -> dict:
    cfg = EntropyConfig(log_base=2.0 if base == "2" else math.e,
                        regularization_eta=eta)
    rng = SeedStream(seed, trial).generator()
    if state_arg is None:
        rho, _ = _mixed_random_density(rng, d, rank, method)
    else:
        rho = _resolve_state(state_arg, d, rank, rng, method)
    bases = [_resolve_basis(name, d, rng, i) for i, name in enumerate(basis_names)]
    report = refined_eur_report(rho, bases, cfg, root_order=root)
    return {"trial": trial, "d": d, "report": report}


def cmd_eur(args) -> int:
    dims = _parse_ints(args.d)
    if len(dims) != 1:
        raise ConfigError("eur takes a single dimension")
    d = dims[0]
    cfg = _entropy_config(args)
    basis_names = tuple(name.strip() for name in args.bases.split(",") if name.strip())
    if len(basis_names) < 2:
        raise ConfigError("eur needs at least two bases")
    out = _outdir(args)

    curve_rows = []
    for a in np.linspace(1.0 / d, 1.0, args.curve_samples):
        x, y = eur_curve_point(d, float(a), cfg)
        curve_rows.append((d, a, x, y))
    _write_csv(out / "eur_curve.csv", ("d", "a", "x", "y"), curve_rows)

    trials = 1 if args.state is not None else args.trials
    runner = partial(_eur_trial, seed=args.seed, d=d, rank=args.rank,
                     basis_names=basis_names, base=args.base,
                     eta=args.eta if args.eta is not None else 0.0,
                     root=args.root, state_arg=args.state,
                     method=args.method)
    results = parallel_map(runner, range(trials), workers=args.workers)

    n_bases = len(basis_names)
    header = (["seed", "d", "basis_labels"]
              + [f"h_{i + 1}" for i in range(n_bases)]
              + [f"lambda_max_{i + 1}" for i in range(n_bases)]
              + ["lhs", "refined_rhs", "mu_rhs", "holds", "refined_tighter"])
    rows = []
    violations = 0
    for res in results:
        report = res["report"]
        rows.append([res["trial"], res["d"], "+".join(report.basis_labels)]
                    + list(report.entropies) + list(report.max_probs)
                    + [report.lhs, report.refined_rhs, report.mu_rhs,
                       report.holds, report.refined_tighter])
        violations += int(not report.holds)
    _write_csv(out / "eur_table.csv", header, rows)
    tighter = sum(1 for res in results if res["report"].refined_tighter)
    print(f"eur: rows={len(rows)} violations={violations} "
          f"refined_tighter={tighter}/{len(rows)}")
    return 1 if violations else 0


# ---------------------------------------------------------------------------
# gil

def _gil_trial(trial: int, *, seed: int, dims: tuple, method: str) -> tuple:
    rng = SeedStream(seed, trial).generator()
    d = int(dims[rng.integers(len(dims))])
    rho, _ = _mixed_random_density(rng, d, method=method)
    return d, gil_report(rho).verdict


def cmd_gil(args) -> int:
    dims = _parse_ints(args.d)
    runner = partial(_gil_trial, seed=args.seed, dims=dims, method=args.method)
    results = parallel_map(runner, range(args.trials), workers=args.workers)
    counts = {d: dict.fromkeys(GIL_VERDICTS, 0) for d in dims}
    for d, verdict in results:
        counts[d][verdict] += 1
    rows = [(d, sum(counts[d].values()), counts[d]["forward_holds"],
             counts[d]["reverse_holds"], counts[d]["mixed"])
            for d in sorted(counts)]
    out = _outdir(args)
    _write_csv(out / "gil_frequencies.csv",
               ("d", "trials", "forward_holds", "reverse_holds", "mixed"), rows)
    print(f"gil: trials={args.trials} dims={list(dims)}")
    return 0


# ---------------------------------------------------------------------------
# parser

def _default_seed() -> int:
    raw = os.environ.get(ENV_SEED)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_SEED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohkit",
        description="Coherence-measure Monte Carlo harness (deterministic seeding).")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=_default_seed(),
                        help=f"master seed (env {ENV_SEED}, default {DEFAULT_SEED})")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--workers", type=int, default=1,
                        help="worker processes; output is worker-count independent")
    common.add_argument("--config", default=None,
                        help="TOML file whose values override flags")
    common.add_argument("--base", choices=("2", "e"), default="2",
                        help="entropy log base")
    common.add_argument("--eta", type=float, default=None,
                        help="regularization mix-in (default 0; 1e-9 for cross measures)")

    p = sub.add_parser("sh-scan", parents=[common],
                       help="Schur-Horn majorization Monte Carlo")
    p.add_argument("--d", default="2..6", help="dimension(s), e.g. 4 or 2..6")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--perturb", type=float, default=1e-3,
                   help="Hermiticity-preserving perturbation scale (0 disables)")
    p.add_argument("--method", choices=("mixed", "ginibre", "spectrum-haar"),
                   default="mixed", help="random-state generator")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_sh_scan)

    p = sub.add_parser("axioms", parents=[common],
                       help="coherence-measure axiom suite")
    p.add_argument("--measure", choices=MEASURE_TAGS, default="c_r")
    p.add_argument("--k", type=int, default=None,
                   help="restriction order for partial measures")
    p.add_argument("--d", default="2..6")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--kraus", default="1..6", help="Kraus operator count range")
    p.add_argument("--strict", action="store_true",
                   help="sample strictly incoherent (SIO) channels")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--chain-steps", type=int, default=1,
                   help="channel applications per trial")
    p.add_argument("--iterate-channel", action="store_true",
                   help="reuse one channel along the chain instead of fresh draws")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("plane", parents=[common],
                       help="boundary curves and random scatter in (S2, SvN)")
    p.add_argument("--d", default="4")
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--scatter-trials", type=int, default=1000)
    p.add_argument("--method", choices=("mixed", "ginibre", "spectrum-haar"),
                   default="mixed", help="random-state generator")
    p.set_defaults(func=cmd_plane)

    p = sub.add_parser("walk", parents=[common], help="coherence-walk trajectory")
    p.add_argument("--d", default="4")
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--strength", type=float, default=0.005)
    p.add_argument("--state", default="maximally-mixed",
                   help="maximally-mixed, random, or a JSON matrix path")
    p.add_argument("--rank", type=int, default=None, help="rank for random states")
    p.add_argument("--method", choices=("mixed", "ginibre", "spectrum-haar"),
                   default="mixed", help="random-state generator")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("eur", parents=[common],
                       help="refined entropic uncertainty reports and curve")
    p.add_argument("--d", default="2")
    p.add_argument("--bases", default="computational,fourier",
                   help="comma list: computational, fourier, haar, or JSON paths")
    p.add_argument("--state", default=None,
                   help="single state (maximally-mixed or JSON path); default random batch")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--curve-samples", type=int, default=256)
    p.add_argument("--root", type=int, default=1,
                   help="root order for the tightened bound column")
    p.add_argument("--method", choices=("mixed", "ginibre", "spectrum-haar"),
                   default="mixed", help="random-state generator")
    p.set_defaults(func=cmd_eur)

    p = sub.add_parser("gil", parents=[common],
                       help="Gil-index direction frequency table")
    p.add_argument("--d", default="2..6")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--method", choices=("mixed", "ginibre", "spectrum-haar"),
                   default="mixed", help="random-state generator")
    p.set_defaults(func=cmd_gil)
    return parser


def _apply_config(args) -> None:
    if args.config is None:
        return
    try:
        import tomllib
    except ModuleNotFoundError:  # python < 3.11
        import tomli as tomllib
    try:
        with open(args.config, "rb") as fh:
            table = tomllib.load(fh)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config {args.config!r}: {exc}") from exc
    for key, value in table.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest) or dest in ("func", "command", "config"):
            raise ConfigError(f"unknown config key {key!r}")
        setattr(args, dest, value)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        _apply_config(args)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
