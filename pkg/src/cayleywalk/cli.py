"""Command-line front end.

Every command writes CSV (or JSON where noted) with 17 significant digits so
that doubles round-trip exactly. Exit codes: 0 ok, 1 a check failed, 2 I/O
error, 3 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import genfun, limitlaws, stats
from .core import Case, Parity, WalkParams
from .ctwalk import ct_pmf
from .linewalk import classical_walk, iter_line
from .treewalk import (
    check_lemma1,
    classify,
    distance_distribution,
    first_letters,
    level_size,
    root_letters,
    run_tree,
    word_at,
)

log = logging.getLogger("cayleywalk")

EXIT_OK, EXIT_CHECK, EXIT_IO, EXIT_GUARD = 0, 1, 2, 3
TREE_MAX_STEPS = 14
TREE_MAX_AMPLITUDES = 5_000_000
GENFUN_TOL = 1e-8
PROB_FLOOR = 1e-15

DEFAULT_STEPS = {
    "simulate-line": 500,
    "simulate-tree": 10,
    "localization": 2000,
    "weak-limit": 2000,
    "genfun-check": 30,
    "continuous": 200,
    "density": 0,
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _row(values) -> list[str]:
    return [v if isinstance(v, str) else fmt(v) for v in values]


def write_csv(path: Path, header: list[str], rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(_row(r))
    write_text(path, buf.getvalue())


def write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from exc


def sibling(path: Path, tag: str) -> Path:
    return path.with_name(f"{path.stem}_{tag}{path.suffix or '.csv'}")


def _params(args) -> WalkParams:
    return WalkParams(args.kappa, Case(args.case))


# --- commands -----------------------------------------------------------------


def cmd_simulate_line(args) -> int:
    params = _params(args)
    series = []
    final = None
    for state in iter_line(params, args.steps):
        if state.time % args.every == 0 or state.time == args.steps:
            series.append(state.distribution(params))
        final = state
    if args.format == "json":
        doc = {
            "params": params.to_dict(),
            "series": [
                {"t": int(d.time), "pmf": [float(fmt(v)) for v in d.pmf]} for d in series
            ],
        }
        write_text(args.out, json.dumps(doc, indent=1) + "\n")
    else:
        rows = ((d.time, x, p) for d in series for x, p in enumerate(d.pmf) if p > PROB_FLOOR)
        write_csv(args.out, ["t", "x", "p"], rows)

    quantum = final.distribution(params)
    classical = classical_walk(params.kappa, args.steps)
    n = max(len(quantum), len(classical))
    q, c = quantum.padded(n), classical.padded(n)
    write_csv(
        sibling(args.out, "final").with_suffix(".csv"),
        ["x", "quantum", "classical"],
        ((x, q[x], c[x]) for x in range(n)),
    )
    return EXIT_OK


def cmd_simulate_tree(args) -> int:
    params = _params(args)
    if args.steps > TREE_MAX_STEPS:
        raise CliError(f"tree simulation is limited to {TREE_MAX_STEPS} steps", EXIT_GUARD)
    if level_size(params.kappa, args.steps) * params.kappa > TREE_MAX_AMPLITUDES:
        raise CliError("tree state would exceed the memory guard", EXIT_GUARD)
    lemma_rows = []
    state = None
    for state in run_tree(params, args.steps):
        lemma_rows.append((state.time, check_lemma1(state, params)))

    k = params.kappa
    vertex_rows = []
    class_mass: dict[tuple[str, int, int], float] = {}
    for n, block in enumerate(state.levels):
        if block is None:
            continue
        probs = state.vertex_probabilities(n)
        vertex_rows.extend((str(word_at(i, n, k)), n, p) for i, p in enumerate(probs))
        amp2 = np.abs(block) ** 2
        if n == 0:
            for eps in range(k):
                lab = classify(word_at(0, 0, k), eps)
                class_mass[lab] = float(amp2[0, eps])
            continue
        rows = np.arange(block.shape[0])
        head = first_letters(k, n).astype(np.intp)
        inward = amp2[rows, head]
        outward = amp2.sum(axis=1) - inward
        roots = root_letters(k, n, rows)
        for j in range(k):
            sel = roots == j
            class_mass[("-", j, n)] = float(inward[sel].sum())
            class_mass[("+", j, n)] = float(outward[sel].sum())

    write_csv(args.out, ["word", "length", "p"], vertex_rows)
    write_csv(
        sibling(args.out, "classes"),
        ["sign", "j", "x", "p"],
        ((s, j, x, p) for (s, j, x), p in sorted(class_mass.items(), key=lambda kv: (kv[0][2], kv[0][0], kv[0][1]))),
    )
    dist = distance_distribution(state)
    write_csv(sibling(args.out, "distance"), ["t", "x", "p"], ((dist.time, x, p) for x, p in enumerate(dist.pmf)))
    write_csv(sibling(args.out, "lemma1"), ["t", "violation"], lemma_rows)
    return EXIT_OK


def cmd_localization(args) -> int:
    params = _params(args)
    final_times = {args.steps, args.steps + 1}
    snaps = {}
    for state in iter_line(params, args.steps + 1):
        if state.time in final_times:
            snaps[state.time] = state.distribution(params)
    rows = []
    for t in sorted(snaps):
        parity = Parity.of(t)
        d = snaps[t]
        for x in range(args.grid + 1):
            theory = limitlaws.theorem1_pmf(params, parity, x)
            rows.append((t, parity.value, x, d[x], theory, abs(d[x] - theory)))
    write_csv(args.out, ["t", "parity", "x", "simulated", "theorem", "abs_error"], rows)
    return EXIT_OK


def cmd_weak_limit(args) -> int:
    params = _params(args)
    start = min(250, max(1, args.steps))
    report = stats.convergence_report(params, stats.geometric_ladder(args.steps, start))
    write_csv(args.out, ["t", "ks", "tv", "atom"], (r.as_row() for r in report))
    return EXIT_OK


def cmd_genfun_check(args) -> int:
    params = _params(args)
    rp = genfun.ResolventParams.from_walk(params)
    rows = []
    worst = 0.0
    states = iter_line(params, args.steps)
    next(states)
    for state in states:
        t = state.time
        contour = genfun.contour_probabilities(t, rp)
        sim = np.abs(state.spinors[: t + 1]) ** 2
        diff = float(np.max(np.abs(contour - sim)))
        rows.append((t, diff))
        if t <= 30:
            worst = max(worst, diff)
    write_csv(args.out, ["t", "max_abs_diff"], rows)
    if worst > GENFUN_TOL:
        log.error("contour probabilities deviate by %.3e", worst)
        return EXIT_CHECK
    return EXIT_OK


def cmd_continuous(args) -> int:
    times = args.times or [args.steps]
    pmf_rows = []
    ks_rows = []
    for t in times:
        d = ct_pmf(t)
        pmf_rows.extend((t, x, p) for x, p in enumerate(d.pmf) if p > PROB_FLOOR)
        cmp = stats.rescaled_cdf_distance(d, limitlaws.rho_continuous_cdf)
        ks_rows.append((t, cmp.ks_distance, d.total()))
    write_csv(args.out, ["t", "x", "p"], pmf_rows)
    write_csv(sibling(args.out, "ks"), ["t", "ks", "total"], ks_rows)
    return EXIT_OK


def cmd_density(args) -> int:
    params = _params(args)
    a = limitlaws.a_kappa(params.kappa)
    which = args.which
    if which in ("rho", "f"):
        upper = a
        measure = limitlaws.rho_kappa(params)
        func = measure.density if which == "rho" else (lambda x: limitlaws.f_kappa(x, params.kappa))
        xs = np.linspace(0.0, upper, args.grid, endpoint=False)
    elif which == "konno":
        func = lambda x: limitlaws.konno_density(x, a)  # noqa: E731
        xs = np.linspace(-a, a, args.grid + 1, endpoint=False)[1:]
    else:
        func = limitlaws.rho_continuous
        xs = np.linspace(0.0, 2.0, args.grid, endpoint=False)
    write_csv(args.out, ["x", "value"], ((x, func(x)) for x in xs))
    return EXIT_OK


COMMANDS = {
    "simulate-line": cmd_simulate_line,
    "simulate-tree": cmd_simulate_tree,
    "localization": cmd_localization,
    "weak-limit": cmd_weak_limit,
    "genfun-check": cmd_genfun_check,
    "continuous": cmd_continuous,
    "density": cmd_density,
}


# --- argument handling ------------------------------------------------------


def read_config(path: Path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}", EXIT_IO) from exc
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise CliError(f"bad config line: {raw!r}", EXIT_IO)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _times(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kappa", type=int, default=3)
    common.add_argument("--case", choices=["A", "B"], default="A")
    common.add_argument("--steps", type=int, default=None)
    common.add_argument("--grid", type=int, default=20)
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--config", type=Path, default=None, help="key=value file; flags win")
    common.add_argument("--seed", type=int, default=None, help="reserved; all runs are deterministic")

    parser = argparse.ArgumentParser(prog="cayleywalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    line = sub.add_parser("simulate-line", parents=[common], help="half-line walk pmf trajectory")
    line.add_argument("--every", type=int, default=1, help="keep every n-th time step")
    sub.add_parser("simulate-tree", parents=[common], help="walk on the Cayley tree")
    sub.add_parser("localization", parents=[common], help="long-time pmf near the origin")
    sub.add_parser("weak-limit", parents=[common], help="convergence of X_t/t")
    sub.add_parser("genfun-check", parents=[common], help="contour-integral oracle")
    cont = sub.add_parser("continuous", parents=[common], help="continuous-time Bessel walk")
    cont.add_argument("--times", type=_times, default=None, help="comma-separated times")
    dens = sub.add_parser("density", parents=[common], help="tabulate a limit density")
    dens.add_argument("--which", choices=["rho", "f", "konno", "rho-c"], default="rho")
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        config = read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**config)
        # argparse converts string defaults with the option's type
        args = parser.parse_args(argv)
        if args.case not in ("A", "B"):
            parser.error(f"invalid case {args.case!r} in config")
    if args.steps is None:
        args.steps = DEFAULT_STEPS[args.command]
    if args.out is None:
        ext = "json" if args.format == "json" else "csv"
        args.out = Path(f"{args.command}.{ext}")
    args.out = Path(args.out)
    if args.steps < 0:
        parser.error("--steps must be non-negative")
    if args.kappa < 3:
        parser.error("--kappa must be at least 3")
    if args.grid < 10:
        parser.error("--grid must be at least 10")
    if getattr(args, "every", 1) < 1:
        parser.error("--every must be positive")
    if args.command == "genfun-check" and args.steps < 1:
        parser.error("genfun-check needs --steps >= 1")
    return args


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        args = parse_args(argv)
        code = COMMANDS[args.command](args)
    except CliError as exc:
        log.error("%s", exc)
        return exc.code
    if code == EXIT_OK:
        log.info("wrote %s", args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
