"""Command-line surface: CSV ingestion, selection runs, table reproduction.

Three subcommands: `select` runs criteria on a dataset, `simulate` runs
one Monte Carlo scenario, `tables` reproduces the built-in experiment
grids.  Results go to stdout (table, json, or csv); diagnostics go to
stderr.  Exit codes: 0 success, 2 input problems, 3 numerical problems.
"""

from __future__ import annotations

import argparse
import csv as _csv
import io
import json
import logging
import math
import os
import sys

from .criteria import CmcConfig, SelectionReport, adjr2_select, bic_select, cmc_select, cp_select
from .datasets import PROSTATE_ENV, PROSTATE_RESPONSE, load_prostate
from .errors import (
    ConfigError,
    InputError,
    MissingResponseError,
    NumericalError,
    ParseError,
    TooFewRowsError,
)
from .linalg import Dataset, Mask, standardize
from .simulate import CRITERIA, MonteCarloResult, Scenario, labels_for, run_monte_carlo
from .subsets import CandidateSet

VERSION = "0.1.0"

_CRITERION_ALIASES = {
    "cmc": "cmc",
    "bic": "bic",
    "cp": "cp_aic",
    "cp_aic": "cp_aic",
    "adjr2": "adjr2",
}

_TABLE1_SHAPES = [
    (20, 10, 5), (30, 10, 5), (40, 10, 5), (50, 10, 5),
    (40, 20, 10), (60, 20, 10), (80, 20, 10), (100, 20, 10),
    (60, 30, 15), (90, 30, 15), (120, 30, 15), (150, 30, 15),
]

_TABLE2_ROWS = [(40, 20, 10, 0.9), (60, 20, 10, 0.5), (100, 20, 10, 0.1)]

_TABLE3_ROWS = [
    (0.3, 40), (0.3, 60), (0.3, 100), (0.3, 200),
    (0.5, 40), (0.5, 60), (0.5, 100), (0.5, 200),
    (0.8, 40), (0.8, 60), (0.8, 100), (0.8, 200), (0.8, 400),
]


# ---------------------------------------------------------------- ingestion

def load_csv(path: str, response_name: str) -> Dataset:
    """Read a numeric, comma-separated, header-first file into a Dataset.

    The response column is pulled out by name; remaining columns become
    predictors in file order.  Any non-numeric or missing cell is an
    error naming its 1-based row and column.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = _csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise ParseError(f"{path}: empty file")
            names = [h.strip() for h in header]
            if len(set(names)) != len(names):
                raise ParseError(f"{path}: duplicate column names in header")
            if response_name not in names:
                raise MissingResponseError(
                    f"{path}: response column {response_name!r} not in header {names}"
                )
            rows: list[list[float]] = []
            for r, cells in enumerate(reader, start=2):
                if not cells or all(not c.strip() for c in cells):
                    continue
                if len(cells) != len(names):
                    raise ParseError(
                        f"{path}: row {r} has {len(cells)} cells, expected {len(names)}", row=r
                    )
                parsed = []
                for c, cell in enumerate(cells):
                    cell = cell.strip()
                    if not cell:
                        raise ParseError(
                            f"{path}: row {r}, column {names[c]!r}: missing value",
                            row=r, col=c + 1,
                        )
                    try:
                        parsed.append(float(cell))
                    except ValueError:
                        raise ParseError(
                            f"{path}: row {r}, column {names[c]!r}: not numeric: {cell!r}",
                            row=r, col=c + 1,
                        ) from None
                rows.append(parsed)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    ri = names.index(response_name)
    y = [row[ri] for row in rows]
    X = [[v for i, v in enumerate(row) if i != ri] for row in rows]
    pred_names = tuple(nm for i, nm in enumerate(names) if i != ri)
    if len(rows) <= len(pred_names) + 1:
        raise TooFewRowsError(
            f"{path}: {len(rows)} usable rows for p={len(pred_names)} predictors; need n > p+1"
        )
    return Dataset(X=X, y=y, names=pred_names)


def read_candidate_list(path: str, names: tuple[str, ...]) -> CandidateSet:
    """Parse a text file of comma-separated variable names, one model per line."""
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    masks: list[Mask] = []
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        idx = []
        for token in line.split(","):
            token = token.strip()
            if token not in names:
                raise ParseError(f"{path}: line {ln}: unknown variable {token!r}", row=ln)
            idx.append(names.index(token))
        masks.append(tuple(sorted(set(idx))))
    if not masks:
        raise ParseError(f"{path}: no candidate models found")
    return CandidateSet.explicit(masks)


# ------------------------------------------------------------- serialization

def to_canonical_json(obj) -> str:
    """Stable JSON: insertion-ordered keys, floats at 17 significant digits.

    Non-finite floats become the strings "inf"/"-inf"/"nan" (JSON has no
    literals for them).  Output re-serializes to the identical document.
    """
    out: list[str] = []
    _write_json(obj, out, 0)
    out.append("\n")
    return "".join(out)


def _write_json(o, out: list[str], depth: int) -> None:
    pad = "  " * (depth + 1)
    if o is None:
        out.append("null")
    elif o is True or o is False:
        out.append("true" if o else "false")
    elif isinstance(o, str):
        out.append(json.dumps(o))
    elif isinstance(o, int):
        out.append(str(o))
    elif isinstance(o, float):
        if math.isnan(o):
            out.append('"nan"')
        elif math.isinf(o):
            out.append('"inf"' if o > 0 else '"-inf"')
        else:
            # negative zero would re-parse as int 0 and break round-tripping
            out.append(format(o if o != 0.0 else 0.0, ".17g"))
    elif isinstance(o, dict):
        if not o:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(o.items()):
            out.append(pad)
            out.append(json.dumps(str(k)))
            out.append(": ")
            _write_json(v, out, depth + 1)
            out.append(",\n" if i < len(o) - 1 else "\n")
        out.append("  " * depth + "}")
    elif isinstance(o, (list, tuple)):
        if not o:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(o):
            out.append(pad)
            _write_json(v, out, depth + 1)
            out.append(",\n" if i < len(o) - 1 else "\n")
        out.append("  " * depth + "]")
    else:
        raise TypeError(f"cannot serialize {type(o).__name__}")


def _round2(x: float) -> str:
    return format(x, ".2f")


def _rate_cell(pair) -> str:
    return f"({_round2(pair.fir)}, {_round2(pair.far)})"


# ------------------------------------------------------------------- select

def _parse_criteria(raw: str) -> list[str]:
    out = []
    for tok in raw.split(","):
        tok = tok.strip().lower()
        if not tok:
            continue
        if tok not in _CRITERION_ALIASES:
            raise ConfigError(
                f"unknown criterion {tok!r}; expected cmc, bic, cp, or adjr2"
            )
        label = _CRITERION_ALIASES[tok]
        if label not in out:
            out.append(label)
    if not out:
        raise ConfigError("no criteria requested")
    return out


def _parse_alphas(raw: str) -> list[float]:
    try:
        alphas = [float(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --alphas value: {raw!r}") from exc
    if not alphas:
        raise ConfigError("no alphas given")
    for a in alphas:
        if not (0.0 <= a <= 1.0):
            raise ConfigError(f"alpha must lie in [0, 1], got {a}")
    return alphas


def _parse_candidates(raw: str, names: tuple[str, ...]) -> CandidateSet:
    if raw == "all":
        return CandidateSet.all_subsets()
    if raw == "best-per-size":
        return CandidateSet.best_per_size()
    if raw.startswith("list:"):
        return read_candidate_list(raw[5:], names)
    raise ConfigError(
        f"bad --candidates value {raw!r}; expected all, best-per-size, or list:<path>"
    )


def _report_dict(rep: SelectionReport, names: tuple[str, ...]) -> dict:
    coef = {"intercept": float(rep.fit.beta[0])}
    for i, nm in enumerate(names):
        coef[nm] = float(rep.fit.beta[i + 1])
    per_size = [
        {
            "size": s,
            "variables": [names[i] for i in rep.per_size.entries[s].mask],
            "rss": rep.per_size.entries[s].rss,
        }
        for s in rep.per_size.sizes()
    ]
    return {
        "criterion": rep.criterion,
        "alpha": rep.alpha,
        "chosen": [names[i] for i in rep.chosen],
        "size": len(rep.chosen),
        "coefficients": coef,
        "lambda": rep.lambda_,
        "kappa": rep.kappa,
        "scores": {str(s): rep.scores[s] for s in sorted(rep.scores)},
        "per_size": per_size,
    }


def _select_table(reports: list[SelectionReport], names: tuple[str, ...]) -> str:
    buf = io.StringIO()
    for rep in reports:
        head = rep.criterion if rep.alpha is None else f"{rep.criterion} (alpha={rep.alpha:g})"
        print(f"== {head} ==", file=buf)
        chosen = "+".join(names[i] for i in rep.chosen) or "(intercept only)"
        print(f"chosen ({len(rep.chosen)} of {len(names)}): {chosen}", file=buf)
        if rep.criterion == "cmc":
            kap = f"{rep.kappa:.6g}" if math.isfinite(rep.kappa) else "inf"
            print(f"lambda = {rep.lambda_:.6g}   kappa = {kap}", file=buf)
        print("coefficients:", file=buf)
        width = max(len("intercept"), *(len(nm) for nm in names)) + 2
        print(f"  {'intercept':<{width}}{rep.fit.beta[0]: .4f}", file=buf)
        for i in rep.chosen:
            print(f"  {names[i]:<{width}}{rep.fit.beta[i + 1]: .4f}", file=buf)
        print("per-size best models:", file=buf)
        for s in rep.per_size.sizes():
            entry = rep.per_size.entries[s]
            label = "+".join(names[i] for i in entry.mask) or "-"
            score = rep.scores.get(s)
            tail = f"  score={score:.6g}" if score is not None else ""
            print(f"  size {s:>2}: rss={entry.rss:.6g}{tail}  {label}", file=buf)
        print(file=buf)
    return buf.getvalue()


def _select_csv(reports: list[SelectionReport], names: tuple[str, ...]) -> str:
    buf = io.StringIO()
    w = _csv.writer(buf, lineterminator="\n")
    w.writerow(["criterion", "alpha", "name", "coefficient"])
    for rep in reports:
        alpha = "" if rep.alpha is None else format(rep.alpha, "g")
        w.writerow([rep.criterion, alpha, "intercept", repr(float(rep.fit.beta[0]))])
        for i in rep.chosen:
            w.writerow([rep.criterion, alpha, names[i], repr(float(rep.fit.beta[i + 1]))])
    return buf.getvalue()


def run_select(args: argparse.Namespace) -> str:
    """Run the requested criteria on one dataset and serialize the reports."""
    if args.data:
        if not args.response:
            raise ConfigError("--response is required with --data")
        data = load_csv(args.data, args.response)
        source = args.data
        response = args.response
    else:
        # no --data: fall back to the prostate fixture
        if args.response and args.response != PROSTATE_RESPONSE:
            raise ConfigError(
                f"the prostate fixture's response is {PROSTATE_RESPONSE!r}; "
                "pass --data for other datasets"
            )
        data = load_prostate()
        source = f"prostate fixture (${PROSTATE_ENV})"
        response = PROSTATE_RESPONSE
    if args.standardize:
        data = standardize(data)
    criteria = _parse_criteria(args.criteria)
    alphas = _parse_alphas(args.alphas)
    cands = _parse_candidates(args.candidates, data.names)
    reports: list[SelectionReport] = []
    for crit in criteria:
        if crit == "cmc":
            for a in alphas:
                reports.append(cmc_select(data, CmcConfig(alpha=a, candidates=cands)))
        elif crit == "bic":
            reports.append(bic_select(data, cands))
        elif crit == "cp_aic":
            reports.append(cp_select(data, cands))
        else:
            reports.append(adjr2_select(data, cands))
    if args.format == "json":
        meta = {
            "command": "select",
            "version": VERSION,
            "data": source,
            "response": response,
            "n": data.n,
            "p": data.p,
            "standardize": bool(args.standardize),
            "criteria": criteria,
            "alphas": alphas,
            "candidates": args.candidates,
        }
        return to_canonical_json(
            {"meta": meta, "results": [_report_dict(r, data.names) for r in reports]}
        )
    if args.format == "csv":
        return _select_csv(reports, data.names)
    return _select_table(reports, data.names)


# --------------------------------------------------------- simulate / tables

def _scenario_dict(sc: Scenario) -> dict:
    return {
        "kind": sc.kind,
        "n": sc.n,
        "p": sc.p,
        "p_active": sc.p_active,
        "rho": sc.rho,
        "sigma": sc.sigma,
        "beta0": sc.beta0,
        "active_value": sc.active_value,
        "group_size": sc.group_size,
        "extension": sc.extension,
    }


def _result_dict(res: MonteCarloResult) -> dict:
    return {
        "scenario": _scenario_dict(res.scenario),
        "seed": res.seed,
        "reps": res.reps,
        "rates": {
            lab: {
                "fir": res.rates[lab].fir,
                "far": res.rates[lab].far,
                "zero_fraction": res.zero_fraction[lab],
            }
            for lab in res.labels
        },
        "regenerated": res.regenerated,
    }


def _rates_csv(rows: list[tuple[str, MonteCarloResult]]) -> str:
    buf = io.StringIO()
    w = _csv.writer(buf, lineterminator="\n")
    w.writerow(
        ["scenario", "kind", "n", "p", "p_active", "rho",
         "criterion", "fir", "far", "zero_fraction"]
    )
    for label, res in rows:
        sc = res.scenario
        for lab in res.labels:
            w.writerow(
                [label, sc.kind, sc.n, sc.p, sc.p_active, format(sc.rho, "g"), lab,
                 repr(res.rates[lab].fir), repr(res.rates[lab].far),
                 repr(res.zero_fraction[lab])]
            )
    return buf.getvalue()


def _rates_table(rows: list[tuple[str, MonteCarloResult]]) -> str:
    labels = rows[0][1].labels
    uniform = all(res.labels == labels for _, res in rows)
    name_w = max(len("scenario"), *(len(r[0]) for r in rows)) + 2
    buf = io.StringIO()
    if uniform:
        cell_w = max(len("(0.00, 0.00)"), *(len(lab) for lab in labels)) + 2
        head = f"{'scenario':<{name_w}}" + "".join(f"{lab:<{cell_w}}" for lab in labels)
        print(head, file=buf)
        for label, res in rows:
            line = f"{label:<{name_w}}"
            line += "".join(f"{_rate_cell(res.rates[lab]):<{cell_w}}" for lab in res.labels)
            print(line, file=buf)
    else:
        # one criterion per row (the consistency-schedule layout)
        crit_w = max(len("criterion"), *(len(lab) for res in (r for _, r in rows) for lab in res.labels)) + 2
        print(f"{'scenario':<{name_w}}{'criterion':<{crit_w}}{'(fir, far)':<16}zero_fraction", file=buf)
        for label, res in rows:
            for lab in res.labels:
                cell = _rate_cell(res.rates[lab])
                print(
                    f"{label:<{name_w}}{lab:<{crit_w}}{cell:<16}{_round2(res.zero_fraction[lab])}",
                    file=buf,
                )
    return buf.getvalue()


def _serialize_runs(
    rows: list[tuple[str, MonteCarloResult]], meta: dict, fmt: str
) -> str:
    if fmt == "json":
        return to_canonical_json(
            {"meta": meta, "results": [_result_dict(res) for _, res in rows]}
        )
    if fmt == "csv":
        return _rates_csv(rows)
    return _rates_table(rows)


def run_simulate(args: argparse.Namespace) -> str:
    """Run one scenario and serialize its rate summary."""
    if args.reps < 1:
        raise ConfigError(f"--reps must be >= 1, got {args.reps}")
    scenario = Scenario(
        kind=args.scenario,
        n=args.n,
        p=args.p,
        p_active=args.p_active,
        rho=args.rho,
        sigma=args.sigma,
    )
    criteria = _parse_criteria(args.criteria)
    alphas = _parse_alphas(args.alphas)
    res = run_monte_carlo(
        scenario, criteria, alphas, reps=args.reps, seed=args.seed, threads=args.threads
    )
    label = f"({scenario.n}, {scenario.p}, {scenario.p_active})"
    meta = {
        "command": "simulate",
        "version": VERSION,
        "seed": args.seed,
        "reps": args.reps,
        "threads": args.threads,
        "criteria": criteria,
        "alphas": alphas,
        "labels": list(labels_for(criteria, alphas)),
    }
    return _serialize_runs([(label, res)], meta, args.format)


def run_tables(args: argparse.Namespace) -> str:
    """Reproduce one built-in experiment grid at a configurable rep count."""
    if args.reps < 1:
        raise ConfigError(f"--reps must be >= 1, got {args.reps}")
    rows: list[tuple[str, MonteCarloResult]] = []
    if args.table == 1:
        for i, (n, p, pa) in enumerate(_TABLE1_SHAPES):
            sc = Scenario(kind="weak", n=n, p=p, p_active=pa)
            res = run_monte_carlo(
                sc, CRITERIA, (0.9, 0.5, 0.1),
                reps=args.reps, seed=args.seed + i, threads=args.threads,
                limit=max(p, 25),
            )
            rows.append((f"({n}, {p}, {pa})", res))
    elif args.table == 2:
        for i, (n, p, pa, alpha) in enumerate(_TABLE2_ROWS):
            sc = Scenario(kind="weak", n=n, p=p, p_active=pa)
            res = run_monte_carlo(
                sc, ("cmc",), (alpha,),
                reps=args.reps, seed=args.seed + i, threads=args.threads,
            )
            rows.append((f"({n}, {p}, {pa}) a={alpha:g}", res))
    else:
        for i, (rho, n) in enumerate(_TABLE3_ROWS):
            sc = Scenario(kind="correlated", n=n, p=20, p_active=10, rho=rho)
            res = run_monte_carlo(
                sc, CRITERIA, (0.9, 0.5, 0.1),
                reps=args.reps, seed=args.seed + i, threads=args.threads,
            )
            rows.append((f"({rho:g}, {n})", res))
    meta = {
        "command": "tables",
        "version": VERSION,
        "table": args.table,
        "seed": args.seed,
        "reps": args.reps,
        "threads": args.threads,
    }
    return _serialize_runs(rows, meta, args.format)


# --------------------------------------------------------------------- main

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmcselect",
        description="Best-subset variable selection via the constrained minimum criterion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("select", help="run selection criteria on a dataset")
    ps.add_argument("--data", help=f"CSV file; omit to use the prostate fixture (${PROSTATE_ENV})")
    ps.add_argument("--response", help="response column name (required with --data)")
    ps.add_argument("--criteria", default="cmc,bic,cp,adjr2",
                    help="comma list of cmc,bic,cp,adjr2 (default: all)")
    ps.add_argument("--alphas", default="0.9", help="comma list of cmc alpha levels (default 0.9)")
    ps.add_argument("--standardize", action="store_true",
                    help="standardize predictors (mean 0, sd 1, n-1 denominator)")
    ps.add_argument("--candidates", default="all", metavar="{all|best-per-size|list:<path>}",
                    help="candidate models (default all)")
    ps.add_argument("--format", choices=("table", "json", "csv"), default="table")

    def add_mc_flags(sp, default_alphas):
        sp.add_argument("--criteria", default="cmc,bic,cp,adjr2")
        sp.add_argument("--alphas", default=default_alphas)
        sp.add_argument("--reps", type=int, default=100)
        sp.add_argument("--seed", type=int, default=1)
        sp.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker processes (default: machine parallelism)")
        sp.add_argument("--format", choices=("table", "json", "csv"), default="table")

    pm = sub.add_parser("simulate", help="Monte Carlo rates for one scenario")
    pm.add_argument("--scenario", choices=("weak", "correlated"), default="weak")
    pm.add_argument("--n", type=int, required=True)
    pm.add_argument("--p", type=int, required=True)
    pm.add_argument("--p-active", dest="p_active", type=int, required=True)
    pm.add_argument("--rho", type=float, default=0.0)
    pm.add_argument("--sigma", type=float, default=1.0)
    add_mc_flags(pm, "0.9,0.5,0.1")

    pt = sub.add_parser("tables", help="reproduce a built-in experiment grid")
    pt.add_argument("--table", type=int, choices=(1, 2, 3), required=True)
    add_mc_flags(pt, "0.9,0.5,0.1")
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(name)s: %(message)s"
    )
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "select":
            out = run_select(args)
        elif args.command == "simulate":
            out = run_simulate(args)
        else:
            out = run_tables(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
