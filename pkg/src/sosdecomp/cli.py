"""Command-line front end.

Every subcommand builds a :class:`RunReport` and renders it as text, CSV or
JSON.  Reports embed their parameters, seeds, primes and budgets so a run
can be repeated exactly; the wall time is only filled in with ``--timing``
so that identical invocations produce identical bytes by default.

Budgets come from ``--budget-pairs``, ``--budget-degree`` and
``--budget-seconds``, falling back to the environment variables
``SOSDECOMP_BUDGET_PAIRS``, ``SOSDECOMP_BUDGET_DEGREE`` and
``SOSDECOMP_BUDGET_SECONDS``.  Unset means unlimited.

The exit status is 0 iff the report status is ``ok``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import comb
from pathlib import Path

from . import __version__
from .algebra import QQI, parse_poly
from .formulas import deg_orthogonal, formula_table, lemma_gap
from .prng import random_prime
from .groebner import (
    Budget,
    BudgetExceeded,
    NotZeroDimensional,
    UnstableDegree,
    cone_dimension,
    solution_count,
    stable_sliced_degree,
)
from .sos2 import DegenerateOrbitError, classify, orbit_element
from .sosring import (
    cone_system,
    gram_fiber_system,
    random_instance,
    sos_variety_system,
    sym_dim,
)
from .tangentspace import analyze_tangent

REPORT_SCHEMA_VERSION = 1
DEFAULT_PRIME = 2147483647

# (n, d, k) -> published symbolic degree
TABLE1_CASES = [((2, 1, 2), 4), ((3, 1, 2), 4), ((2, 2, 2), 4), ((3, 1, 3), 16)]
TABLE1_STRETCH = [((4, 1, 4), 80)]


@dataclass
class RunReport:
    subcommand: str
    parameters: dict
    seeds: list = field(default_factory=list)
    primes: list = field(default_factory=list)
    budget: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    status: str = "ok"
    wall_time_ms: int | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_dict(self) -> dict:
        out = {"schema_version": REPORT_SCHEMA_VERSION, "version": __version__}
        out.update(asdict(self))
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=str)

    def to_csv(self) -> str:
        rows = self.rows or [self.results]
        keys: list = []
        for r in rows:
            keys += [k for k in r if k not in keys]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(v) for k, v in r.items()})
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"{self.subcommand}: {self.status}"]
        params = " ".join(f"{k}={v}" for k, v in self.parameters.items())
        if params:
            lines.append(f"  parameters: {params}")
        if self.seeds:
            lines.append(f"  seeds: {self.seeds}")
        if self.primes:
            lines.append(f"  primes: {self.primes}")
        if any(v is not None for v in self.budget.values()):
            lines.append(f"  budget: {self.budget}")
        for k, v in self.results.items():
            lines.append(f"  {k}: {_cell(v)}")
        if self.rows:
            lines.append(_format_table(self.rows))
        for note in self.notes:
            lines.append(f"note: {note}")
        if self.wall_time_ms is not None:
            lines.append(f"  wall time: {self.wall_time_ms} ms")
        return "\n".join(lines)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv().rstrip("\n")
        return self.to_text()


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v, default=str)
    return str(v)


def _format_table(rows: list[dict]) -> str:
    keys: list = []
    for r in rows:
        keys += [k for k in r if k not in keys]
    cells = [[_cell(r.get(k)) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    out = ["  " + "  ".join(k.rjust(w) for k, w in zip(keys, widths))]
    for c in cells:
        out.append("  " + "  ".join(x.rjust(w) for x, w in zip(c, widths)))
    return "\n".join(out)


# ---------------------------------------------------------------------------
# budgets and inputs
# ---------------------------------------------------------------------------


def _env_number(name: str, kind):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        return kind(raw)
    except ValueError:
        raise SystemExit(f"error: environment variable {name}={raw!r} is not a number")


def budget_from_args(args) -> Budget:
    pairs = args.budget_pairs if args.budget_pairs is not None else _env_number("SOSDECOMP_BUDGET_PAIRS", int)
    degree = args.budget_degree if args.budget_degree is not None else _env_number("SOSDECOMP_BUDGET_DEGREE", int)
    seconds = (
        args.budget_seconds if args.budget_seconds is not None else _env_number("SOSDECOMP_BUDGET_SECONDS", float)
    )
    return Budget(pairs, degree, seconds)


def read_poly_text(value: str) -> str:
    """Inline text, or the contents of a file when written as ``@path``."""
    if value.startswith("@"):
        return Path(value[1:]).read_text().strip()
    return value


def default_primes(seed: int) -> tuple[int, int]:
    """``2^31 - 1`` plus a random 30-bit prime derived from the seed."""
    return (DEFAULT_PRIME, random_prime(seed, 30))


def parse_scalar(text: str):
    p = parse_poly(text, nvars=1, field=QQI)
    if not p.is_constant():
        raise ValueError(f"lambda must be a constant, got {text!r}")
    return p.coefficient((0,))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_formulas(kmax: int = 9, Nmax: int = 6) -> RunReport:
    if kmax < 2:
        raise ValueError("kmax must be at least 2")
    table = formula_table(kmax, Nmax)
    rep = RunReport("formulas", {"kmax": kmax, "Nmax": Nmax})
    rep.rows = table.orthogonal
    rep.results = {"sos": table.sos}
    rep.notes = table.notes
    return rep


def cmd_degree(
    n: int,
    d: int,
    k: int,
    seed: int = 1,
    primes: tuple | None = None,
    budget: Budget | None = None,
) -> RunReport:
    """Sliced degree of SOS_k(f) for a random rank-k ``f``, checked across two runs."""
    budget = budget or Budget()
    primes = primes or default_primes(seed)
    seeds = [seed + t for t in range(len(primes))]
    rep = RunReport("degree", {"n": n, "d": d, "k": k}, seeds, list(primes), asdict(budget))
    if k > n:
        rep.notes.append(f"k={k} exceeds n={n}; the degree need not be a multiple of deg O(k)")
    inst = random_instance(n, d, k, seed)
    system = sos_variety_system(inst.f, n, d, k)
    try:
        res = stable_sliced_degree(system, comb(k, 2), seeds, primes, budget)
    except BudgetExceeded as exc:
        rep.status = "budget_exceeded"
        rep.notes.append(str(exc))
        return rep
    except UnstableDegree as exc:
        rep.status = "unstable"
        rep.notes.append(str(exc))
        return rep
    except NotZeroDimensional as exc:
        rep.status = "error"
        rep.notes.append(str(exc))
        return rep
    rep.results = {
        "count": res.count,
        "slice_dim": comb(k, 2),
        "deg_O": deg_orthogonal(k),
        "multiple_of_deg_O": res.count % deg_orthogonal(k) == 0,
        "runs": [{"seed": r["seed"], "prime": r["prime"], "count": r["count"]} for r in res.runs],
    }
    return rep


def cmd_gram_count(
    n: int,
    d: int,
    k: int,
    seed: int = 1,
    primes: tuple | None = None,
    budget: Budget | None = None,
) -> RunReport:
    """Number of rank-``<= k`` Gram matrices of a random rank-``k`` form."""
    budget = budget or Budget()
    primes = primes or default_primes(seed)
    N = sym_dim(n, d)
    rep = RunReport("gram-count", {"n": n, "d": d, "k": k}, [seed], list(primes), asdict(budget))
    if k >= N:
        rep.status = "error"
        rep.notes.append(f"k={k} >= N={N}: there are no rank minors and the fiber is positive-dimensional")
        return rep
    inst = random_instance(n, d, k, seed)
    system = gram_fiber_system(inst.f, n, d, k)
    counts = []
    try:
        for p in primes:
            counts.append(solution_count(system, p, budget))
    except BudgetExceeded as exc:
        rep.status = "budget_exceeded"
        rep.notes.append(str(exc))
        return rep
    except NotZeroDimensional as exc:
        rep.status = "error"
        rep.notes.append(str(exc))
        return rep
    rep.results = {"count": counts[0], "counts": counts}
    if len(set(counts)) != 1:
        rep.status = "unstable"
    elif k <= n:
        rep.results["expected"] = 1
        if counts[0] != 1:
            rep.status = "fail"
    return rep


def _tangent_trial(args: tuple) -> dict:
    n, d, k, seed = args
    r = analyze_tangent(random_instance(n, d, k, seed))
    return {"seed": seed, "nullity": r.nullity, "expected": r.expected, "generic": r.generic, "method": r.method}


def cmd_tangent(n: int, d: int, k: int, trials: int = 20, seed: int = 1, jobs: int = 1) -> RunReport:
    """Jacobian nullity of ``trials`` random decompositions."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    seeds = [seed + t for t in range(trials)]
    rep = RunReport("tangent", {"n": n, "d": d, "k": k, "trials": trials}, seeds)
    tasks = [(n, d, k, s) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_tangent_trial, tasks))
    else:
        rows = [_tangent_trial(t) for t in tasks]
    rep.rows = rows
    rep.results = {
        "expected_nullity": comb(k, 2),
        "all_generic": all(r["generic"] for r in rows),
        "image_dimension": k * sym_dim(n, d) - comb(k, 2),
    }
    if not rep.results["all_generic"]:
        rep.status = "fail"
    return rep


def cmd_intersect(n: int, d: int, k: int, prime: int = DEFAULT_PRIME, budget: Budget | None = None) -> RunReport:
    """Does the cone of rank-``<= k`` symmetric matrices meet ``C`` only at 0?"""
    budget = budget or Budget()
    rep = RunReport("intersect", {"n": n, "d": d, "k": k}, [], [prime], asdict(budget))
    try:
        dim = cone_dimension(cone_system(n, d, k), prime, budget)
    except BudgetExceeded as exc:
        rep.status = "budget_exceeded"
        rep.notes.append(str(exc))
        return rep
    # affine dimension of the cone; the projective intersection has one less
    rep.results = {"empty": dim <= 0, "cone_dimension": max(dim, 0)}
    return rep


def cmd_lemma_grid(nmax: int = 6, dmax: int = 6) -> RunReport:
    """Evaluate ``dim S/I_k < codim C`` over the whole grid."""
    rep = RunReport("lemma-grid", {"nmax": nmax, "dmax": dmax})
    violations = 0
    rejected = 0
    for n in range(1, nmax + 1):
        for d in range(1, dmax + 1):
            for k in range(1, nmax + 1):
                if k > n:
                    rejected += 1
                    continue
                g = lemma_gap(n, d, k)
                rep.rows.append(
                    {"n": n, "d": d, "k": k, "dim_quotient": g.dim_quotient, "codim_C": g.codim_c,
                     "gap": g.gap, "holds": g.holds}
                )
                violations += not g.holds
    unit_gap = all((r["gap"] == 1) == (r["d"] == 1 and r["k"] == r["n"]) for r in rep.rows)
    rep.results = {"cells": len(rep.rows), "violations": violations, "rejected_k_gt_n": rejected,
                   "gap_one_iff_d1_k_eq_n": unit_gap}
    if violations or not unit_gap:
        rep.status = "fail"
    return rep


def cmd_table1(
    seed: int = 1,
    primes: tuple | None = None,
    budget: Budget | None = None,
    stretch: bool = False,
) -> RunReport:
    """Reproduce the symbolic degree column for the small cases."""
    budget = budget or Budget()
    primes = primes or default_primes(seed)
    cases = TABLE1_CASES + (TABLE1_STRETCH if stretch else [])
    rep = RunReport("table1", {"stretch": stretch}, [seed, seed + 1], list(primes), asdict(budget))
    for (n, d, k), expected in cases:
        sub = cmd_degree(n, d, k, seed, primes, budget)
        got = sub.results.get("count")
        status = sub.status if sub.status != "ok" else ("ok" if got == expected else "fail")
        rep.rows.append({"n": n, "d": d, "k": k, "degree": got, "expected": expected, "status": status})
    if any(r["status"] != "ok" for r in rep.rows):
        rep.status = "fail"
    return rep


def cmd_instance(n: int, d: int, k: int, seed: int = 1, bound: int = 10) -> RunReport:
    inst = random_instance(n, d, k, seed, bound)
    rep = RunReport("instance", {"n": n, "d": d, "k": k, "bound": bound}, [seed])
    rep.results = json.loads(inst.to_json())
    return rep


def cmd_sos2(g_text: str, h_text: str, lam_text: str, component: str = "plus") -> RunReport:
    nv = max(parse_poly(g_text, field=QQI).nvars, parse_poly(h_text, field=QQI).nvars)
    g, h = parse_poly(g_text, nv, QQI), parse_poly(h_text, nv, QQI)
    lam = parse_scalar(lam_text)
    rep = RunReport("sos2", {"g": g.to_str(), "h": h.to_str(), "lambda": str(lam), "component": component})
    g2, h2 = orbit_element(g, h, lam, component)
    preserved = g2 * g2 + h2 * h2 == g * g + h * h
    try:
        found = classify(g, h, g2, h2)
    except DegenerateOrbitError as exc:
        found = None
        rep.notes.append(str(exc))
    rep.results = {
        "g_prime": g2.to_str(),
        "h_prime": h2.to_str(),
        "sum_preserved": preserved,
        "classified_component": found[0] if found else None,
        "classified_lambda": str(found[1]) if found else None,
    }
    if not preserved or found is None or found != (component, lam):
        rep.status = "fail"
    return rep


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, budget: bool = False, primes: bool = False):
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.add_argument("--timing", action="store_true", help="record wall time (makes output run-dependent)")
    if primes:
        p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
        p.add_argument("--prime2", type=int, default=None, help="default: random 30-bit prime from the seed")
    if budget:
        p.add_argument("--budget-pairs", type=int, default=None)
        p.add_argument("--budget-degree", type=int, default=None)
        p.add_argument("--budget-seconds", type=float, default=None)


def _add_ndk(p: argparse.ArgumentParser, n=2, d=1, k=2):
    p.add_argument("--n", type=int, default=n)
    p.add_argument("--d", type=int, default=d)
    p.add_argument("--k", type=int, default=k)
    p.add_argument("--seed", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sosdecomp", description="Exact computations on sum-of-squares decompositions.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("formulas", help="closed-form degrees of O(k), SO(k), SOS_1, SOS_2")
    p.add_argument("--kmax", type=int, default=9)
    p.add_argument("--nmax", type=int, default=6, help="largest N for the SOS_1/SOS_2 degrees")
    _add_common(p)

    p = sub.add_parser("degree", help="sliced degree of SOS_k(f) for a random f")
    _add_ndk(p)
    _add_common(p, budget=True, primes=True)

    p = sub.add_parser("gram-count", help="number of rank-<=k Gram matrices of a random f")
    _add_ndk(p, 2, 2, 2)
    _add_common(p, budget=True, primes=True)

    p = sub.add_parser("tangent", help="Jacobian nullity of random decompositions")
    _add_ndk(p, 3, 2, 2)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the trials")
    _add_common(p)

    p = sub.add_parser("intersect", help="rank-<=k symmetric cone intersected with C")
    _add_ndk(p, 2, 2, 1)
    _add_common(p, budget=True, primes=True)

    p = sub.add_parser("lemma-grid", help="dim S/I_k < codim C over a grid")
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--dmax", type=int, default=6)
    _add_common(p)

    p = sub.add_parser("table1", help="reproduce the small symbolic degrees")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--stretch", action="store_true", help="also run (n,d,k)=(4,1,4); no time guarantee")
    _add_common(p, budget=True, primes=True)

    p = sub.add_parser("instance", help="print a random decomposition as JSON")
    _add_ndk(p)
    p.add_argument("--bound", type=int, default=10)
    _add_common(p)

    p = sub.add_parser("sos2", help="move (g, h) along the two-square orbit and classify the result")
    p.add_argument("--g", required=True, help="polynomial text or @file")
    p.add_argument("--h", required=True, help="polynomial text or @file")
    p.add_argument("--lam", default="1", help="nonzero Gaussian rational, e.g. 2-3*i")
    p.add_argument("--component", choices=["plus", "minus"], default="plus")
    _add_common(p)
    return ap


def _primes(args) -> tuple[int, int]:
    p2 = args.prime2 if args.prime2 is not None else random_prime(args.seed, 30)
    return (args.prime, p2)


def run(args) -> RunReport:
    c = args.command
    if c == "formulas":
        return cmd_formulas(args.kmax, args.nmax)
    if c == "degree":
        return cmd_degree(args.n, args.d, args.k, args.seed, _primes(args), budget_from_args(args))
    if c == "gram-count":
        return cmd_gram_count(args.n, args.d, args.k, args.seed, _primes(args), budget_from_args(args))
    if c == "tangent":
        return cmd_tangent(args.n, args.d, args.k, args.trials, args.seed, args.jobs)
    if c == "intersect":
        return cmd_intersect(args.n, args.d, args.k, args.prime, budget_from_args(args))
    if c == "lemma-grid":
        return cmd_lemma_grid(args.nmax, args.dmax)
    if c == "table1":
        return cmd_table1(args.seed, _primes(args), budget_from_args(args), args.stretch)
    if c == "instance":
        return cmd_instance(args.n, args.d, args.k, args.seed, args.bound)
    if c == "sos2":
        return cmd_sos2(read_poly_text(args.g), read_poly_text(args.h), args.lam, args.component)
    raise ValueError(f"unknown command {c}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        report = run(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.timing:
        report.wall_time_ms = round((time.perf_counter() - t0) * 1000)
    print(report.render(args.format))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
