"""Command-line front end: builds chains and covers and writes JSON reports."""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .codes import DEFAULT_CODEWORD_BUDGET, goodness_ledger
from .cosets import (
    DEFAULT_MAX_COSETS,
    CosetBudgetExceeded,
    SubnormalChain,
    canonical_form,
    descend,
    trivial_table,
)
from .expansion import CheegerBudgetExceeded, cheeger, tau_diagnostics
from .growth import (
    DEFAULT_MAX_NODES,
    enumerate_subnormal,
    gradient,
    greedy_max_gradient_chain,
    growth_bound_diagnostics,
    walk_subnormal,
)
from .lamplighter import dp_lower_bound, quotient_cycle_graph
from .largeness import CutBudgetExceeded, sweep_cover, verify_certificate
from .reports import envelope, rational, read_report, write_report
from .words import Presentation, PresentationError, check_prime, load_presentation

EXIT_OK = 0
EXIT_BUDGET = 2
EXIT_INPUT = 3
EXIT_VERIFY = 4

STRATEGIES = ("all-kernels", "max-gradient-path", "explicit:<i,j,...>")
DEFAULT_SUBSET_BUDGET = 1 << 24


class InputError(ValueError):
    pass


class BudgetError(RuntimeError):
    def __init__(self, module: str, message: str):
        super().__init__(f"[{module}] {message}")


@dataclass(frozen=True)
class RunConfig:
    presentation: Path | None
    p: int
    strategy: str
    levels: int
    budget_cosets: int
    budget_subsets: int
    budget_codewords: int
    budget_nodes: int
    threads: int
    out: str | None

    def __post_init__(self):
        for name in ("budget_cosets", "budget_subsets", "budget_codewords", "budget_nodes", "threads"):
            if getattr(self, name) <= 0:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if self.levels < 0:
            raise InputError("--levels must be non-negative")
        try:
            check_prime(self.p)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        self.explicit_choices()

    @property
    def subset_vertices(self) -> int:
        """Largest ``n`` with ``2ⁿ`` within the subset budget."""
        return max(self.budget_subsets.bit_length() - 1, 1)

    def explicit_choices(self) -> tuple | None:
        if self.strategy in ("all-kernels", "max-gradient-path"):
            return None
        head, sep, tail = self.strategy.partition(":")
        if head != "explicit" or not sep:
            raise InputError(f"unknown strategy {self.strategy!r}; expected one of {', '.join(STRATEGIES)}")
        try:
            return tuple(int(x) for x in tail.split(",") if x.strip())
        except ValueError:
            raise InputError(f"explicit strategy needs comma-separated integers, got {tail!r}") from None

    def load(self) -> Presentation:
        if self.presentation is None:
            raise InputError("--presentation is required")
        try:
            return load_presentation(self.presentation)
        except OSError as exc:
            raise InputError(f"cannot read {self.presentation}: {exc.strerror}") from None
        except PresentationError as exc:
            raise InputError(f"{self.presentation}: {exc}") from None


def _build_chain(cfg: RunConfig, pres: Presentation) -> SubnormalChain:
    choices = cfg.explicit_choices()
    if choices is not None:
        tabs = [trivial_table(pres)]
        for level, c in enumerate(choices, start=1):
            if cfg.p ** level > cfg.budget_cosets:
                raise BudgetError("cosets", f"index {cfg.p ** level} exceeds the coset budget")
            tabs.append(descend(tabs[-1], cfg.p, c))
        return SubnormalChain(tuple(tabs), cfg.p)
    if cfg.strategy == "all-kernels":
        ledger = enumerate_subnormal(pres, cfg.p, cfg.levels, cfg.budget_cosets, cfg.budget_nodes)
        return ledger.max_gradient_chain()
    return greedy_max_gradient_chain(pres, cfg.p, cfg.levels, cfg.budget_cosets)


def _chain_rows(chain: SubnormalChain) -> list[dict]:
    g = gradient(chain)
    return [
        {"index": n, "d_p": d, "gradient": rational(q), "cover": canonical_form(t, chain.p).decode()}
        for n, d, q, t in zip(g.indices, g.d_p, g.reduced, chain.tables)
    ]


def cmd_chain(cfg: RunConfig) -> tuple[dict, int]:
    pres = cfg.load()
    body: dict = {"p": cfg.p, "strategy": cfg.strategy}
    code = EXIT_OK
    if cfg.strategy == "all-kernels":
        ledger = enumerate_subnormal(pres, cfg.p, cfg.levels, cfg.budget_cosets, cfg.budget_nodes)
        by_level: dict = {}
        for node in ledger.nodes.values():
            by_level.setdefault(node.level, []).append(Fraction(node.d_p - 1, cfg.p ** node.level))
        body["levels"] = [
            {"level": s.level, "index": cfg.p ** s.level, "count": s.count, "r": s.r,
             "gradient_min": rational(min(by_level[s.level])),
             "gradient_max": rational(max(by_level[s.level]))}
            for s in ledger.levels
        ]
        body["dag"] = ledger.dag()
        if ledger.truncated:
            body["truncation_reason"] = ledger.truncation_reason
            code = EXIT_BUDGET
        chain = ledger.max_gradient_chain()
    else:
        chain = _build_chain(cfg, pres)
    body["chain"] = _chain_rows(chain)
    body["gradient_non_increasing"] = gradient(chain).non_increasing
    body["validation_problems"] = chain.validate()
    return envelope("chain", body), code


def _sweep_job(args) -> dict:
    table, p, max_vertices = args
    res = sweep_cover(table, p, max_vertices=max_vertices)
    dims = Counter(tuple(f.kernel_dims) for f in res.failures)
    out = {
        "index": table.index,
        "cover": canonical_form(table, p).decode(),
        "cuts_tried": res.cuts_tried,
        "failures": len(res.failures),
        "kernel_dims_histogram": [[list(k), v] for k, v in sorted(dims.items())],
    }
    if res.certificate is not None:
        out["certificate"] = res.certificate.to_dict()
    return out


def _certify_covers(cfg: RunConfig, pres: Presentation):
    if cfg.strategy == "all-kernels":
        for _, table in walk_subnormal(pres, cfg.p, cfg.levels, cfg.budget_cosets):
            yield table
    else:
        yield from _build_chain(cfg, pres).tables


def _batched(iterable, size: int):
    batch = []
    for item in iterable:
        batch.append(item)
        if len(batch) == size:
            yield batch
            batch = []
    if batch:
        yield batch


def cmd_certify(cfg: RunConfig) -> tuple[dict, int]:
    """Sweep covers in a fixed order and stop at the first certificate.

    Covers are processed in batches; with ``--threads > 1`` a batch runs on a
    process pool, and results are read back in submission order so the report
    does not depend on the worker count.
    """
    pres = cfg.load()
    rows: list[dict] = []
    cert = None
    jobs = ((t, cfg.p, cfg.subset_vertices) for t in _certify_covers(cfg, pres))
    pool = ProcessPoolExecutor(cfg.threads) if cfg.threads > 1 else None
    try:
        for batch in _batched(jobs, max(cfg.threads, 1) * 2):
            results = pool.map(_sweep_job, batch) if pool else map(_sweep_job, batch)
            for r in results:
                rows.append({k: v for k, v in r.items() if k != "certificate"})
                if "certificate" in r:
                    cert = r["certificate"]
                    break
            if cert is not None:
                break
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    body = {"p": cfg.p, "strategy": cfg.strategy, "covers": rows,
            "result": "certificate" if cert else "failure"}
    if cert is None:
        return envelope("certify", body), EXIT_OK
    body["certificate"] = cert
    problems = verify_certificate(cert)
    body["self_check"] = problems
    return envelope("certify", body), (EXIT_VERIFY if problems else EXIT_OK)


def cmd_verify(path: Path) -> tuple[dict, int]:
    try:
        data = read_report(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None
    if data.get("kind") == "certify":
        if "certificate" not in data:
            raise InputError(f"{path}: report holds no certificate")
        data = data["certificate"]
    if data.get("kind") != "certificate":
        raise InputError(f"{path}: not a certificate")
    try:
        problems = verify_certificate(data)
    except (KeyError, TypeError, ValueError) as exc:
        problems = [f"malformed certificate: {exc}"]
    body = {"certificate": str(path), "valid": not problems, "problems": problems}
    return envelope("verify", body), (EXIT_VERIFY if problems else EXIT_OK)


def cmd_codes(cfg: RunConfig) -> tuple[dict, int]:
    pres = cfg.load()
    chain = _build_chain(cfg, pres)
    ledger = goodness_ledger(chain.tables[1:], cfg.p, cfg.budget_codewords)
    return envelope("codes", ledger.to_dict()), EXIT_OK


def cmd_tau(cfg: RunConfig) -> tuple[dict, int]:
    pres = cfg.load()
    chain = _build_chain(cfg, pres)
    diag = tau_diagnostics(chain, cfg.subset_vertices)
    return envelope("tau", diag.to_dict()), EXIT_OK


def _parse_fraction(text: str | None) -> Fraction | None:
    if text is None:
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad rational {text!r}") from None


def cmd_growth(cfg: RunConfig, lam: str | None = None) -> tuple[dict, int]:
    pres = cfg.load()
    ledger = enumerate_subnormal(pres, cfg.p, cfg.levels, cfg.budget_cosets, cfg.budget_nodes)
    body = ledger.to_dict(include_dag=True)
    if len(ledger.levels) >= 2:
        body["bounds"] = growth_bound_diagnostics(ledger, _parse_fraction(lam))
    return envelope("growth", body), (EXIT_BUDGET if ledger.truncated else EXIT_OK)


def cmd_lamplighter(p: int, levels: int, max_vertices: int = 24) -> tuple[dict, int]:
    rows = []
    for i in range(levels + 1):
        w = dp_lower_bound(i, p)
        h = cheeger(quotient_cycle_graph(p, i), max_vertices)
        rows.append({"level": i, "index": p ** i, "dp_lower_bound": w.value,
                     "evaluation_rank": w.rank, "verified": w.verified, "cheeger": h.to_dict()})
    return envelope("lamplighter", {"p": p, "levels": rows}), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--presentation", type=Path, help="presentation file")
    common.add_argument("--prime", type=int, default=2)
    common.add_argument("--levels", type=int, default=2)
    common.add_argument("--strategy", default="max-gradient-path",
                        help="all-kernels | max-gradient-path | explicit:i,j,...")
    common.add_argument("--budget-cosets", type=int, default=DEFAULT_MAX_COSETS)
    common.add_argument("--budget-subsets", type=int, default=DEFAULT_SUBSET_BUDGET,
                        help="cap on 2^n subset enumerations")
    common.add_argument("--budget-codewords", type=int, default=DEFAULT_CODEWORD_BUDGET)
    common.add_argument("--budget-nodes", type=int, default=DEFAULT_MAX_NODES,
                        help="cap on distinct subgroups kept by the growth search")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", default=None, help="output path (default: stdout)")

    parser = argparse.ArgumentParser(prog="trichotomy", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("chain", parents=[common], help="build and validate a subnormal chain")
    sub.add_parser("certify", parents=[common], help="search covers for a largeness certificate")
    v = sub.add_parser("verify", help="re-check a stored certificate")
    v.add_argument("certificate", type=Path)
    v.add_argument("--out", default=None)
    sub.add_parser("codes", parents=[common], help="code ledger along a chain")
    sub.add_parser("tau", parents=[common], help="Cheeger and gradient diagnostics along a chain")
    g = sub.add_parser("growth", parents=[common], help="count subnormal subgroups per level")
    g.add_argument("--lambda", dest="lam", default=None, help="gradient lower bound for the count bound")
    lp = sub.add_parser("lamplighter", parents=[common], help="lamplighter homology witnesses")
    lp.set_defaults(levels=3)
    return parser


def _config(ns) -> RunConfig:
    return RunConfig(ns.presentation, ns.prime, ns.strategy, ns.levels, ns.budget_cosets,
                     ns.budget_subsets, ns.budget_codewords, ns.budget_nodes, ns.threads, ns.out)


def run(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        if ns.command == "verify":
            report, code = cmd_verify(ns.certificate)
        else:
            cfg = _config(ns)
            if ns.command == "chain":
                report, code = cmd_chain(cfg)
            elif ns.command == "certify":
                report, code = cmd_certify(cfg)
            elif ns.command == "codes":
                report, code = cmd_codes(cfg)
            elif ns.command == "tau":
                report, code = cmd_tau(cfg)
            elif ns.command == "growth":
                report, code = cmd_growth(cfg, ns.lam)
            else:
                report, code = cmd_lamplighter(cfg.p, cfg.levels, cfg.subset_vertices)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CosetBudgetExceeded as exc:
        print(f"budget exceeded: [cosets] {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CheegerBudgetExceeded as exc:
        print(f"budget exceeded: [expansion] {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CutBudgetExceeded as exc:
        print(f"budget exceeded: [largeness] {exc}", file=sys.stderr)
        return EXIT_BUDGET
    write_report(report, ns.out)
    if code == EXIT_VERIFY:
        print("verification failed", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
