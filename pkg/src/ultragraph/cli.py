"""Command-line entry point: ``ultragraph analyze|transfer|example21``.

Reports are JSON with sorted keys, so identical configs give byte-identical
output. Exit codes: 0 success, 1 a class precondition is unmet, 2 bad
config, 3 an Undecided result under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

from . import graph as G
from .errors import PreconditionFailed, UltragraphError
from .families import (
    DEFAULT_WINDOW,
    FamilyError,
    GraphFamily,
    InfinitePath,
    NotHyperfinite,
    family_from_json,
    quantity,
)
from .hypernat import Affine, constant, to_seqnat
from .index_filter import Decision, Ultrafilter
from .nonstandard import NonstandardGraph, Undecidable
from .transfer import TheoremId, check_transfer

EXIT_OK, EXIT_PRECONDITION, EXIT_CONFIG, EXIT_UNDECIDED = 0, 1, 2, 3
MIN_WINDOW = 8


class ConfigError(ValueError):
    pass


def parse_point(data: Any) -> Ultrafilter:
    """A point spec is {"factorial_residues": [...]} or the shorthand {"integer": a}."""
    if not isinstance(data, dict):
        raise ConfigError("ultrafilter point must be a JSON object")
    try:
        if "integer" in data:
            return Ultrafilter.from_integer(int(data["integer"]))
        return Ultrafilter.from_json(data)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad ultrafilter point: {exc}") from exc


def parse_theorems(names: list[str]) -> list[TheoremId]:
    try:
        return [TheoremId.parse(n) for n in names]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def default_window() -> int:
    env = os.environ.get("ULTRAGRAPH_WINDOW")
    if env is None:
        return DEFAULT_WINDOW
    try:
        return int(env)
    except ValueError:
        raise ConfigError(f"ULTRAGRAPH_WINDOW must be an integer, got {env!r}") from None


@dataclass
class RunConfig:
    family: GraphFamily
    ultrafilter: Ultrafilter = field(default_factory=Ultrafilter.zero)
    window: int = DEFAULT_WINDOW
    theorems: list[TheoremId] = field(default_factory=lambda: list(TheoremId))
    seed: int = 0
    k: Optional[int] = None
    strict: bool = False

    @classmethod
    def from_json(cls, data: Any, window: Optional[int] = None) -> "RunConfig":
        """Window precedence: explicit argument, then config, then family spec, then the environment default."""
        if not isinstance(data, dict) or not isinstance(data.get("family"), dict):
            raise ConfigError("config must be an object with a 'family' object")
        fam_spec = dict(data["family"])
        w = window if window is not None else data.get("window", fam_spec.get("window"))
        w = default_window() if w is None else w
        if not isinstance(w, int) or isinstance(w, bool) or w < MIN_WINDOW:
            raise ConfigError(f"window must be an integer >= {MIN_WINDOW}, got {w!r}")
        seed = data.get("seed", 0)
        if not isinstance(seed, int) or seed < 0:
            raise ConfigError("seed must be a natural number")
        if fam_spec.get("kind") == "random_connected":
            fam_spec.setdefault("seed", seed)
        k = data.get("k")
        if k is not None and (not isinstance(k, int) or k < 0):
            raise ConfigError("k must be a natural number")
        try:
            family = family_from_json(fam_spec, window=w)
        except (FamilyError, UltragraphError, ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc
        point = parse_point(data["ultrafilter"]) if "ultrafilter" in data else Ultrafilter.zero()
        names = data.get("theorems", [t.value for t in TheoremId])
        if not isinstance(names, list):
            raise ConfigError("theorems must be a list")
        return cls(family, point, w, parse_theorems(names), seed, k)


# -- analyze ------------------------------------------------------------------------------------


def _row(n: int, g: G.Graph) -> dict:
    row = {"n": n, "p": g.order, "q": g.size, "degrees": sorted(G.degrees(g).values(), reverse=True)}
    connected = G.is_connected(g)
    row["connected"] = connected
    if connected:
        m = G.metrics(g)
        row.update(r=quantity("cyclomatic", g), radius=m.radius, diameter=m.diameter)
    else:
        row.update(r=None, radius=None, diameter=None)
    return row


class _Tracker:
    """Collects Undecided occurrences while summaries are computed."""

    def __init__(self):
        self.undecided = False

    def attempt(self, fn: Callable[[], Any]) -> Any:
        try:
            return fn()
        except Undecidable as exc:
            self.undecided = True
            return {"error": "undecided", "message": str(exc)}
        except (PreconditionFailed, NotHyperfinite) as exc:
            return {"error": "precondition_failed", "message": str(exc)}
        except UltragraphError as exc:
            return {"error": type(exc).__name__, "message": str(exc)}


def _class_decision(ng: NonstandardGraph, name: str) -> str:
    try:
        return ng.quantity_truth(name).decide(ng.filter).value
    except NotHyperfinite:
        return Decision.OUT.value


def run_analyze(cfg: RunConfig) -> tuple[dict, int]:
    ng = NonstandardGraph(cfg.family, cfg.ultrafilter)
    track = _Tracker()
    classes = {name: _class_decision(ng, name) for name in ("connected", "in_cf", "ham_class")}
    rows = [] if not cfg.family.hyperfinite else [_row(n, cfg.family.graph_at(n)) for n in range(cfg.window)]

    def counts():
        c = ng.counts()
        return {"p": c.p.to_json(), "q": c.q.to_json(), "r": c.r.to_json(), "identity_holds": c.identity_holds, "exact": c.exact}

    def metrics():
        m = ng.metrics()
        return {"radius": m.radius.to_json(), "diameter": m.diameter.to_json(), "bound_ok": m.bound_ok, "exact": m.exact}

    def criteria():
        c = ng.hamiltonian_criteria()
        return {"dirac": c.dirac, "ore": c.ore, "posa": c.posa}

    summary = {
        "counts": track.attempt(counts),
        "metrics": track.attempt(metrics),
        "max_degree": track.attempt(lambda: ng.max_degree().to_json()),
        "eulerian": track.attempt(ng.is_eulerian),
        "hamiltonian_criteria": track.attempt(criteria),
    }
    if Decision.UNDECIDED.value in classes.values():
        track.undecided = True
    met = classes["connected"] == classes["in_cf"] == Decision.IN.value
    report = {
        "command": "analyze",
        "family": cfg.family.to_json(),
        "ultrafilter": cfg.ultrafilter.to_json(),
        "window": cfg.window,
        "classes": classes,
        "preconditions_met": met,
        "rows": rows,
        "summary": summary,
    }
    code = EXIT_OK if met else EXIT_PRECONDITION
    return report, (EXIT_UNDECIDED if track.undecided and cfg.strict else code)


# -- transfer -----------------------------------------------------------------------------------


def run_transfer(cfg: RunConfig) -> tuple[dict, int]:
    ng = NonstandardGraph(cfg.family, cfg.ultrafilter)
    reports, unmet, undecided = [], False, False
    for t in cfg.theorems:
        try:
            r = check_transfer(t, ng, cfg.k)
        except PreconditionFailed as exc:
            unmet = True
            reports.append({"theorem": t.value, "decision": None, "error": "precondition_failed", "message": str(exc)})
            continue
        undecided = undecided or r.decision is Decision.UNDECIDED
        reports.append(r.to_json())
    report = {
        "command": "transfer",
        "family": cfg.family.to_json(),
        "ultrafilter": cfg.ultrafilter.to_json(),
        "window": cfg.window,
        "reports": reports,
    }
    if undecided and cfg.strict:
        return report, EXIT_UNDECIDED
    return report, EXIT_PRECONDITION if unmet else EXIT_OK


# -- infinite-path example -----------------------------------------------------------------------------


def run_example21() -> tuple[dict, int]:
    """Vertices [x_{k_n}], [x_{k_n+1}] and [x_{k_n+m_n}] of the ultrapower of a one-way infinite path."""
    ng = NonstandardGraph(InfinitePath(), Ultrafilter.zero())
    cases = []
    for k_label, k in (("n", Affine(1, 0)), ("2n", Affine(2, 0))):
        for m_label, m in (("2", constant(2)), ("n+2", Affine(1, 2))):
            x = ng.vertex(k)
            y = ng.vertex(to_seqnat(k.quasi() + 1))
            z = ng.vertex(to_seqnat(k.quasi() + m.quasi()))
            cases.append(
                {
                    "k_n": k_label,
                    "m_n": m_label,
                    "edge_k_k1": ng.adjacent(x, y),
                    "edge_k_km": ng.adjacent(x, z),
                    "pairwise_distinct": not (ng.vertex_eq(x, y) or ng.vertex_eq(x, z) or ng.vertex_eq(y, z)),
                    "path_length_k_km": ng.path(x, z).length.to_json(),
                }
            )
    origin = ng.vertex(0)
    same = ng.vertex_eq(origin, ng.vertex(0))
    report = {
        "command": "example21",
        "cases": cases,
        "self_check": {"equal": same, "edge_attempted": not same},
    }
    return report, EXIT_OK


# -- entry point -------------------------------------------------------------------------------

def _load_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _build_config(args: argparse.Namespace) -> RunConfig:
    if not args.config:
        raise ConfigError("--config is required for this command")
    data = _load_json(args.config)
    if args.point:
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        data = {**data, "ultrafilter": _load_json(args.point)}
    if args.theorem is not None:
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        data = {**data, "theorems": [s.strip() for s in args.theorem.split(",") if s.strip()]}
    cfg = RunConfig.from_json(data, window=args.window)
    cfg.strict = args.strict
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ultragraph", description="Nonstandard graphs as ultrapowers of graph families.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("analyze", "per-index invariant table and hypernatural summaries"),
        ("transfer", "transferred theorem checks"),
        ("example21", "the infinite-path ultrapower example"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="RunConfig JSON file")
        p.add_argument("--window", type=int, help="window size (>= 8)")
        p.add_argument("--theorem", help="comma-separated theorem ids")
        p.add_argument("--point", help="ultrafilter point JSON file")
        p.add_argument("--strict", action="store_true", help="exit 3 on any Undecided result")
        p.add_argument("--out", help="write the report here instead of stdout")
    return parser


def dump(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "example21":
            report, code = run_example21()
        else:
            cfg = _build_config(args)
            report, code = (run_analyze if args.command == "analyze" else run_transfer)(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = dump(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
