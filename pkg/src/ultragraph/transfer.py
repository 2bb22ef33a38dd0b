"""Registry of the transferred theorems: a per-graph check and an almost-everywhere report for each.

Each theorem is checked two ways. The standard check runs on one finite
graph and returns a verdict with a constructive witness. The transferred
check computes the truth set {n : the statement holds in G_n} from the
family's exact sequences, decides it with the ultrafilter, and embeds the
standard checks for every index of the window as witnesses. The two must
agree on the window; ``TransferReport.consistent`` records that.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from . import graph as G
from .errors import FormOverflow, PreconditionFailed
from .families import NotHyperfinite, NotSymbolic
from .graph import Graph
from .index_filter import Decision, IndexSet
from .nonstandard import NonstandardGraph, Truth


class TheoremId(Enum):
    CYCLOMATIC_IDENTITY = "CyclomaticIdentity"
    EDGE_BOUNDS = "EdgeBounds"
    RADIUS_DIAMETER = "RadiusDiameter"
    EULER_EVEN_DEGREE = "EulerEvenDegree"
    DIRAC_CRITERION = "DiracCriterion"
    ORE_CRITERION = "OreCriterion"
    POSA_CRITERION = "PosaCriterion"
    COLORING_MAX_DEG = "ColoringMaxDeg"

    @classmethod
    def parse(cls, name: str) -> "TheoremId":
        try:
            return cls(name)
        except ValueError:
            raise ValueError(f"unknown theorem {name!r}; expected one of {[t.value for t in cls]}") from None


# Statements of the form "class => identity": indices outside the class hold vacuously.
IMPLICATIONS = frozenset(
    {
        TheoremId.CYCLOMATIC_IDENTITY,
        TheoremId.EDGE_BOUNDS,
        TheoremId.RADIUS_DIAMETER,
        TheoremId.COLORING_MAX_DEG,
    }
)

_CRITERION_FIELD = {
    TheoremId.DIRAC_CRITERION: "dirac",
    TheoremId.ORE_CRITERION: "ore",
    TheoremId.POSA_CRITERION: "posa",
}


@dataclass(frozen=True)
class StandardResult:
    holds: bool
    witness: Optional[dict] = None


def _class_violation(t: TheoremId, g: Graph, k: Optional[int]) -> Optional[str]:
    if t is TheoremId.COLORING_MAX_DEG:
        if k is not None and G.max_degree(g) > k:
            return f"max degree {G.max_degree(g)} exceeds k={k}"
        return None
    if not G.is_connected(g):
        return "graph is not connected"
    if t in _CRITERION_FIELD:
        return None if g.order >= 3 else "fewer than 3 vertices"
    if g.order < 2:
        return "fewer than 2 vertices"
    if g.size < 1:
        return "no edges"
    return None


def check_standard(t: TheoremId, g: Graph, k: Optional[int] = None) -> StandardResult:
    """Check one theorem on one finite graph, raising PreconditionFailed outside its class."""
    problem = _class_violation(t, g, k)
    if problem:
        raise PreconditionFailed(f"{t.value}: {problem}")
    p, q = g.order, g.size
    if t is TheoremId.CYCLOMATIC_IDENTITY:
        tree = G.spanning_tree(g)
        r = q - tree.size
        spans = G.is_tree(tree) and tree.vertices == g.vertices and tree.edges <= g.edges
        return StandardResult(
            spans and r == q - p + 1,
            {"p": p, "q": q, "r": r, "spanning_tree": [list(e) for e in sorted(tree.edges)]},
        )
    if t is TheoremId.EDGE_BOUNDS:
        return StandardResult(G.edge_bounds_check(g), {"p": p, "q": q})
    if t is TheoremId.RADIUS_DIAMETER:
        m = G.metrics(g)
        return StandardResult(m.radius <= m.diameter <= 2 * m.radius, {"radius": m.radius, "diameter": m.diameter})
    if t is TheoremId.EULER_EVEN_DEGREE:
        even = G.is_eulerian(g)
        try:
            circuit = G.eulerian_circuit(g)
        except G.NotEulerian:
            circuit = None
        covers = circuit is not None and circuit.is_valid_in(g) and len(circuit.edges) == q and set(circuit.edges) == set(g.edges)
        return StandardResult(
            even,
            {
                "all_even": even,
                "circuit": list(circuit.vertices) if circuit else None,
                "biconditional": even == covers,
            },
        )
    if t in _CRITERION_FIELD:
        crit = getattr(G.hamiltonian_criteria(g), _CRITERION_FIELD[t])
        witness: dict[str, Any] = {"criterion": crit}
        if p <= G.HAMILTONIAN_BOUND:
            loop = G.hamiltonian_bruteforce(g)
            witness["hamiltonian_loop"] = list(loop.vertices) if loop else None
            witness["implication_ok"] = (not crit) or loop is not None
        return StandardResult(crit, witness)
    if t is TheoremId.COLORING_MAX_DEG:
        bound = G.max_degree(g) if k is None else k
        col = G.greedy_coloring(g)
        return StandardResult(
            col.is_proper(g) and col.colors_used <= bound + 1,
            {
                "k": bound,
                "max_degree": G.max_degree(g),
                "colors_used": col.colors_used,
                "coloring": {str(v): c for v, c in sorted(col.assignment.items())},
            },
        )
    raise ValueError(t)


# -- transferred checks ---------------------------------------------------------------------


@dataclass
class TransferReport:
    theorem: TheoremId
    decision: Decision
    truth: Truth
    class_truth: Truth
    window: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def truth_set(self) -> Optional[IndexSet]:
        return self.truth.index_set

    @property
    def exact(self) -> bool:
        return self.truth.exact

    @property
    def consistent(self) -> bool:
        """Window witnesses agree pointwise with the truth set."""
        s = self.truth.index_set
        if s is None:
            return True
        return all(entry["holds"] == (entry["n"] in s) for entry in self.window)

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem.value,
            "decision": self.decision.value,
            "exact": self.exact,
            "truth_set": self.truth.to_json(),
            "class_set": self.class_truth.to_json(),
            "consistent": self.consistent,
            "notes": list(self.notes),
            **self.extra,
            "window": self.window,
        }


def _symbolic(t: TheoremId, ng: NonstandardGraph, k: Optional[int]) -> tuple[IndexSet, IndexSet]:
    """(class set, truth set) from exact sequences; raises NotSymbolic for opaque families."""
    seq = ng.family.sequence
    if t is TheoremId.COLORING_MAX_DEG:
        cls = seq("max_degree").compare_set("<=", k)
        return cls, ~cls | seq("colors").compare_set("<=", k + 1)
    if t in _CRITERION_FIELD:
        cls = seq("ham_class").sign_set(">")
        return cls, seq(_CRITERION_FIELD[t]).sign_set(">")
    cls = seq("in_cf").sign_set(">")
    if t is TheoremId.EULER_EVEN_DEGREE:
        return cls, seq("eulerian").sign_set(">")
    p, q = seq("vertices"), seq("edges")
    if t is TheoremId.CYCLOMATIC_IDENTITY:
        r = seq("cyclomatic")
        holds = (r + p).compare_set("=", q + 1)
    elif t is TheoremId.EDGE_BOUNDS:
        holds = (q - p + 1).sign_set(">=") & (p * (p - 1) - 2 * q).sign_set(">=")
    else:
        rad, diam = seq("radius"), seq("diameter")
        holds = (diam - rad).sign_set(">=") & (2 * rad - diam).sign_set(">=")
    return cls, ~cls | holds


def _window_entry(t: TheoremId, g: Graph, n: int, k: Optional[int]) -> dict:
    try:
        res = check_standard(t, g, k)
        return {"n": n, "in_class": True, "holds": res.holds, "witness": res.witness}
    except PreconditionFailed as exc:
        return {"n": n, "in_class": False, "holds": t in IMPLICATIONS, "witness": {"reason": str(exc)}}


def check_transfer(t: TheoremId, ng: NonstandardGraph, k: Optional[int] = None) -> TransferReport:
    """Transferred check of theorem ``t`` on *G = [G_n]."""
    fam = ng.family
    if not fam.hyperfinite:
        raise PreconditionFailed(f"{t.value}: family is not hyperfinite")
    notes: list[str] = []
    if t is TheoremId.COLORING_MAX_DEG and k is None:
        try:
            k = ng.max_degree().standard_value()
        except FormOverflow as exc:
            raise PreconditionFailed(f"{t.value}: no standard degree bound found ({exc}); pass k explicitly") from exc
        if k is None:
            raise PreconditionFailed(f"{t.value}: max degree is unlimited; no standard k bounds it")
        notes.append(f"k taken as the standard max degree {k}")

    entries = [_window_entry(t, fam.graph_at(n), n, k) for n in range(ng.window)]
    try:
        cls_set, truth_set = _symbolic(t, ng, k)
        cls_truth, truth = Truth(cls_set, True), Truth(truth_set, True)
    except NotSymbolic:
        cls_truth = ng._classify(lambda n: entries[n]["in_class"])
        truth = ng._classify(lambda n: entries[n]["holds"])
        notes.append("empirical: truth sets classified from the window")
    except NotHyperfinite as exc:
        raise PreconditionFailed(f"{t.value}: {exc}") from exc

    cls_decision = cls_truth.decide(ng.filter)
    if cls_decision is Decision.OUT:
        raise PreconditionFailed(f"{t.value}: class precondition fails for almost all n")
    # an undecided class does not block the verdict: implications already fold the class in
    decision = truth.decide(ng.filter)
    if cls_decision is Decision.UNDECIDED:
        notes.append("class precondition undecided")

    report = TransferReport(t, decision, truth, cls_truth, entries, notes)
    if t is TheoremId.EULER_EVEN_DEGREE:
        bicond = ng._classify(lambda n: entries[n]["in_class"] is False or entries[n]["witness"]["biconditional"])
        report.extra["biconditional_set"] = bicond.to_json()
        report.extra["biconditional_decision"] = bicond.decide(ng.filter).value
    if t in _CRITERION_FIELD:
        checked = [e for e in entries if e["in_class"] and "implication_ok" in e["witness"]]
        report.extra["bruteforce_checked"] = len(checked)
        report.extra["bruteforce_counterexamples"] = [e["n"] for e in checked if not e["witness"]["implication_ok"]]
    if t is TheoremId.COLORING_MAX_DEG:
        report.extra["k"] = k
    if not report.consistent:
        notes.append("window witnesses disagree with the truth set")
    return report


ALL_THEOREMS = tuple(TheoremId)
