"""Class specificity estimators (the theta family): depth variants and
information content, intrinsic and extrinsic.

Every estimator precomputes an immutable per-class table at bind time, so
evaluation is a lookup and concurrent reads are safe. All shipped
estimators decrease monotonically from the leaves toward the root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import (
    DegenerateTaxonomyError,
    InfiniteICError,
    OrderingError,
    UnknownNodeError,
    UsageError,
)
from .graph import NodeId, TaxonomyView
from .ingest import AnnotationSet


@dataclass(frozen=True)
class ClassUsage:
    """Per-class propagated instance sets: an instance counts for a class
    when one of its annotated classes is a descendant of it."""

    members: Mapping[NodeId, frozenset[str]]
    total: int

    def count(self, c: NodeId) -> int:
        return len(self.members.get(c, frozenset()))

    def instances(self, c: NodeId) -> frozenset[str]:
        return self.members.get(c, frozenset())


def class_usage(taxonomy: TaxonomyView, annotations: AnnotationSet) -> ClassUsage:
    """Propagate annotations through the taxonomy and count class usage."""
    if not annotations.assignments:
        raise UsageError("empty annotation set: extrinsic estimators are undefined")
    members: dict[NodeId, set[str]] = {c: set() for c in taxonomy.class_ids}
    for instance, classes in annotations.assignments.items():
        closure: set[NodeId] = set()
        for c in classes:
            if c not in taxonomy.class_ids:
                raise UnknownNodeError(f"annotation class {c} is not in the taxonomy")
            closure |= taxonomy.ancestors(c)
        for a in closure:
            members[a].add(instance)
    return ClassUsage(
        members={c: frozenset(s) for c, s in members.items()},
        total=len(annotations.assignments),
    )


class ThetaEstimator:
    """A named specificity function bound to one taxonomy.

    Values are precomputed; math.inf in the table marks classes whose
    extrinsic IC is undefined (zero usage) and raises at evaluation time.
    """

    __slots__ = ("kind", "taxonomy", "params", "_table", "_monotone")

    def __init__(self, kind, taxonomy, table, params=()):
        self.kind = kind
        self.taxonomy = taxonomy
        self.params = dict(params)
        self._table = dict(table)
        self._monotone = None

    def __call__(self, c: NodeId) -> float:
        return self.value(c)

    def value(self, c: NodeId) -> float:
        try:
            val = self._table[c]
        except KeyError:
            raise UnknownNodeError(f"node {c} is not a class of the bound taxonomy") from None
        if math.isinf(val):
            raise InfiniteICError(
                f"class {self.taxonomy.label(c)} has zero usage; "
                "enable smoothing or exclude it"
            )
        return val

    def raw(self, c: NodeId) -> float:
        """Table value without the infinite-IC guard."""
        return self._table[c]

    def defined(self, c: NodeId) -> bool:
        return c in self._table and not math.isinf(self._table[c])

    @property
    def is_monotone(self) -> bool:
        if self._monotone is None:
            self._monotone = not validate_monotonicity(self)
        return self._monotone

    @classmethod
    def from_table(cls, taxonomy, table, kind="custom"):
        missing = taxonomy.class_ids - set(table)
        if missing:
            raise UsageError(f"table misses {len(missing)} classes")
        return cls(kind, taxonomy, table)


def eval_theta(estimator: ThetaEstimator, c: NodeId) -> float:
    return estimator.value(c)


def _log(x: float, base: float | None) -> float:
    return math.log(x) if base is None else math.log(x, base)


def _require_nondegenerate(taxonomy: TaxonomyView, kind: str) -> None:
    if len(taxonomy.class_ids) < 2:
        raise DegenerateTaxonomyError(f"{kind} needs at least two classes")


def depth_theta(taxonomy: TaxonomyView, normalized: bool = True) -> ThetaEstimator:
    """Depth of the class; normalized divides by the taxonomy max depth."""
    maxd = taxonomy.max_depth
    if normalized:
        table = {c: (taxonomy.depth(c) / maxd if maxd else 0.0) for c in taxonomy.class_ids}
        return ThetaEstimator("depth", taxonomy, table, {"normalized": True})
    table = {c: float(taxonomy.depth(c)) for c in taxonomy.class_ids}
    return ThetaEstimator("depth_raw", taxonomy, table, {"normalized": False})


def nonlinear_depth_theta(taxonomy: TaxonomyView, base: float | None = None) -> ThetaEstimator:
    """Log-scaled depth; depth is shifted by one so the root stays finite."""
    maxd = taxonomy.max_depth
    denom = _log(maxd + 1, base) if maxd else 1.0
    table = {
        c: (_log(taxonomy.depth(c) + 1, base) / denom if maxd else 0.0)
        for c in taxonomy.class_ids
    }
    return ThetaEstimator("depth_nonlinear", taxonomy, table)


def seco_ic(taxonomy: TaxonomyView, base: float | None = None) -> ThetaEstimator:
    """Intrinsic IC from the inclusive descendant count:
    1 - log|D(c)| / log|C|."""
    _require_nondegenerate(taxonomy, "seco")
    log_n = _log(len(taxonomy.class_ids), base)
    table = {
        c: 1.0 - _log(len(taxonomy.descendants(c)), base) / log_n
        for c in taxonomy.class_ids
    }
    return ThetaEstimator("seco", taxonomy, table)


def zhou_ic(taxonomy: TaxonomyView, k: float = 0.6, base: float | None = None) -> ThetaEstimator:
    """Hybrid intrinsic IC mixing descendant count and nonlinear depth.

    The depth term is evaluated as log(depth+1)/log(max_depth+1): the bare
    log is undefined at the root and the shift preserves monotonicity.
    """
    if not 0.0 <= k <= 1.0:
        raise UsageError("zhou contribution factor k must be in [0, 1]")
    _require_nondegenerate(taxonomy, "zhou")
    seco = seco_ic(taxonomy, base)
    depth_part = nonlinear_depth_theta(taxonomy, base)
    table = {
        c: k * seco.raw(c) + (1.0 - k) * depth_part.raw(c) for c in taxonomy.class_ids
    }
    return ThetaEstimator("zhou", taxonomy, table, {"k": k})


def resnik_intrinsic_ic(taxonomy: TaxonomyView, base: float | None = None) -> ThetaEstimator:
    """Extrinsic Resnik IC under the convention that every class carries
    exactly one direct pseudo-instance, so p(c) = |D(c)| / |C|."""
    _require_nondegenerate(taxonomy, "resnik_intrinsic")
    n = len(taxonomy.class_ids)
    table = {
        c: _log(n, base) - _log(len(taxonomy.descendants(c)), base)
        for c in taxonomy.class_ids
    }
    return ThetaEstimator("resnik_intrinsic", taxonomy, table)


def sanchez_leaves_ic(taxonomy: TaxonomyView, base: float | None = None) -> ThetaEstimator:
    """Leaf-count IC: -log(|leaves subsumed by c| / |leaves|)."""
    n_leaves = len(taxonomy.leaves)
    table = {
        c: _log(n_leaves, base) - _log(len(taxonomy.descendants(c) & taxonomy.leaves), base)
        for c in taxonomy.class_ids
    }
    return ThetaEstimator("sanchez", taxonomy, table)


def sanchez_refined_ic(taxonomy: TaxonomyView, base: float | None = None) -> ThetaEstimator:
    """Leaf-count IC corrected by the number of subsumers:
    -log((leaves(c)/|A(c)| + 1) / (|leaves| + 1))."""
    n_leaves = len(taxonomy.leaves)
    table = {}
    for c in taxonomy.class_ids:
        leaves_c = len(taxonomy.descendants(c) & taxonomy.leaves)
        ratio = (leaves_c / len(taxonomy.ancestors(c)) + 1.0) / (n_leaves + 1.0)
        table[c] = -_log(ratio, base)
    return ThetaEstimator("sanchez_refined", taxonomy, table)


def _extrinsic_table(taxonomy, usage, smooth, base):
    total = usage.total + (len(taxonomy.class_ids) if smooth else 0)
    table = {}
    for c in taxonomy.class_ids:
        count = usage.count(c) + (len(taxonomy.descendants(c)) if smooth else 0)
        table[c] = math.inf if count == 0 else _log(total, base) - _log(count, base)
    return table


def resnik_extrinsic_ic(
    taxonomy: TaxonomyView,
    usage: ClassUsage,
    smooth: bool = False,
    base: float | None = None,
) -> ThetaEstimator:
    """Corpus IC: -log(|I(c)| / |I|) over propagated instance counts.

    Smoothing adds one pseudo-instance per class before propagation, which
    keeps deep unused classes finite.
    """
    table = _extrinsic_table(taxonomy, usage, smooth, base)
    return ThetaEstimator("resnik", taxonomy, table, {"smooth": smooth})


def idf_theta(
    taxonomy: TaxonomyView,
    usage: ClassUsage,
    smooth: bool = False,
    base: float | None = None,
) -> ThetaEstimator:
    """Inverse document frequency, log(|I| / |I(c)|); identical to the
    extrinsic Resnik IC and kept as its own kind for that assertion."""
    table = _extrinsic_table(taxonomy, usage, smooth, base)
    return ThetaEstimator("idf", taxonomy, table, {"smooth": smooth})


def validate_monotonicity(estimator: ThetaEstimator) -> list[tuple[NodeId, NodeId]]:
    """Scan every taxonomy edge; return (child, parent) pairs where the
    child's value drops below the parent's."""
    bad = []
    for child, parent in estimator.taxonomy.edges:
        if estimator.raw(child) < estimator.raw(parent) - 1e-12:
            bad.append((child, parent))
    return sorted(bad)


def connotation_weight(estimator: ThetaEstimator, u: NodeId, v: NodeId) -> float:
    """Strength of connotation of the ordered pair: theta(u) - theta(v),
    defined only when v subsumes u."""
    taxonomy = estimator.taxonomy
    if v not in taxonomy.ancestors(u):
        raise OrderingError(
            f"{taxonomy.label(v)} does not subsume {taxonomy.label(u)}"
        )
    return estimator.value(u) - estimator.value(v)


ESTIMATOR_KINDS = (
    "depth",
    "depth_raw",
    "depth_nonlinear",
    "seco",
    "zhou",
    "resnik",
    "resnik_intrinsic",
    "idf",
    "sanchez",
    "sanchez_refined",
)


def build_estimator(
    kind: str,
    taxonomy: TaxonomyView,
    usage: ClassUsage | None = None,
    base: float | None = None,
    smooth: bool = False,
    **params,
) -> ThetaEstimator:
    """Estimator factory used by the CLI; extrinsic kinds need usage."""
    extrinsic = kind in ("resnik", "idf")
    if extrinsic and usage is None:
        raise UsageError(f"estimator {kind!r} needs annotations (class usage)")
    if kind == "depth":
        return depth_theta(taxonomy, normalized=True)
    if kind == "depth_raw":
        return depth_theta(taxonomy, normalized=False)
    if kind == "depth_nonlinear":
        return nonlinear_depth_theta(taxonomy, base)
    if kind == "seco":
        return seco_ic(taxonomy, base)
    if kind == "zhou":
        return zhou_ic(taxonomy, k=float(params.get("k", 0.6)), base=base)
    if kind == "resnik":
        return resnik_extrinsic_ic(taxonomy, usage, smooth=smooth, base=base)
    if kind == "resnik_intrinsic":
        return resnik_intrinsic_ic(taxonomy, base)
    if kind == "idf":
        return idf_theta(taxonomy, usage, smooth=smooth, base=base)
    if kind == "sanchez":
        return sanchez_leaves_ic(taxonomy, base)
    if kind == "sanchez_refined":
        return sanchez_refined_ic(taxonomy, base)
    raise UsageError(f"unknown estimator kind {kind!r}; known: {', '.join(ESTIMATOR_KINDS)}")
