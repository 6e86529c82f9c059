"""Graph canonicalization: taxonomic reduction, transitive reduction and
annotation de-redundancy (the true path rule, applied in both directions).

Everything here is a pure transformation producing new values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import ContractError, UnknownNodeError
from .graph import NodeId, SUBCLASS_OF, SemanticGraph, TaxonomyView, VIRTUAL_ROOT
from .ingest import AnnotationSet, TripleRecord


@dataclass(frozen=True)
class ReductionReport:
    removed_edges: tuple[TripleRecord, ...] = ()
    removed_annotations: Mapping[str, frozenset[str]] = field(default_factory=dict)
    inserted_root: str | None = None


def taxonomic_reduction(graph: SemanticGraph) -> TaxonomyView:
    """Build the taxonomy view: classes plus subClassOf edges only.

    If the subClassOf subgraph has several roots, a virtual root named
    __root__ is inserted above them so the view is always singly rooted.
    Raises CycleError on a cyclic taxonomy.
    """
    if not graph.classes:
        raise ContractError("graph contains no classes")
    up_edges = graph.edges_with(SUBCLASS_OF)
    labels = {c: graph.label(c) for c in graph.classes}
    class_ids = set(graph.classes)
    with_parent = {child for child, _ in up_edges}
    roots = sorted(class_ids - with_parent)
    inserted = None
    if len(roots) > 1:
        inserted = graph.n_nodes
        labels[inserted] = VIRTUAL_ROOT
        class_ids.add(inserted)
        up_edges = list(up_edges) + [(r, inserted) for r in roots]
    return TaxonomyView.build(graph, class_ids, up_edges, labels, inserted_root=inserted)


def transitive_reduction(taxonomy: TaxonomyView) -> tuple[TaxonomyView, ReductionReport]:
    """Drop every subClassOf edge that a length >= 2 path already implies.

    Reachability is unchanged and the result is idempotent; on a DAG the
    reduction is unique.
    """
    removed = sorted(
        taxonomy.redundant_edges,
        key=lambda e: (taxonomy.label(e[0]), taxonomy.label(e[1])),
    )
    report = ReductionReport(
        removed_edges=tuple(
            TripleRecord(taxonomy.label(u), SUBCLASS_OF, taxonomy.label(p))
            for u, p in removed
        ),
        inserted_root=(
            taxonomy.label(taxonomy.inserted_root)
            if taxonomy.inserted_root is not None
            else None
        ),
    )
    if not removed:
        return taxonomy, report
    kept = taxonomy.edges - taxonomy.redundant_edges
    reduced = TaxonomyView.build(
        taxonomy.graph,
        taxonomy.class_ids,
        kept,
        {c: taxonomy.label(c) for c in taxonomy.class_ids},
        inserted_root=taxonomy.inserted_root,
    )
    return reduced, report


def reduce_annotations(
    taxonomy: TaxonomyView, annotations: AnnotationSet
) -> tuple[AnnotationSet, ReductionReport]:
    """Remove each annotated class that is a strict ancestor of another one.

    The surviving set per instance is an antichain, which is what the
    direct groupwise measures and usage statistics expect.
    """
    reduced: dict[str, frozenset[NodeId]] = {}
    removed: dict[str, frozenset[str]] = {}
    for instance, classes in annotations.assignments.items():
        for c in classes:
            if c not in taxonomy.class_ids:
                raise UnknownNodeError(
                    f"annotation class {c} is not part of the taxonomy"
                )
        keep = frozenset(
            c
            for c in classes
            if not any(other != c and c in taxonomy.ancestors(other) for other in classes)
        )
        reduced[instance] = keep
        dropped = classes - keep
        if dropped:
            removed[instance] = frozenset(taxonomy.label(c) for c in dropped)
    report = ReductionReport(removed_annotations=removed)
    return AnnotationSet(assignments=reduced, warnings=annotations.warnings), report


def expand_annotations(taxonomy: TaxonomyView, annotations: AnnotationSet) -> AnnotationSet:
    """Replace each instance's classes by their inclusive ancestor closure."""
    expanded = {}
    for instance, classes in annotations.assignments.items():
        closure: set[NodeId] = set()
        for c in classes:
            closure |= taxonomy.ancestors(c)
        expanded[instance] = frozenset(closure)
    return AnnotationSet(assignments=expanded, warnings=annotations.warnings)
