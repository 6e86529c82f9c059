"""Parsers and serializers for the toolkit's TSV exchange formats.

All formats are UTF-8, one record per line; lines starting with '#' are
comments and blank lines are ignored.

  graph       subject <TAB> predicate <TAB> object [<TAB> weight]
  annotation  instance <TAB> class[,class...]
  benchmark   wordA <TAB> wordB <TAB> rating
  mapping     word <TAB> classId[;classId...]

subClassOf (class to class) and isA (instance to class) are the two
reserved predicates; every other predicate token is free-form relational
data. Identifiers wrapped in double underscores are reserved for the
toolkit (the virtual root is named __root__).
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field
from typing import IO, Iterator, Mapping

from .errors import ClassificationError, ParseError, ResolutionError
from .graph import IS_A, NodeId, SemanticGraph, SUBCLASS_OF


@dataclass(frozen=True)
class TripleRecord:
    subject: str
    predicate: str
    object: str
    weight: float | None = None


@dataclass(frozen=True)
class AnnotationSet:
    """Instance identifier to resolved class ids, plus merge-warning count."""

    assignments: Mapping[str, frozenset[NodeId]]
    warnings: int = 0


@dataclass(frozen=True)
class RatedPairSet:
    """Human-rated element pairs in input order."""

    name: str
    pairs: tuple[tuple[str, str, float], ...]
    scale: tuple[float, float]

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class WordMapping:
    words: Mapping[str, frozenset[NodeId]]
    warnings: int = 0


def _lines(source) -> Iterator[tuple[int, str]]:
    """Yield (line number, stripped content) skipping comments and blanks."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as handle:
            yield from _lines(handle)
        return
    if isinstance(source, bytes):
        source = io.StringIO(source.decode("utf-8"))
    elif isinstance(source, io.IOBase) and not isinstance(source, io.TextIOBase):
        source = io.TextIOWrapper(source, encoding="utf-8")
    elif hasattr(source, "read") and isinstance(source.read(0), bytes):
        source = io.TextIOWrapper(source, encoding="utf-8")
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, line


def _is_reserved(token: str) -> bool:
    return len(token) > 4 and token.startswith("__") and token.endswith("__")


def _parse_weight(text: str, lineno: int) -> float:
    try:
        weight = float(text)
    except ValueError:
        raise ParseError(f"weight {text!r} is not a number", lineno) from None
    if not math.isfinite(weight) or weight < 0:
        raise ParseError(f"weight must be finite and >= 0, got {text}", lineno)
    return weight


def read_triples(source) -> list[TripleRecord]:
    records = []
    for lineno, line in _lines(source):
        fields = line.split("\t")
        if len(fields) not in (3, 4):
            raise ParseError(
                f"expected 3 or 4 tab-separated fields, got {len(fields)}", lineno
            )
        subject, predicate, obj = (f.strip() for f in fields[:3])
        if not subject or not predicate or not obj:
            raise ParseError("empty field in triple", lineno)
        for node in (subject, obj):
            if _is_reserved(node):
                raise ParseError(f"identifier {node!r} uses a reserved name", lineno)
        if _is_reserved(predicate):
            raise ParseError(f"unknown reserved predicate {predicate!r}", lineno)
        weight = _parse_weight(fields[3], lineno) if len(fields) == 4 else None
        records.append(TripleRecord(subject, predicate, obj, weight))
    return records


def parse_graph(source) -> SemanticGraph:
    """Load a triple TSV into a SemanticGraph.

    Node classification is independent of line order: subjects and objects
    of subClassOf are classes, objects of isA are classes, subjects of isA
    are instances, and anything left unclassified is an instance. A node
    claimed by both sides is a classification error.
    """
    records = read_triples(source)
    if not records:
        raise ParseError("empty graph: a graph must contain at least one class")
    class_labels: set[str] = set()
    instance_labels: set[str] = set()
    all_labels: set[str] = set()
    for rec in records:
        all_labels.update((rec.subject, rec.object))
        if rec.predicate == SUBCLASS_OF:
            class_labels.update((rec.subject, rec.object))
        elif rec.predicate == IS_A:
            instance_labels.add(rec.subject)
            class_labels.add(rec.object)
    clash = class_labels & instance_labels
    if clash:
        names = ", ".join(sorted(clash))
        raise ClassificationError(f"used as both class and instance: {names}")
    instance_labels |= all_labels - class_labels

    labels = sorted(all_labels)
    index = {label: i for i, label in enumerate(labels)}
    edges: dict[tuple[NodeId, str, NodeId], float | None] = {}
    for rec in records:
        edge = (index[rec.subject], rec.predicate, index[rec.object])
        if edge in edges and edges[edge] != rec.weight:
            raise ParseError(
                f"duplicate triple {rec.subject} {rec.predicate} {rec.object} "
                "with conflicting weights"
            )
        edges[edge] = rec.weight
    weighted = any(w is not None for w in edges.values())
    edge_weights = (
        {e: (1.0 if w is None else w) for e, w in edges.items()} if weighted else None
    )
    return SemanticGraph(
        labels=labels,
        classes={index[c] for c in class_labels},
        instances={index[i] for i in instance_labels},
        predicates={rec.predicate for rec in records},
        edges=set(edges),
        edge_weights=edge_weights,
    )


def serialize_graph(graph: SemanticGraph, stream: IO[str] | None = None) -> str:
    """Write a graph back to triple TSV, sorted for byte-stable output."""
    lines = []
    for s, p, o in sorted(graph.edges, key=graph._edge_key):
        row = f"{graph.label(s)}\t{p}\t{graph.label(o)}"
        if graph.edge_weights is not None:
            row += f"\t{graph.edge_weights[(s, p, o)]:g}"
        lines.append(row)
    text = "\n".join(lines) + ("\n" if lines else "")
    if stream is not None:
        stream.write(text)
    return text


def parse_annotations(source, graph: SemanticGraph) -> AnnotationSet:
    """Load instance annotations, resolving every class against the graph.

    Duplicate lines for one instance merge by union and bump the warning
    count.
    """
    assignments: dict[str, set[NodeId]] = {}
    warnings = 0
    for lineno, line in _lines(source):
        fields = line.split("\t")
        if len(fields) != 2:
            raise ParseError("expected instance<TAB>class[,class...]", lineno)
        instance, classes_text = fields[0].strip(), fields[1].strip()
        if not instance or not classes_text:
            raise ParseError("empty instance or class list", lineno)
        resolved = set()
        for token in classes_text.split(","):
            token = token.strip()
            if not token:
                raise ParseError("empty class identifier", lineno)
            if not graph.has_node(token) or graph.node(token) not in graph.classes:
                raise ResolutionError(f"unknown class identifier {token!r}")
            resolved.add(graph.node(token))
        if instance in assignments:
            warnings += 1
            assignments[instance] |= resolved
        else:
            assignments[instance] = resolved
    return AnnotationSet(
        assignments={k: frozenset(v) for k, v in assignments.items()},
        warnings=warnings,
    )


def parse_rated_pairs(source, name: str = "rated-pairs") -> RatedPairSet:
    pairs: list[tuple[str, str, float]] = []
    for lineno, line in _lines(source):
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError("expected wordA<TAB>wordB<TAB>rating", lineno)
        a, b, rating_text = (f.strip() for f in fields)
        if not a or not b:
            raise ParseError("empty element identifier", lineno)
        try:
            rating = float(rating_text)
        except ValueError:
            raise ParseError(f"rating {rating_text!r} is not a number", lineno) from None
        if not math.isfinite(rating):
            raise ParseError("rating must be finite", lineno)
        pairs.append((a, b, rating))
    if not pairs:
        raise ParseError("rated pair set is empty")
    ratings = [r for _, _, r in pairs]
    return RatedPairSet(name=name, pairs=tuple(pairs), scale=(min(ratings), max(ratings)))


def parse_word_mapping(source, graph: SemanticGraph) -> WordMapping:
    """Load the word to class-set mapping used by the benchmark harness."""
    words: dict[str, set[NodeId]] = {}
    warnings = 0
    for lineno, line in _lines(source):
        fields = line.split("\t")
        if len(fields) != 2:
            raise ParseError("expected word<TAB>classId[;classId...]", lineno)
        word, classes_text = fields[0].strip(), fields[1].strip()
        if not word or not classes_text:
            raise ParseError("empty word or class list", lineno)
        resolved = set()
        for token in classes_text.split(";"):
            token = token.strip()
            if not token:
                raise ParseError("empty class identifier", lineno)
            if not graph.has_node(token) or graph.node(token) not in graph.classes:
                raise ResolutionError(f"unknown class identifier {token!r}")
            resolved.add(graph.node(token))
        if word in words:
            warnings += 1
            words[word] |= resolved
        else:
            words[word] = resolved
    return WordMapping(
        words={k: frozenset(v) for k, v in words.items()}, warnings=warnings
    )
