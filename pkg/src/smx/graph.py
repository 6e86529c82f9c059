"""Semantic graph data model and the taxonomic query kernel.

A loaded graph is immutable. All derived tables (closures, depths) are
precomputed once at construction, so every query below is a read-only
lookup or set operation that is safe to run concurrently.
"""

from __future__ import annotations

import enum
from collections import deque
from typing import Callable, Iterable, Mapping

from .errors import ContractError, CycleError, UnknownNodeError

NodeId = int

SUBCLASS_OF = "subClassOf"
IS_A = "isA"
VIRTUAL_ROOT = "__root__"


class AncestorConstraint(enum.Enum):
    """Whether a pairwise taxonomic path must pass through a common ancestor."""

    VIA_LCA = "via_lca"
    UNCONSTRAINED = "unconstrained"


class SemanticGraph:
    """Multi-relational directed graph over classes, instances and predicates.

    Nodes are dense integer handles resolvable back to their text
    identifiers. Classes and instances are disjoint, every edge endpoint is
    a declared node, and edge weights, when present, cover every edge.
    """

    __slots__ = (
        "_labels",
        "_index",
        "classes",
        "instances",
        "predicates",
        "edges",
        "edge_weights",
        "_out",
        "_in",
    )

    def __init__(
        self,
        labels: Iterable[str],
        classes: Iterable[NodeId],
        instances: Iterable[NodeId],
        predicates: Iterable[str],
        edges: Iterable[tuple[NodeId, str, NodeId]],
        edge_weights: Mapping[tuple[NodeId, str, NodeId], float] | None = None,
    ):
        self._labels = tuple(labels)
        self._index = {label: i for i, label in enumerate(self._labels)}
        if len(self._index) != len(self._labels):
            raise ContractError("duplicate node identifiers")
        self.classes = frozenset(classes)
        self.instances = frozenset(instances)
        overlap = self.classes & self.instances
        if overlap:
            names = ", ".join(sorted(self._labels[i] for i in overlap))
            raise ContractError(f"nodes are both class and instance: {names}")
        self.predicates = frozenset(predicates)
        self.edges = frozenset(edges)
        n = len(self._labels)
        for s, p, o in self.edges:
            if not (0 <= s < n and 0 <= o < n):
                raise ContractError("edge endpoint is not a declared node")
            if p not in self.predicates:
                raise ContractError(f"edge uses undeclared predicate {p!r}")
        if edge_weights is not None:
            if set(edge_weights) != self.edges:
                raise ContractError("edge_weights must cover every edge exactly once")
            for w in edge_weights.values():
                if not (w >= 0.0) or w != w or w == float("inf"):
                    raise ContractError("edge weights must be finite and >= 0")
            edge_weights = dict(edge_weights)
        self.edge_weights = edge_weights
        self._out: dict[NodeId, tuple[tuple[str, NodeId], ...]] = {}
        self._in: dict[NodeId, tuple[tuple[str, NodeId], ...]] = {}
        out: dict[NodeId, list] = {i: [] for i in range(n)}
        inc: dict[NodeId, list] = {i: [] for i in range(n)}
        for s, p, o in sorted(self.edges, key=self._edge_key):
            out[s].append((p, o))
            inc[o].append((p, s))
        for i in range(n):
            self._out[i] = tuple(out[i])
            self._in[i] = tuple(inc[i])

    def _edge_key(self, edge):
        s, p, o = edge
        return (self._labels[s], p, self._labels[o])

    @property
    def n_nodes(self) -> int:
        return len(self._labels)

    def node(self, label: str) -> NodeId:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownNodeError(f"unknown node identifier {label!r}") from None

    def label(self, node: NodeId) -> str:
        try:
            return self._labels[node]
        except IndexError:
            raise UnknownNodeError(f"unknown node id {node}") from None

    def has_node(self, label: str) -> bool:
        return label in self._index

    def out_edges(self, node: NodeId) -> tuple[tuple[str, NodeId], ...]:
        return self._out[node]

    def in_edges(self, node: NodeId) -> tuple[tuple[str, NodeId], ...]:
        return self._in[node]

    def edges_with(self, predicate: str) -> list[tuple[NodeId, NodeId]]:
        return [(s, o) for (s, p, o) in self.edges if p == predicate]

    def weight(self, edge: tuple[NodeId, str, NodeId]) -> float:
        if self.edge_weights is None:
            return 1.0
        return self.edge_weights[edge]


class TaxonomyView:
    """Acyclic subClassOf view with precomputed closures, depths and leaves.

    Ancestor and descendant sets are inclusive: u belongs to both A(u) and
    D(u). Depth is the longest edge path from the root, which keeps depth
    monotone under multiple inheritance. Construct through
    preprocess.taxonomic_reduction rather than directly.
    """

    __slots__ = (
        "graph",
        "class_ids",
        "edges",
        "root",
        "max_depth",
        "leaves",
        "inserted_root",
        "redundant_edges",
        "is_reduced",
        "_labels",
        "_by_label",
        "_parents",
        "_children",
        "_anc",
        "_desc",
        "_depth",
        "_order",
        "_path_stats",
    )

    def __init__(self):
        raise ContractError("use TaxonomyView.build or preprocess.taxonomic_reduction")

    @classmethod
    def build(
        cls,
        graph: SemanticGraph | None,
        class_ids: Iterable[NodeId],
        up_edges: Iterable[tuple[NodeId, NodeId]],
        labels: Mapping[NodeId, str],
        inserted_root: NodeId | None = None,
    ) -> "TaxonomyView":
        t = object.__new__(cls)
        t.graph = graph
        t.class_ids = frozenset(class_ids)
        t.inserted_root = inserted_root
        t._labels = dict(labels)
        t._by_label = {lab: nid for nid, lab in t._labels.items()}
        t._path_stats = {}
        parents: dict[NodeId, set] = {c: set() for c in t.class_ids}
        children: dict[NodeId, set] = {c: set() for c in t.class_ids}
        edge_set = set()
        for child, parent in up_edges:
            if child == parent:
                raise CycleError([t._labels[child], t._labels[child]])
            if (child, parent) in edge_set:
                continue
            edge_set.add((child, parent))
            parents[child].add(parent)
            children[parent].add(child)
        t.edges = frozenset(edge_set)

        roots = sorted(c for c in t.class_ids if not parents[c])
        if len(roots) != 1:
            if not roots:
                raise CycleError(t._trace_cycle(parents, set(t.class_ids)))
            names = ", ".join(t._labels[r] for r in roots)
            raise ContractError(f"taxonomy must have exactly one root, got: {names}")
        t.root = roots[0]

        # Kahn order with every parent placed before its children.
        indeg = {c: len(parents[c]) for c in t.class_ids}
        ready = deque([t.root])
        order: list[NodeId] = []
        while ready:
            c = ready.popleft()
            order.append(c)
            for ch in sorted(children[c]):
                indeg[ch] -= 1
                if indeg[ch] == 0:
                    ready.append(ch)
        if len(order) != len(t.class_ids):
            leftover = set(t.class_ids) - set(order)
            raise CycleError(t._trace_cycle(parents, leftover))
        t._order = tuple(order)

        anc: dict[NodeId, frozenset] = {}
        depth: dict[NodeId, int] = {}
        for c in order:
            if not parents[c]:
                anc[c] = frozenset((c,))
                depth[c] = 0
            else:
                acc = set((c,))
                for p in parents[c]:
                    acc |= anc[p]
                anc[c] = frozenset(acc)
                depth[c] = 1 + max(depth[p] for p in parents[c])
        desc: dict[NodeId, frozenset] = {}
        for c in reversed(order):
            acc = set((c,))
            for ch in children[c]:
                acc |= desc[ch]
            desc[c] = frozenset(acc)

        t._parents = {c: frozenset(v) for c, v in parents.items()}
        t._children = {c: frozenset(v) for c, v in children.items()}
        t._anc = anc
        t._desc = desc
        t._depth = depth
        t.max_depth = max(depth.values())
        t.leaves = frozenset(c for c in t.class_ids if not children[c])
        t.redundant_edges = frozenset(
            (u, p)
            for (u, p) in t.edges
            if any(q != p and p in anc[q] for q in parents[u])
        )
        t.is_reduced = not t.redundant_edges
        return t

    def _trace_cycle(self, parents, leftover):
        start = min(leftover)
        seen: dict[NodeId, int] = {}
        walk: list[NodeId] = []
        node = start
        while node not in seen:
            seen[node] = len(walk)
            walk.append(node)
            node = min(p for p in parents[node] if p in leftover)
        cycle = walk[seen[node]:] + [node]
        return [self._labels[c] for c in cycle]

    # -- lookups ----------------------------------------------------------

    def label(self, node: NodeId) -> str:
        try:
            return self._labels[node]
        except KeyError:
            raise UnknownNodeError(f"unknown class id {node}") from None

    def node(self, label: str) -> NodeId:
        try:
            return self._by_label[label]
        except KeyError:
            raise UnknownNodeError(f"unknown class identifier {label!r}") from None

    def _check(self, node: NodeId) -> None:
        if node not in self.class_ids:
            raise UnknownNodeError(f"node {node} is not a class of this taxonomy")

    def sorted_classes(self) -> list[NodeId]:
        return sorted(self.class_ids, key=self._labels.__getitem__)

    # -- closures and depth -------------------------------------------------

    def ancestors(self, node: NodeId) -> frozenset:
        """Inclusive ancestor set A(u)."""
        self._check(node)
        return self._anc[node]

    def descendants(self, node: NodeId) -> frozenset:
        """Inclusive descendant set D(u)."""
        self._check(node)
        return self._desc[node]

    def depth(self, node: NodeId) -> int:
        """Longest subClassOf edge path from the root down to the class."""
        self._check(node)
        return self._depth[node]

    def parents(self, node: NodeId) -> frozenset:
        self._check(node)
        return self._parents[node]

    def children(self, node: NodeId) -> frozenset:
        self._check(node)
        return self._children[node]

    def common_ancestors(self, u: NodeId, v: NodeId) -> frozenset:
        self._check(u)
        self._check(v)
        return self._anc[u] & self._anc[v]

    def ncca(self, u: NodeId, v: NodeId) -> frozenset:
        """Maximal antichain of common ancestors (the non-comparable ones).

        A common ancestor stays iff none of its strict descendants is also
        a common ancestor, so no member subsumes another member.
        """
        common = self.common_ancestors(u, v)
        return frozenset(a for a in common if len(self._desc[a] & common) == 1)

    def mica(self, theta: Callable[[NodeId], float], u: NodeId, v: NodeId) -> NodeId:
        """Common ancestor maximizing theta; ties go to the smallest label."""
        common = self.common_ancestors(u, v)
        return min(common, key=lambda c: (-theta(c), self._labels[c]))

    def deepest_common_ancestor(self, u: NodeId, v: NodeId) -> NodeId:
        common = self.common_ancestors(u, v)
        return min(common, key=lambda c: (-self._depth[c], self._labels[c]))

    # -- paths --------------------------------------------------------------

    def up_distances(self, node: NodeId) -> dict[NodeId, int]:
        """BFS edge counts from the class up to each of its ancestors."""
        self._check(node)
        dist = {node: 0}
        queue = deque((node,))
        while queue:
            x = queue.popleft()
            for p in self._parents[x]:
                if p not in dist:
                    dist[p] = dist[x] + 1
                    queue.append(p)
        return dist

    def shortest_path(
        self,
        u: NodeId,
        v: NodeId,
        constraint: AncestorConstraint = AncestorConstraint.VIA_LCA,
    ) -> int:
        """Edge count of the shortest subClassOf path between two classes.

        VIA_LCA takes the minimum of sp(u, a) + sp(v, a) over common
        ancestors a. UNCONSTRAINED treats subClassOf edges as bidirectional.
        """
        self._check(u)
        self._check(v)
        if u == v:
            return 0
        if constraint is AncestorConstraint.VIA_LCA:
            du = self.up_distances(u)
            dv = self.up_distances(v)
            return min(du[a] + dv[a] for a in du.keys() & dv.keys())
        dist = {u: 0}
        queue = deque((u,))
        while queue:
            x = queue.popleft()
            for nxt in self._parents[x] | self._children[x]:
                if nxt not in dist:
                    if nxt == v:
                        return dist[x] + 1
                    dist[nxt] = dist[x] + 1
                    queue.append(nxt)
        raise ContractError("taxonomy is rooted, all class pairs are connected")

    def path_length_with_reversal(self, u: NodeId, v: NodeId) -> int:
        """ViaLCA path length where the up/down turn at the ancestor adds 1."""
        du = self.up_distances(u)
        dv = self.up_distances(v)
        return min(
            du[a] + dv[a] + (1 if du[a] > 0 and dv[a] > 0 else 0)
            for a in du.keys() & dv.keys()
        )

    def longest_up_distance(self, u: NodeId, a: NodeId) -> int:
        """Longest subClassOf path length from u up to its ancestor a."""
        self._check(u)
        if a not in self._anc[u]:
            raise UnknownNodeError(
                f"{self._labels[a]} is not an ancestor of {self._labels[u]}"
            )
        if a == u:
            return 0
        # Every u-to-a path stays inside A(u) & D(a); parents come first
        # when that slice is walked by increasing depth.
        between = sorted(self._anc[u] & self._desc[a], key=self._depth.__getitem__)
        longest = {a: 0}
        for x in between:
            if x == a:
                continue
            longest[x] = 1 + max(longest[p] for p in self._parents[x] if p in longest)
        return longest[u]

    def shortest_up_path_edges(self, u: NodeId, a: NodeId) -> list[tuple[NodeId, NodeId]]:
        """One shortest u-to-a edge chain, deterministic by label order."""
        if a == u:
            return []
        if a not in self._anc[u]:
            raise UnknownNodeError(
                f"{self._labels[a]} is not an ancestor of {self._labels[u]}"
            )
        # distances measured from a back down toward u
        dist = {a: 0}
        queue = deque((a,))
        while queue:
            x = queue.popleft()
            for ch in self._children[x]:
                if ch in self._anc[u] and ch not in dist:
                    dist[ch] = dist[x] + 1
                    queue.append(ch)
        edges = []
        x = u
        while x != a:
            step = min(
                (p for p in self._parents[x] if p in dist and dist[p] == dist[x] - 1),
                key=self._labels.__getitem__,
            )
            edges.append((x, step))
            x = step
        return edges

    def up_path_stats(self, u: NodeId, cap: int = 100_000) -> dict[NodeId, tuple[int, int]]:
        """Per ancestor a: (number of u-to-root paths through a, summed length).

        Exhaustive enumeration, exact at desk scale; raises past the cap.
        Results are memoized on the view.
        """
        self._check(u)
        cached = self._path_stats.get(u)
        if cached is not None:
            return cached
        stats: dict[NodeId, list[int]] = {}
        n_paths = 0
        stack: list[tuple[NodeId, tuple[NodeId, ...]]] = [(u, (u,))]
        while stack:
            node, path = stack.pop()
            if not self._parents[node]:
                n_paths += 1
                if n_paths > cap:
                    raise ContractError(
                        f"more than {cap} root paths from {self._labels[u]}"
                    )
                length = len(path) - 1
                for member in path:
                    entry = stats.setdefault(member, [0, 0])
                    entry[0] += 1
                    entry[1] += length
            else:
                for p in self._parents[node]:
                    stack.append((p, path + (p,)))
        result = {a: (n, total) for a, (n, total) in stats.items()}
        self._path_stats[u] = result
        return result
