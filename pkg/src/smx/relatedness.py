"""Relatedness over the full, possibly cyclic multi-predicate graph:
predicate-weighted shortest paths, random-walk hitting and commute times,
and SimRank.

The transition model and the graph are immutable after construction; the
SimRank iteration double-buffers its score tables.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ContractError, DivergenceError, UnknownNodeError
from .graph import NodeId, SemanticGraph


@dataclass(frozen=True)
class PredicateWeightScheme:
    """Per-predicate cost multipliers applied on top of edge weights."""

    weights: Mapping[str, float] = field(default_factory=dict)
    default: float = 1.0

    def __post_init__(self):
        for name, value in list(self.weights.items()) + [("default", self.default)]:
            if not math.isfinite(value) or value < 0:
                raise ContractError(f"weight for {name!r} must be finite and >= 0")

    def cost(self, predicate: str) -> float:
        return self.weights.get(predicate, self.default)


UNIFORM = PredicateWeightScheme()


def weighted_shortest_path(
    graph: SemanticGraph,
    scheme: PredicateWeightScheme,
    u: NodeId,
    v: NodeId,
) -> float | None:
    """Minimal predicate-weighted cost between two nodes, edges traversable
    in both directions (every relationship implies its inverse).

    Returns None when v is unreachable, which is distinct from any cost.
    """
    if not (0 <= u < graph.n_nodes and 0 <= v < graph.n_nodes):
        raise UnknownNodeError("endpoint is not a node of the graph")
    if u == v:
        return 0.0
    dist = {u: 0.0}
    heap = [(0.0, u)]
    while heap:
        d, node = heapq.heappop(heap)
        if node == v:
            return d
        if d > dist.get(node, math.inf):
            continue
        neighbors = [
            (p, o, (node, p, o)) for p, o in graph.out_edges(node)
        ] + [(p, s, (s, p, node)) for p, s in graph.in_edges(node)]
        for predicate, other, edge in neighbors:
            cost = scheme.cost(predicate) * graph.weight(edge)
            nd = d + cost
            if nd < dist.get(other, math.inf):
                dist[other] = nd
                heapq.heappush(heap, (nd, other))
    return None


class TransitionModel:
    """Row-stochastic random-walk transitions over the directed graph."""

    __slots__ = ("graph", "_out_probs")

    def __init__(self, graph: SemanticGraph, out_probs):
        self.graph = graph
        self._out_probs = out_probs
        for node, probs in out_probs.items():
            if probs:
                total = sum(p for _, p in probs)
                if abs(total - 1.0) > 1e-9:
                    raise ContractError(
                        f"outgoing probabilities of {graph.label(node)} sum to {total}"
                    )

    @classmethod
    def from_graph(
        cls, graph: SemanticGraph, scheme: PredicateWeightScheme = UNIFORM
    ) -> "TransitionModel":
        out_probs: dict[NodeId, list[tuple[NodeId, float]]] = {}
        for node in range(graph.n_nodes):
            weights: dict[NodeId, float] = {}
            for predicate, other in graph.out_edges(node):
                w = scheme.cost(predicate) * graph.weight((node, predicate, other))
                weights[other] = weights.get(other, 0.0) + w
            total = sum(weights.values())
            if total == 0:
                out_probs[node] = []
            else:
                out_probs[node] = sorted(
                    (k, w / total) for k, w in weights.items()
                )
        return cls(graph, out_probs)

    def transitions(self, node: NodeId) -> list[tuple[NodeId, float]]:
        return self._out_probs[node]


def hitting_time(model: TransitionModel, u: NodeId, v: NodeId) -> float:
    """Expected number of steps for a walker starting at u to first reach v.

    Solved as the linear system H(x, v) = 1 + sum_k p(x, k) H(k, v) with
    H(v, v) = 0. Raises DivergenceError when absorption at v is not almost
    sure from u.
    """
    graph = model.graph
    if not (0 <= u < graph.n_nodes and 0 <= v < graph.n_nodes):
        raise UnknownNodeError("endpoint is not a node of the graph")
    if u == v:
        return 0.0

    # states reachable from u before hitting v
    reach = {u}
    queue = deque((u,))
    while queue:
        x = queue.popleft()
        if x == v:
            continue
        for k, _ in model.transitions(x):
            if k not in reach:
                reach.add(k)
                queue.append(k)
    if v not in reach:
        raise DivergenceError(
            f"{graph.label(v)} is unreachable from {graph.label(u)}"
        )

    # every wanderable state must still be able to reach v, otherwise the
    # walk escapes into a closed region and the expectation diverges
    can_reach_v = {v}
    backward: dict[NodeId, set] = {}
    for x in range(graph.n_nodes):
        for k, _ in model.transitions(x):
            backward.setdefault(k, set()).add(x)
    queue = deque((v,))
    while queue:
        x = queue.popleft()
        for prev in backward.get(x, ()):
            if prev not in can_reach_v:
                can_reach_v.add(prev)
                queue.append(prev)
    stuck = reach - can_reach_v
    if stuck:
        name = graph.label(min(stuck))
        raise DivergenceError(
            f"walk from {graph.label(u)} can wander to {name} "
            f"which cannot reach {graph.label(v)}"
        )

    states = sorted(reach - {v})
    index = {s: i for i, s in enumerate(states)}
    n = len(states)
    matrix = np.eye(n)
    for s in states:
        for k, p in model.transitions(s):
            if k in index:
                matrix[index[s], index[k]] -= p
    hitting = np.linalg.solve(matrix, np.ones(n))
    return float(hitting[index[u]])


def commute_time(model: TransitionModel, u: NodeId, v: NodeId) -> float:
    """Expected round-trip time: H(u, v) + H(v, u)."""
    return hitting_time(model, u, v) + hitting_time(model, v, u)


class SimRankScores:
    """Converged SimRank table with the per-iteration max deltas kept for
    convergence diagnostics."""

    __slots__ = ("_matrix", "deltas", "iterations")

    def __init__(self, matrix, deltas):
        self._matrix = matrix
        self.deltas = deltas
        self.iterations = len(deltas)

    def score(self, u: NodeId, v: NodeId) -> float:
        return float(self._matrix[u, v])

    def as_array(self) -> np.ndarray:
        return self._matrix.copy()


def simrank(
    graph: SemanticGraph,
    decay: float = 0.8,
    iterations: int = 100,
    tol: float = 0.0,
) -> SimRankScores:
    """Fixed-point SimRank over in-neighbor sets.

    s(u, u) = 1 and s(u, v) averages s over the in-neighbor pairs, scaled
    by the decay; nodes without in-neighbors score 0 against every other
    node. Iterates are non-decreasing and converge for decay in (0, 1).
    """
    if not 0.0 < decay < 1.0:
        raise ContractError("simrank decay must lie strictly between 0 and 1")
    if iterations < 1:
        raise ContractError("simrank needs at least one iteration")
    if graph.n_nodes == 0:
        raise ContractError("simrank needs a non-empty graph")
    n = graph.n_nodes
    norm_in = np.zeros((n, n))
    for node in range(n):
        sources = {s for _, s in graph.in_edges(node)}
        if sources:
            share = 1.0 / len(sources)
            for s in sources:
                norm_in[node, s] = share
    scores = np.eye(n)
    deltas: list[float] = []
    for _ in range(iterations):
        updated = decay * (norm_in @ scores @ norm_in.T)
        np.fill_diagonal(updated, 1.0)
        delta = float(np.max(np.abs(updated - scores)))
        deltas.append(delta)
        scores = updated
        if delta <= tol:
            break
    return SimRankScores(scores, deltas)
