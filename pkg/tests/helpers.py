"""Shared test utilities: random taxonomy generators and brute-force
oracles kept deliberately independent of the library's own algorithms."""

from __future__ import annotations

import random
from collections import deque

from smx import parse_graph, taxonomic_reduction


def taxonomy_from_lines(lines):
    return taxonomic_reduction(parse_graph("\n".join(lines).encode()))


def taxonomy_from_pairs(pairs):
    """pairs of (child, parent) labels."""
    return taxonomy_from_lines([f"{c}\tsubClassOf\t{p}" for c, p in pairs])


def random_taxonomy(rng: random.Random, max_nodes=50, tree=False, multi=0.3):
    """Rooted random DAG (or tree); returns (taxonomy, raw edge pairs).

    Node i only attaches to earlier nodes, so the result is acyclic and
    singly rooted at n000. Redundant edges can occur, which is on purpose.
    """
    n = rng.randint(2, max_nodes)
    pairs = []
    for i in range(1, n):
        label = f"n{i:03d}"
        if tree:
            parents = {rng.randrange(i)}
        else:
            count = 1
            while count < min(i, 3) and rng.random() < multi:
                count += 1
            parents = set(rng.sample(range(i), count))
        for p in sorted(parents):
            pairs.append((label, f"n{p:03d}"))
    return taxonomy_from_pairs(pairs), pairs


def parents_of(pairs):
    table: dict[str, set] = {}
    for child, parent in pairs:
        table.setdefault(child, set()).add(parent)
        table.setdefault(parent, set())
    return table


def children_of(pairs):
    table: dict[str, set] = {}
    for child, parent in pairs:
        table.setdefault(parent, set()).add(child)
        table.setdefault(child, set())
    return table


# -- brute-force oracles -------------------------------------------------


def brute_reachable(adjacent, start):
    """Inclusive reachability closure by stack DFS."""
    seen = {start}
    stack = [start]
    while stack:
        for nxt in adjacent.get(stack.pop(), ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def brute_ancestors(pairs, node):
    return brute_reachable(parents_of(pairs), node)


def brute_descendants(pairs, node):
    return brute_reachable(children_of(pairs), node)


def brute_depth(pairs, node):
    """Longest edge path from the root, by exhaustive path enumeration."""
    parents = parents_of(pairs)

    def longest(x):
        if not parents[x]:
            return 0
        return 1 + max(longest(p) for p in parents[x])

    return longest(node)


def brute_closure_map(pairs):
    """Inclusive ancestor set of every node, each by independent DFS."""
    parents = parents_of(pairs)
    return {node: brute_reachable(parents, node) for node in parents}


def brute_ncca_from_map(closure, u, v):
    common = closure[u] & closure[v]
    keep = set()
    for a in common:
        if not any(b != a and a in closure[b] for b in common):
            keep.add(a)
    return keep


def brute_ncca(pairs, u, v):
    return brute_ncca_from_map(brute_closure_map(pairs), u, v)


def brute_up_distances(pairs, node):
    parents = parents_of(pairs)
    dist = {node: 0}
    queue = deque((node,))
    while queue:
        x = queue.popleft()
        for p in parents[x]:
            if p not in dist:
                dist[p] = dist[x] + 1
                queue.append(p)
    return dist


def brute_via_lca(pairs, u, v):
    du = brute_up_distances(pairs, u)
    dv = brute_up_distances(pairs, v)
    return min(du[a] + dv[a] for a in du.keys() & dv.keys())


def brute_unconstrained(pairs, u, v):
    neighbors: dict[str, set] = {}
    for child, parent in pairs:
        neighbors.setdefault(child, set()).add(parent)
        neighbors.setdefault(parent, set()).add(child)
    dist = {u: 0}
    queue = deque((u,))
    while queue:
        x = queue.popleft()
        if x == v:
            return dist[x]
        for nxt in neighbors[x]:
            if nxt not in dist:
                dist[nxt] = dist[x] + 1
                queue.append(nxt)
    raise AssertionError("disconnected taxonomy in oracle")


def brute_redundant_edges(pairs):
    """An edge is redundant iff its endpoints stay connected without it."""
    redundant = set()
    for edge in pairs:
        child, parent = edge
        remaining = [e for e in pairs if e != edge]
        if parent in brute_ancestors(remaining, child):
            redundant.add(edge)
    return redundant


def synth_scale_graph_lines(n_classes, rng, max_children=8, max_depth=15):
    """Large synthetic DAG for the performance floor check."""
    lines = []
    depth = {0: 0}
    open_slots = [0]
    child_count = {0: 0}
    for node in range(1, n_classes):
        while True:
            parent = rng.choice(open_slots)
            if depth[parent] < max_depth - 1 and child_count[parent] < max_children:
                break
            open_slots.remove(parent)
        depth[node] = depth[parent] + 1
        child_count[parent] += 1
        child_count[node] = 0
        open_slots.append(node)
        lines.append(f"c{node}\tsubClassOf\tc{parent}")
        # occasional second parent, kept at most as deep as the first so
        # neither the depth cap nor the branching cap can be exceeded
        if rng.random() < 0.05 and parent != 0:
            second = rng.randrange(parent)
            if (
                second != parent
                and depth[second] <= depth[parent]
                and child_count[second] < max_children
            ):
                child_count[second] += 1
                lines.append(f"c{node}\tsubClassOf\tc{second}")
    return lines
