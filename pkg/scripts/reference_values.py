#!/usr/bin/env python3
"""Independent reference computation of the golden-fixture values.

Deliberately does NOT import the smx package: everything here is
recomputed from scratch with brute-force graph walks, so the numbers it
prints are an independent check of the library and of the constants
frozen into tests/test_acceptance.py.
"""

import math

# child -> parents of the seven-class fixture
PARENTS = {
    "root": [],
    "A": ["root"],
    "B": ["root"],
    "C": ["A"],
    "D": ["A"],
    "E": ["C"],
    "F": ["B"],
}
CLASSES = sorted(PARENTS)


def ancestors(c):
    seen = {c}
    stack = [c]
    while stack:
        for p in PARENTS[stack.pop()]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def descendants(c):
    return {x for x in CLASSES if c in ancestors(x)}


def all_root_paths(c):
    """Every upward path from c to the root, as node lists."""
    if not PARENTS[c]:
        return [[c]]
    return [[c] + rest for p in PARENTS[c] for rest in all_root_paths(p)]


def depth(c):
    return max(len(path) - 1 for path in all_root_paths(c))


def up_dist(c):
    dist = {c: 0}
    frontier = [c]
    while frontier:
        nxt = []
        for x in frontier:
            for p in PARENTS[x]:
                if p not in dist:
                    dist[p] = dist[x] + 1
                    nxt.append(p)
        frontier = nxt
    return dist


def via_lca_dist(u, v):
    du, dv = up_dist(u), up_dist(v)
    return min(du[a] + dv[a] for a in set(du) & set(dv))


def seco(c):
    return 1.0 - math.log(len(descendants(c))) / math.log(len(CLASSES))


def mica(u, v):
    common = ancestors(u) & ancestors(v)
    return max(sorted(common), key=seco)


def lca_deepest(u, v):
    common = ancestors(u) & ancestors(v)
    return max(sorted(common), key=depth)


def main():
    values = {}

    values["rada(E,D)"] = via_lca_dist("E", "D")
    values["rada_sim(E,D)"] = 1.0 / (via_lca_dist("E", "D") + 1)

    a = lca_deepest("E", "D")
    values["wu_palmer(E,D)"] = (
        2 * depth(a) / (2 * depth(a) + up_dist("E")[a] + up_dist("D")[a])
    )

    for c in CLASSES:
        values[f"seco({c})"] = seco(c)

    m = mica("E", "D")
    values["lin(E,D)"] = 2 * seco(m) / (seco("E") + seco("D"))
    values["jiang_conrath(E,D)"] = seco("E") + seco("D") - 2 * seco(m)
    values["faith(E,D)"] = seco(m) / (seco("E") + seco("D") - seco(m))

    max_depth = max(depth(c) for c in CLASSES)
    n_nodes_on_path = via_lca_dist("E", "D") + 1
    values["leacock_chodorow(E,D)"] = -math.log(n_nodes_on_path / (2 * max_depth))

    ae, ad = ancestors("E"), ancestors("D")
    values["cmatch(E,D)"] = len(ae & ad) / len(ae | ad)
    values["simui({E},{D})"] = len(ae & ad) / len(ae | ad)
    values["nto({E},{D})"] = len(ae & ad) / min(len(ae), len(ad))
    values["simgic({E},{D})"] = sum(seco(c) for c in ae & ad) / sum(
        seco(c) for c in ae | ad
    )

    def lin(u, v):
        m = mica(u, v)
        return 2 * seco(m) / (seco(u) + seco(v))

    # best-match average of {C, D} against {E}
    forward = (lin("C", "E") + lin("D", "E")) / 2
    backward = max(lin("E", "C"), lin("E", "D"))
    values["bma({C,D},{E})"] = (forward + backward) / 2

    for key, value in values.items():
        print(f"{key:28s} {value:.6f}")


if __name__ == "__main__":
    main()
