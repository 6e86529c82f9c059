"""Pairwise class similarity and distance measures behind one entry point.

Each measure is declared in the MEASURES catalog together with the flags
(polarity, normalization, symmetry, identity of the indiscernibles) that
the axiom audit verifies. Measures that count shortest paths refuse a
taxonomy with redundant edges because those shortcuts silently
underestimate distances; pass allow_unreduced=True to study that effect.

Notes on the few places where published equations needed a decision:
  - slimani and wang_dca follow the equations as published even though
    they exceed the [0, 1] range sometimes claimed for them, so they are
    declared unnormalized here.
  - psec can go negative when IC(u) + IC(v) > 3 IC(MICA); raw values are
    reported, never clamped.
  - rel_schlicker recovers the MICA probability as exp(-theta), exact for
    log-probability ICs and a monotone proxy for the normalized ones.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Mapping

from .errors import (
    ContractError,
    DegenerateTaxonomyError,
    InfinityError,
    RedundancyError,
    UsageError,
)
from .graph import NodeId, TaxonomyView
from .specificity import ClassUsage, ThetaEstimator


class Polarity(enum.Enum):
    SIMILARITY = "similarity"
    DISTANCE = "distance"


class ConversionRule(enum.Enum):
    ONE_MINUS = "one_minus"
    RATIO = "ratio"
    NEG_LOG = "neg_log"
    RECIPROCAL = "reciprocal"


@dataclass(frozen=True)
class MeasureValue:
    value: float
    polarity: Polarity
    normalized: bool
    degenerate: bool = False


@dataclass(frozen=True)
class ParamSpec:
    default: float
    lo: float | None = None
    hi: float | None = None
    choices: tuple[float, ...] | None = None


@dataclass(frozen=True)
class MeasureInfo:
    polarity: Polarity
    normalized: bool
    params: Mapping[str, ParamSpec] = field(default_factory=dict)
    needs_theta: bool = False
    needs_usage: bool = False
    path_based: bool = False
    ioi: bool = False
    # identity of the indiscernibles degenerates on zero-theta classes
    root_degenerate: bool = False
    # pairs of parameter names whose inequality makes the measure asymmetric,
    # or (name, pivot) making it asymmetric when params[name] != pivot
    asym_when_differ: tuple[tuple[str, str], ...] = ()
    asym_when_not: tuple[tuple[str, float], ...] = ()

    def is_symmetric(self, params: Mapping[str, float]) -> bool:
        for a, b in self.asym_when_differ:
            if params[a] != params[b]:
                return False
        for name, pivot in self.asym_when_not:
            if params[name] != pivot:
                return False
        return True


MEASURES: dict[str, MeasureInfo] = {
    # structural
    "rada": MeasureInfo(Polarity.DISTANCE, False, path_based=True, ioi=True),
    "rada_sim": MeasureInfo(Polarity.SIMILARITY, True, path_based=True, ioi=True),
    "resnik_edge": MeasureInfo(Polarity.SIMILARITY, False, path_based=True, ioi=True),
    "leacock_chodorow": MeasureInfo(Polarity.SIMILARITY, False, path_based=True, ioi=True),
    "wu_palmer": MeasureInfo(
        Polarity.SIMILARITY, True, path_based=True, ioi=True, root_degenerate=True
    ),
    "pekar_staab": MeasureInfo(
        Polarity.SIMILARITY, True, path_based=True, ioi=True, root_degenerate=True
    ),
    "zhong": MeasureInfo(
        Polarity.DISTANCE, True, params={"k": ParamSpec(2.0, lo=1.0)}, ioi=True
    ),
    "li": MeasureInfo(
        Polarity.SIMILARITY,
        True,
        params={"alpha": ParamSpec(0.2, lo=0.0), "beta": ParamSpec(0.6)},
        path_based=True,
    ),
    "slimani": MeasureInfo(
        Polarity.SIMILARITY,
        False,
        params={"lam": ParamSpec(1.0, choices=(0.0, 1.0))},
        path_based=True,
        root_degenerate=True,
    ),
    "shenoy": MeasureInfo(
        Polarity.SIMILARITY,
        False,
        params={"lam": ParamSpec(1.0)},
        path_based=True,
        root_degenerate=True,
    ),
    # information theoretical
    "resnik": MeasureInfo(Polarity.SIMILARITY, False, needs_theta=True),
    "lin": MeasureInfo(
        Polarity.SIMILARITY, True, needs_theta=True, ioi=True, root_degenerate=True
    ),
    "jiang_conrath": MeasureInfo(Polarity.DISTANCE, False, needs_theta=True, ioi=True),
    "nunivers": MeasureInfo(
        Polarity.SIMILARITY, True, needs_theta=True, ioi=True, root_degenerate=True
    ),
    "psec": MeasureInfo(Polarity.SIMILARITY, False, needs_theta=True),
    "faith": MeasureInfo(
        Polarity.SIMILARITY, True, needs_theta=True, ioi=True, root_degenerate=True
    ),
    "rel_schlicker": MeasureInfo(Polarity.SIMILARITY, True, needs_theta=True),
    "sim_dic": MeasureInfo(
        Polarity.SIMILARITY, True, needs_theta=True, ioi=True, root_degenerate=True
    ),
    "jac_anc": MeasureInfo(
        Polarity.SIMILARITY, True, needs_theta=True, ioi=True, root_degenerate=True
    ),
    "lin_grasm": MeasureInfo(
        Polarity.SIMILARITY, True, needs_theta=True, ioi=True, root_degenerate=True
    ),
    "wang_dca": MeasureInfo(
        Polarity.SIMILARITY,
        False,
        params={"path_cap": ParamSpec(100_000.0, lo=1.0)},
        path_based=True,
        root_degenerate=True,
    ),
    # feature based
    "cmatch": MeasureInfo(Polarity.SIMILARITY, True, ioi=True),
    "dice_anc": MeasureInfo(Polarity.SIMILARITY, True, ioi=True),
    "bulskov": MeasureInfo(
        Polarity.SIMILARITY,
        True,
        params={"alpha": ParamSpec(0.5, lo=0.0, hi=1.0)},
        ioi=True,
        asym_when_not=(("alpha", 0.5),),
    ),
    "rodriguez_egenhofer": MeasureInfo(
        Polarity.SIMILARITY,
        True,
        params={"gamma": ParamSpec(0.5, lo=0.0, hi=1.0)},
        ioi=True,
        asym_when_not=(("gamma", 0.5),),
    ),
    "sanchez": MeasureInfo(Polarity.DISTANCE, True, ioi=True),
    "tversky_ratio": MeasureInfo(
        Polarity.SIMILARITY,
        True,
        params={"alpha": ParamSpec(1.0, lo=0.0), "beta": ParamSpec(1.0, lo=0.0)},
        ioi=True,
        asym_when_differ=(("alpha", "beta"),),
    ),
    "tversky_contrast": MeasureInfo(
        Polarity.SIMILARITY,
        False,
        params={
            "gamma": ParamSpec(1.0, lo=0.0),
            "alpha": ParamSpec(1.0, lo=0.0),
            "beta": ParamSpec(1.0, lo=0.0),
        },
        asym_when_differ=(("alpha", "beta"),),
    ),
    "jaccard_ext": MeasureInfo(Polarity.SIMILARITY, True, needs_usage=True, ioi=True),
    "damato_ext": MeasureInfo(Polarity.SIMILARITY, True, needs_usage=True),
    # hybrid
    "jc_hybrid": MeasureInfo(
        Polarity.DISTANCE,
        False,
        params={
            "alpha": ParamSpec(0.0, lo=0.0),
            "beta": ParamSpec(1.0, lo=0.0, hi=1.0),
            "predicate_weight": ParamSpec(1.0, lo=0.0),
        },
        needs_theta=True,
        path_based=True,
        ioi=True,
    ),
}


@dataclass(frozen=True)
class PairwiseMeasureSpec:
    name: str
    params: tuple[tuple[str, float], ...] = ()
    theta: ThetaEstimator | None = None
    usage: ClassUsage | None = None

    def param(self, key: str) -> float:
        return dict(self.params)[key]

    @property
    def info(self) -> MeasureInfo:
        return MEASURES[self.name]

    def with_bindings(self, theta=None, usage=None) -> "PairwiseMeasureSpec":
        return replace(
            self, theta=theta or self.theta, usage=usage or self.usage
        )


def pairwise_measure(
    name: str,
    theta: ThetaEstimator | None = None,
    usage: ClassUsage | None = None,
    **params: float,
) -> PairwiseMeasureSpec:
    """Validated constructor for a measure spec; unknown names and
    out-of-range parameters fail here, not at evaluation time."""
    info = MEASURES.get(name)
    if info is None:
        raise ContractError(
            f"unknown measure {name!r}; known measures: {', '.join(sorted(MEASURES))}"
        )
    resolved = {}
    for key, spec in info.params.items():
        value = float(params.pop(key, spec.default))
        if spec.choices is not None and value not in spec.choices:
            raise ContractError(
                f"{name}: parameter {key} must be one of {spec.choices}"
            )
        if spec.lo is not None and value < spec.lo:
            raise ContractError(f"{name}: parameter {key} must be >= {spec.lo}")
        if spec.hi is not None and value > spec.hi:
            raise ContractError(f"{name}: parameter {key} must be <= {spec.hi}")
        resolved[key] = value
    if name == "zhong" and resolved["k"] <= 1.0:
        raise ContractError("zhong: parameter k must be > 1")
    if name == "li" and resolved["beta"] <= 0.0:
        raise ContractError("li: parameter beta must be > 0")
    if params:
        raise ContractError(f"{name}: unknown parameters {sorted(params)}")
    if info.needs_theta and theta is None:
        raise ContractError(f"measure {name!r} needs a specificity estimator")
    if info.needs_usage and usage is None:
        raise ContractError(f"measure {name!r} needs class usage statistics")
    return PairwiseMeasureSpec(
        name=name, params=tuple(sorted(resolved.items())), theta=theta, usage=usage
    )


def is_symmetric(spec: PairwiseMeasureSpec) -> bool:
    return spec.info.is_symmetric(dict(spec.params))


# -- evaluation helpers ------------------------------------------------------


def _sim(value, normalized=True, degenerate=False):
    return MeasureValue(value, Polarity.SIMILARITY, normalized, degenerate)


def _dist(value, normalized=False, degenerate=False):
    return MeasureValue(value, Polarity.DISTANCE, normalized, degenerate)


def _theta_triple(spec, t, u, v):
    theta = spec.theta
    a = t.mica(theta, u, v)
    return theta(u), theta(v), theta(a), a


def _instances(spec, t, c):
    members = spec.usage.instances(c)
    if not members:
        raise UsageError(f"class {t.label(c)} has no instances")
    return members


# -- measure implementations -------------------------------------------------


def _eval_rada(spec, t, u, v):
    return _dist(float(t.shortest_path(u, v)))


def _eval_rada_sim(spec, t, u, v):
    return _sim(1.0 / (t.shortest_path(u, v) + 1.0))


def _eval_resnik_edge(spec, t, u, v):
    return _sim(2.0 * t.max_depth - t.shortest_path(u, v), normalized=False)


def _eval_leacock_chodorow(spec, t, u, v):
    if t.max_depth == 0:
        raise DegenerateTaxonomyError("leacock_chodorow needs max depth >= 1")
    # N counts the nodes on the joint path through the constraining ancestor
    n_nodes = t.shortest_path(u, v) + 1
    return _sim(-math.log(n_nodes / (2.0 * t.max_depth)), normalized=False)


def _eval_wu_palmer(spec, t, u, v):
    a = t.deepest_common_ancestor(u, v)
    shared = 2.0 * t.depth(a)
    den = shared + t.longest_up_distance(u, a) + t.longest_up_distance(v, a)
    if den == 0:
        return _sim(0.0, degenerate=True)
    return _sim(shared / den)


def _eval_pekar_staab(spec, t, u, v):
    a = t.deepest_common_ancestor(u, v)
    shared = float(t.depth(a))
    den = t.longest_up_distance(u, a) + t.longest_up_distance(v, a) + shared
    if den == 0:
        return _sim(0.0, degenerate=True)
    return _sim(shared / den)


def _eval_zhong(spec, t, u, v):
    k = spec.param("k")
    milestone = lambda c: 0.5 * k ** (-t.depth(c))
    a = t.deepest_common_ancestor(u, v)
    return _dist(2.0 * milestone(a) - milestone(u) - milestone(v), normalized=True)


def _eval_li(spec, t, u, v):
    alpha, beta = spec.param("alpha"), spec.param("beta")
    a = t.deepest_common_ancestor(u, v)
    sp = t.shortest_path(u, v)
    return _sim(math.exp(-alpha * sp) * math.tanh(beta * t.depth(a)))


def _eval_slimani(spec, t, u, v):
    lam = spec.param("lam")
    wp = _eval_wu_palmer(spec, t, u, v)
    pf = (1.0 - lam) * (min(t.depth(u), t.depth(v)) - t.max_depth) + lam / (
        t.depth(u) + t.depth(v) + 1.0
    )
    return _sim(wp.value * pf, normalized=False, degenerate=wp.degenerate)


def _eval_shenoy(spec, t, u, v):
    lam = spec.param("lam")
    depth_sum = t.depth(u) + t.depth(v)
    if depth_sum == 0:
        return _sim(0.0, normalized=False, degenerate=True)
    walk = t.path_length_with_reversal(u, v)
    value = 2.0 * t.max_depth * math.exp(-lam * walk / t.max_depth) / depth_sum
    return _sim(value, normalized=False)


def _eval_resnik(spec, t, u, v):
    _, _, shared, _ = _theta_triple(spec, t, u, v)
    return _sim(shared, normalized=False)


def _eval_lin(spec, t, u, v):
    iu, iv, shared, _ = _theta_triple(spec, t, u, v)
    if iu + iv == 0:
        return _sim(0.0, degenerate=True)
    return _sim(2.0 * shared / (iu + iv))


def _eval_jiang_conrath(spec, t, u, v):
    iu, iv, shared, _ = _theta_triple(spec, t, u, v)
    return _dist(iu + iv - 2.0 * shared)


def _eval_nunivers(spec, t, u, v):
    iu, iv, shared, _ = _theta_triple(spec, t, u, v)
    top = max(iu, iv)
    if top == 0:
        return _sim(0.0, degenerate=True)
    return _sim(shared / top)


def _eval_psec(spec, t, u, v):
    iu, iv, shared, _ = _theta_triple(spec, t, u, v)
    return _sim(3.0 * shared - iu - iv, normalized=False)


def _eval_faith(spec, t, u, v):
    iu, iv, shared, _ = _theta_triple(spec, t, u, v)
    den = iu + iv - shared
    if den == 0:
        return _sim(0.0, degenerate=True)
    return _sim(shared / den)


def _eval_rel_schlicker(spec, t, u, v):
    iu, iv, shared, _ = _theta_triple(spec, t, u, v)
    if iu + iv == 0:
        return _sim(0.0, degenerate=True)
    lin = 2.0 * shared / (iu + iv)
    return _sim(lin * (1.0 - math.exp(-shared)))


def _eval_sim_dic(spec, t, u, v):
    theta = spec.theta
    common = sum(theta(c) for c in t.common_ancestors(u, v))
    den = sum(theta(c) for c in t.ancestors(u)) + sum(theta(c) for c in t.ancestors(v))
    if den == 0:
        return _sim(0.0, degenerate=True)
    return _sim(2.0 * common / den)


def _eval_jac_anc(spec, t, u, v):
    theta = spec.theta
    common = sum(theta(c) for c in t.common_ancestors(u, v))
    union = sum(theta(c) for c in t.ancestors(u) | t.ancestors(v))
    if union == 0:
        return _sim(0.0, degenerate=True)
    return _sim(common / union)


def _eval_lin_grasm(spec, t, u, v):
    theta = spec.theta
    iu, iv = theta(u), theta(v)
    dcas = t.ncca(u, v)
    avg = sum(theta(c) for c in dcas) / len(dcas)
    if iu + iv == 0:
        return _sim(0.0, degenerate=True)
    return _sim(2.0 * avg / (iu + iv))


def _eval_wang_dca(spec, t, u, v):
    cap = int(spec.param("path_cap"))
    stats_u = t.up_path_stats(u, cap)
    stats_v = t.up_path_stats(v, cap)
    dcas = t.ncca(u, v)
    total = 0.0
    for a in dcas:
        nu, lu = stats_u[a]
        nv, lv = stats_v[a]
        if lu == 0 or lv == 0:
            return _sim(0.0, normalized=False, degenerate=True)
        mean_u = lu / nu
        mean_v = lv / nv
        total += 2.0 * t.depth(a) ** 2 / (mean_u * mean_v)
    return _sim(total / len(dcas), normalized=False)


def _eval_cmatch(spec, t, u, v):
    au, av = t.ancestors(u), t.ancestors(v)
    return _sim(len(au & av) / len(au | av))


def _eval_dice_anc(spec, t, u, v):
    au, av = t.ancestors(u), t.ancestors(v)
    return _sim(2.0 * len(au & av) / (len(au) + len(av)))


def _eval_bulskov(spec, t, u, v):
    alpha = spec.param("alpha")
    au, av = t.ancestors(u), t.ancestors(v)
    common = len(au & av)
    return _sim(alpha * common / len(au) + (1.0 - alpha) * common / len(av))


def _eval_rodriguez_egenhofer(spec, t, u, v):
    gamma = spec.param("gamma")
    au, av = t.ancestors(u), t.ancestors(v)
    common = len(au & av)
    den = gamma * len(au - av) + (1.0 - gamma) * len(av - au) + common
    return _sim(common / den)


def _eval_sanchez_dist(spec, t, u, v):
    au, av = t.ancestors(u), t.ancestors(v)
    distinct = len(au - av) + len(av - au)
    # base-2 log is part of the published normalization, not the global flag
    return _dist(math.log2(1.0 + distinct / (distinct + len(au & av))), normalized=True)


def _eval_tversky_ratio(spec, t, u, v):
    alpha, beta = spec.param("alpha"), spec.param("beta")
    au, av = t.ancestors(u), t.ancestors(v)
    common = len(au & av)
    den = alpha * len(au - av) + beta * len(av - au) + common
    if den == 0:
        return _sim(0.0, degenerate=True)
    return _sim(common / den)


def _eval_tversky_contrast(spec, t, u, v):
    gamma, alpha, beta = (
        spec.param("gamma"),
        spec.param("alpha"),
        spec.param("beta"),
    )
    au, av = t.ancestors(u), t.ancestors(v)
    value = gamma * len(au & av) - alpha * len(au - av) - beta * len(av - au)
    return _sim(value, normalized=False)


def _eval_jaccard_ext(spec, t, u, v):
    iu = _instances(spec, t, u)
    iv = _instances(spec, t, v)
    return _sim(len(iu & iv) / len(iu | iv))


def _eval_damato_ext(spec, t, u, v):
    iu = _instances(spec, t, u)
    iv = _instances(spec, t, v)
    # the constraining ancestor is the extensionally most informative one
    common = t.common_ancestors(u, v)
    a = min(common, key=lambda c: (spec.usage.count(c), t.label(c)))
    ia = _instances(spec, t, a)
    smaller = min(len(iu), len(iv))
    ratio = smaller / len(ia)
    return _sim(ratio * (1.0 - len(ia) / spec.usage.total) * (1.0 - ratio))


def _eval_jc_hybrid(spec, t, u, v):
    alpha, beta = spec.param("alpha"), spec.param("beta")
    predicate_weight = spec.param("predicate_weight")
    theta = spec.theta
    a = t.mica(theta, u, v)
    mean_density = len(t.edges) / len(t.class_ids)
    edges = set(t.shortest_up_path_edges(u, a)) | set(t.shortest_up_path_edges(v, a))
    total = 0.0
    for child, parent in edges:
        density = beta + (1.0 - beta) * mean_density / len(t.children(parent))
        # depth is taken one-based so the factor stays finite at the root
        d = t.depth(parent) + 1
        depth_factor = ((d + 1.0) / d) ** alpha
        total += density * depth_factor * (theta(child) - theta(parent)) * predicate_weight
    return _dist(total)


_EVALUATORS = {
    "rada": _eval_rada,
    "rada_sim": _eval_rada_sim,
    "resnik_edge": _eval_resnik_edge,
    "leacock_chodorow": _eval_leacock_chodorow,
    "wu_palmer": _eval_wu_palmer,
    "pekar_staab": _eval_pekar_staab,
    "zhong": _eval_zhong,
    "li": _eval_li,
    "slimani": _eval_slimani,
    "shenoy": _eval_shenoy,
    "resnik": _eval_resnik,
    "lin": _eval_lin,
    "jiang_conrath": _eval_jiang_conrath,
    "nunivers": _eval_nunivers,
    "psec": _eval_psec,
    "faith": _eval_faith,
    "rel_schlicker": _eval_rel_schlicker,
    "sim_dic": _eval_sim_dic,
    "jac_anc": _eval_jac_anc,
    "lin_grasm": _eval_lin_grasm,
    "wang_dca": _eval_wang_dca,
    "cmatch": _eval_cmatch,
    "dice_anc": _eval_dice_anc,
    "bulskov": _eval_bulskov,
    "rodriguez_egenhofer": _eval_rodriguez_egenhofer,
    "sanchez": _eval_sanchez_dist,
    "tversky_ratio": _eval_tversky_ratio,
    "tversky_contrast": _eval_tversky_contrast,
    "jaccard_ext": _eval_jaccard_ext,
    "damato_ext": _eval_damato_ext,
    "jc_hybrid": _eval_jc_hybrid,
}


def eval_pairwise(
    spec: PairwiseMeasureSpec,
    taxonomy: TaxonomyView,
    u: NodeId,
    v: NodeId,
    allow_unreduced: bool = False,
) -> MeasureValue:
    """Evaluate one measure on a pair of classes.

    Path-based measures raise RedundancyError on a taxonomy that still
    carries redundant subClassOf edges unless allow_unreduced is set.
    """
    info = spec.info
    if info.path_based and not taxonomy.is_reduced and not allow_unreduced:
        offender = next(iter(taxonomy.redundant_edges))
        raise RedundancyError(
            f"taxonomy has redundant subClassOf edges "
            f"(e.g. {taxonomy.label(offender[0])} < {taxonomy.label(offender[1])}); "
            f"run the transitive reduction first, {spec.name} would "
            "underestimate distances"
        )
    taxonomy._check(u)
    taxonomy._check(v)
    return _EVALUATORS[spec.name](spec, taxonomy, u, v)


def convert(mv: MeasureValue, target: Polarity, rule: ConversionRule) -> MeasureValue:
    """Distance/similarity conversions: 1-s, (1-s)/s, -ln s and 1/(d+1)."""
    if rule is ConversionRule.RECIPROCAL:
        if mv.polarity is not Polarity.DISTANCE or target is not Polarity.SIMILARITY:
            raise ContractError("reciprocal converts a distance to a similarity")
        return MeasureValue(1.0 / (mv.value + 1.0), Polarity.SIMILARITY, True, mv.degenerate)
    if mv.polarity is not Polarity.SIMILARITY or not mv.normalized:
        raise ContractError(f"{rule.value} needs a normalized similarity input")
    if target is not Polarity.DISTANCE:
        raise ContractError(f"{rule.value} produces a distance")
    if rule is ConversionRule.ONE_MINUS:
        return MeasureValue(1.0 - mv.value, Polarity.DISTANCE, True, mv.degenerate)
    if rule is ConversionRule.RATIO:
        if mv.value == 0:
            raise InfinityError("ratio conversion of zero similarity is infinite")
        return MeasureValue((1.0 - mv.value) / mv.value, Polarity.DISTANCE, False, mv.degenerate)
    if rule is ConversionRule.NEG_LOG:
        if mv.value == 0:
            raise InfinityError("neg-log of zero similarity is infinite")
        return MeasureValue(-math.log(mv.value), Polarity.DISTANCE, False, mv.degenerate)
    raise ContractError(f"unknown conversion rule {rule!r}")
