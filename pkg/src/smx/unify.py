"""Abstract measure forms parameterized by a specificity function and a
commonality rule, with named instantiations.

The shared-feature mass f(U and V) is either the theta of the ancestor
maximizing theta (mica rule) or the summed theta over all shared
ancestors (salience rule); differences follow as f(U) - f(U and V). With
theta = raw depth the forms collapse to the classic structural measures
on trees, with theta = IC to the information theoretical ones.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Mapping

from .errors import ContractError
from .graph import NodeId, TaxonomyView
from .pairwise import MeasureValue, Polarity
from .specificity import ThetaEstimator


class Commonality(enum.Enum):
    MICA_THETA = "mica_theta"
    SHARED_ANCESTOR_SALIENCE = "shared_ancestor_salience"


FORMS = ("abstract_dist", "general_dice", "sigma_alpha", "sigma_beta", "ratio", "contrast")

_THETA_HINTS = {
    "lin": "ic",
    "wu_palmer_tree": "depth",
    "faith": "ic",
    "jiang_conrath": "ic",
    "jaccard": None,
    "dice": None,
    "sokal_sneath": None,
    "simpson": None,
    "ochiai": None,
}


@dataclass(frozen=True)
class AbstractForm:
    kind: str
    params: tuple[tuple[str, float], ...] = ()
    theta: ThetaEstimator | None = None
    commonality: Commonality = Commonality.MICA_THETA
    theta_hint: str | None = None

    def param(self, key: str) -> float:
        return dict(self.params)[key]

    def with_theta(self, theta: ThetaEstimator) -> "AbstractForm":
        return replace(self, theta=theta)


def abstract_form(
    kind: str,
    theta: ThetaEstimator | None = None,
    commonality: Commonality = Commonality.MICA_THETA,
    **params: float,
) -> AbstractForm:
    if kind not in FORMS:
        raise ContractError(f"unknown abstract form {kind!r}; known: {', '.join(FORMS)}")
    defaults: dict[str, float] = {}
    if kind == "sigma_alpha":
        defaults = {"alpha": params.pop("alpha", 0.0)}
    elif kind == "sigma_beta":
        beta = float(params.pop("beta", 2.0))
        if beta <= 0:
            raise ContractError("sigma_beta needs beta > 0")
        defaults = {"beta": beta}
    elif kind == "ratio":
        defaults = {
            "alpha": float(params.pop("alpha", 1.0)),
            "beta": float(params.pop("beta", 1.0)),
        }
        if defaults["alpha"] < 0 or defaults["beta"] < 0:
            raise ContractError("ratio model needs alpha, beta >= 0")
    elif kind == "contrast":
        defaults = {
            "gamma": float(params.pop("gamma", 1.0)),
            "alpha": float(params.pop("alpha", 1.0)),
            "beta": float(params.pop("beta", 1.0)),
        }
        if min(defaults.values()) < 0:
            raise ContractError("contrast model needs gamma, alpha, beta >= 0")
    if params:
        raise ContractError(f"{kind}: unknown parameters {sorted(params)}")
    return AbstractForm(
        kind=kind,
        params=tuple(sorted(defaults.items())),
        theta=theta,
        commonality=commonality,
    )


def instantiate(name: str) -> AbstractForm:
    """Named concrete bindings; the theta slot stays open for the caller.

    The theta_hint records the estimator family the classic reading uses:
    raw depth for the tree form of Wu and Palmer, an IC for Lin, Faith and
    the Jiang and Conrath distance.
    """
    key = name.lower()
    table: Mapping[str, AbstractForm] = {
        "lin": abstract_form("general_dice"),
        "wu_palmer_tree": abstract_form("general_dice"),
        "wupalmertree": abstract_form("general_dice"),
        "faith": abstract_form("ratio", alpha=1.0, beta=1.0),
        "jiang_conrath": abstract_form("abstract_dist"),
        "jiangconrathdist": abstract_form("abstract_dist"),
        "jaccard": abstract_form("sigma_beta", beta=1.0),
        "dice": abstract_form("sigma_beta", beta=2.0),
        "sokal_sneath": abstract_form("sigma_beta", beta=0.5),
        "sokalsneath": abstract_form("sigma_beta", beta=0.5),
        "simpson": abstract_form("sigma_alpha", alpha=-math.inf),
        "ochiai": abstract_form("sigma_alpha", alpha=0.0),
    }
    if key not in table:
        raise ContractError(f"unknown instantiation {name!r}; known: {', '.join(sorted(table))}")
    hint = _THETA_HINTS.get(key, _THETA_HINTS.get(key.replace("dist", "")))
    return replace(table[key], theta_hint=hint)


def _power_mean(a: float, b: float, alpha: float) -> float:
    """Power mean of order alpha; the alpha = 0 case is the geometric mean
    by continuity and the infinite orders are min and max.

    Factoring out the dominant operand keeps extreme orders from
    overflowing float range.
    """
    if math.isinf(alpha):
        return min(a, b) if alpha < 0 else max(a, b)
    if alpha == 0.0:
        return math.sqrt(a * b)
    low, high = min(a, b), max(a, b)
    if alpha < 0:
        if low == 0.0:
            return 0.0
        ratio = (high / low) ** alpha  # in (0, 1]
        return low * ((1.0 + ratio) / 2.0) ** (1.0 / alpha)
    if high == 0.0:
        return 0.0
    ratio = (low / high) ** alpha  # in [0, 1]
    return high * ((1.0 + ratio) / 2.0) ** (1.0 / alpha)


def _components(form: AbstractForm, t: TaxonomyView, u: NodeId, v: NodeId):
    theta = form.theta
    if form.commonality is Commonality.MICA_THETA:
        shared = theta(t.mica(theta, u, v))
        return theta(u), theta(v), shared
    mass = lambda nodes: sum(theta(c) for c in nodes)
    au, av = t.ancestors(u), t.ancestors(v)
    return mass(au), mass(av), mass(au & av)


def eval_abstract(form: AbstractForm, t: TaxonomyView, u: NodeId, v: NodeId) -> MeasureValue:
    """Evaluate an abstract form on a pair of classes."""
    if form.theta is None:
        raise ContractError("abstract form has no bound specificity estimator")
    if not form.theta.is_monotone:
        raise ContractError("bound specificity estimator is not monotone")
    f_u, f_v, f_shared = _components(form, t, u, v)

    if form.kind == "abstract_dist":
        return MeasureValue(f_u + f_v - 2.0 * f_shared, Polarity.DISTANCE, False)
    if form.kind == "general_dice":
        if f_u + f_v == 0:
            return MeasureValue(0.0, Polarity.SIMILARITY, True, degenerate=True)
        return MeasureValue(2.0 * f_shared / (f_u + f_v), Polarity.SIMILARITY, True)
    if form.kind == "sigma_alpha":
        den = _power_mean(f_u, f_v, form.param("alpha"))
        if den == 0:
            return MeasureValue(0.0, Polarity.SIMILARITY, True, degenerate=True)
        return MeasureValue(f_shared / den, Polarity.SIMILARITY, True)
    if form.kind == "sigma_beta":
        beta = form.param("beta")
        den = f_u + f_v + (beta - 2.0) * f_shared
        if den == 0:
            return MeasureValue(0.0, Polarity.SIMILARITY, True, degenerate=True)
        return MeasureValue(beta * f_shared / den, Polarity.SIMILARITY, True)
    if form.kind == "ratio":
        den = (
            form.param("alpha") * (f_u - f_shared)
            + form.param("beta") * (f_v - f_shared)
            + f_shared
        )
        if den == 0:
            return MeasureValue(0.0, Polarity.SIMILARITY, True, degenerate=True)
        return MeasureValue(f_shared / den, Polarity.SIMILARITY, True)
    value = (
        form.param("gamma") * f_shared
        - form.param("alpha") * (f_u - f_shared)
        - form.param("beta") * (f_v - f_shared)
    )
    return MeasureValue(value, Polarity.SIMILARITY, False)
