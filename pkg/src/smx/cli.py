"""Command line entry point.

Subcommands: preprocess, ic, sim, groupsim, abstract, rel, bench.

Exit status is 0 on success, 1 on a usage error and 2 on a data or
contract error. Results go only to the output path (or standard output);
diagnostics go to standard error. Measure and estimator selections share
one grammar: name[:key=value,...], for example lin:ic=seco or
li:alpha=0.2,beta=0.6.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from contextlib import contextmanager

from . import bench as bench_mod
from . import ingest, preprocess, relatedness, unify
from .errors import SmxError, UsageError as DataUsageError
from .graph import SemanticGraph, TaxonomyView
from .groupwise import DIRECT, STRATEGIES, eval_groupwise, groupwise_measure
from .pairwise import MEASURES, eval_pairwise, pairwise_measure
from .specificity import ESTIMATOR_KINDS, build_estimator, class_usage

log = logging.getLogger("smx")


class CommandLineError(Exception):
    """Bad invocation; maps to exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CommandLineError(f"{self.prog}: {message}")


# -- selection grammar -------------------------------------------------------

_MEASURE_ALIASES = {name.replace("_", ""): name for name in MEASURES}
_MEASURE_ALIASES.update({name: name for name in MEASURES})
_MEASURE_ALIASES.update({"jc": "jiang_conrath", "lc": "leacock_chodorow"})


def resolve_measure_name(name: str) -> str:
    key = name.lower()
    resolved = _MEASURE_ALIASES.get(key) or _MEASURE_ALIASES.get(key.replace("_", ""))
    if resolved is None:
        raise CommandLineError(
            f"unknown measure {name!r}; valid measures: {', '.join(sorted(MEASURES))}"
        )
    return resolved


def parse_selector(token: str) -> tuple[str, dict[str, str]]:
    """Split name[:key=value,...] into the name and its raw parameters."""
    name, _, rest = token.partition(":")
    name = name.strip()
    if not name:
        raise CommandLineError(f"empty selector in {token!r}")
    params: dict[str, str] = {}
    if rest:
        for piece in rest.split(","):
            key, eq, value = piece.partition("=")
            if not eq or not key.strip() or not value.strip():
                raise CommandLineError(f"bad parameter {piece!r} in {token!r}")
            params[key.strip()] = value.strip()
    return name, params


def split_measure_list(text: str) -> list[str]:
    """Split a comma-separated measure list, keeping key=value fragments
    attached to the measure they belong to."""
    tokens: list[str] = []
    for fragment in text.split(","):
        if "=" in fragment and tokens:
            tokens[-1] += "," + fragment
        else:
            tokens.append(fragment)
    return [t for t in (tok.strip() for tok in tokens) if t]


def _float_params(params: dict[str, str], context: str) -> dict[str, float]:
    out = {}
    for key, value in params.items():
        try:
            out[key] = float(value)
        except ValueError:
            raise CommandLineError(
                f"{context}: parameter {key}={value!r} is not a number"
            ) from None
    return out


# -- shared loading steps ----------------------------------------------------


def _log_base(args) -> float | None:
    raw = getattr(args, "log_base", None)
    if raw is None or raw == "e":
        return None
    try:
        base = float(raw)
    except ValueError:
        raise CommandLineError(f"--log-base must be a number or 'e', got {raw!r}") from None
    if base <= 0 or base == 1.0:
        raise CommandLineError("--log-base must be positive and not 1")
    return base


def _load_graph(args) -> SemanticGraph:
    return ingest.parse_graph(args.graph)


def _taxonomy(graph: SemanticGraph) -> TaxonomyView:
    return preprocess.taxonomic_reduction(graph)


def _usage_from(args, graph, taxonomy):
    if not getattr(args, "annotations", None):
        return None
    annotations = ingest.parse_annotations(args.annotations, graph)
    return class_usage(taxonomy, annotations)


def _estimator(args, token, taxonomy, usage):
    kind, raw = parse_selector(token)
    if kind not in ESTIMATOR_KINDS:
        raise CommandLineError(
            f"unknown estimator {kind!r}; valid estimators: {', '.join(ESTIMATOR_KINDS)}"
        )
    params = _float_params(raw, f"estimator {kind}")
    if kind in ("resnik", "idf") and usage is None:
        raise DataUsageError(f"estimator {kind!r} needs --annotations")
    return build_estimator(
        kind,
        taxonomy,
        usage=usage,
        base=_log_base(args),
        smooth=getattr(args, "smooth", False),
        **params,
    )


def _pairwise_spec(args, token, taxonomy, graph):
    name, raw = parse_selector(token)
    name = resolve_measure_name(name)
    info = MEASURES[name]
    ic_token = raw.pop("ic", None)
    params = _float_params(raw, f"measure {name}")
    theta = None
    usage = None
    if info.needs_theta or info.needs_usage:
        usage = _usage_from(args, graph, taxonomy)
    if info.needs_theta:
        token = ic_token or getattr(args, "ic", None)
        if token is None:
            log.info("measure %s: no estimator selected, defaulting to seco", name)
            token = "seco"
        theta = _estimator(args, token, taxonomy, usage)
    if info.needs_usage and usage is None:
        raise DataUsageError(f"measure {name!r} needs --annotations")
    return pairwise_measure(name, theta=theta, usage=usage, **params)


def _read_pairs(path):
    pairs = []
    for lineno, line in ingest._lines(path):
        fields = line.split("\t")
        if len(fields) < 2:
            raise ingest.ParseError("expected two tab-separated identifiers", lineno)
        pairs.append((fields[0].strip(), fields[1].strip()))
    return pairs


@contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            yield handle


def _fmt(value: float) -> str:
    return f"{value:.12g}"


# -- subcommands -------------------------------------------------------------


def _cmd_preprocess(args) -> int:
    graph = _load_graph(args)
    taxonomy = _taxonomy(graph)
    _, report = preprocess.transitive_reduction(taxonomy)
    removed = {
        (graph.node(r.subject), r.predicate, graph.node(r.object))
        for r in report.removed_edges
    }
    kept = graph.edges - removed
    cleaned = SemanticGraph(
        labels=[graph.label(i) for i in range(graph.n_nodes)],
        classes=graph.classes,
        instances=graph.instances,
        predicates=graph.predicates,
        edges=kept,
        edge_weights=(
            {e: w for e, w in graph.edge_weights.items() if e in kept}
            if graph.edge_weights is not None
            else None
        ),
    )
    with _open_out(args.out) as out:
        out.write(ingest.serialize_graph(cleaned))
    with _open_out(args.report) as out:
        for record in report.removed_edges:
            out.write(f"removed\t{record.subject}\t{record.predicate}\t{record.object}\n")
        if report.inserted_root:
            out.write(f"inserted_root\t{report.inserted_root}\n")
    log.info(
        "removed %d redundant edges%s",
        len(report.removed_edges),
        f", inserted {report.inserted_root}" if report.inserted_root else "",
    )
    return 0


def _cmd_ic(args) -> int:
    graph = _load_graph(args)
    taxonomy = _taxonomy(graph)
    usage = _usage_from(args, graph, taxonomy)
    estimator = _estimator(args, args.estimator, taxonomy, usage)
    with _open_out(args.out) as out:
        for c in taxonomy.sorted_classes():
            out.write(f"{taxonomy.label(c)}\t{_fmt(estimator.raw(c))}\n")
    return 0


def _cmd_sim(args) -> int:
    graph = _load_graph(args)
    taxonomy = _taxonomy(graph)
    spec = _pairwise_spec(args, args.measure, taxonomy, graph)
    with _open_out(args.out) as out:
        for label_a, label_b in _read_pairs(args.pairs):
            u = taxonomy.node(label_a)
            v = taxonomy.node(label_b)
            mv = eval_pairwise(spec, taxonomy, u, v, allow_unreduced=args.allow_unreduced)
            out.write(f"{label_a}\t{label_b}\t{_fmt(mv.value)}\n")
    return 0


def _cmd_groupsim(args) -> int:
    graph = _load_graph(args)
    taxonomy = _taxonomy(graph)
    annotations = ingest.parse_annotations(args.annotations, graph)
    reduced, _ = preprocess.reduce_annotations(taxonomy, annotations)
    usage = class_usage(taxonomy, annotations)

    # grammar: direct name, or strategy:inner[,key=value...]
    name, _, inner_token = args.measure.partition(":")
    name = name.strip().lower()
    if name in DIRECT:
        if inner_token:
            raise CommandLineError(f"direct measure {name!r} takes no inner measure")
        theta = None
        if name == "simgic":
            theta = _estimator(args, getattr(args, "ic", None) or "seco", taxonomy, usage)
        spec = groupwise_measure(name, theta=theta)
    elif name in STRATEGIES:
        if not inner_token.strip():
            raise CommandLineError(
                f"aggregation {name!r} needs an inner measure, e.g. {name}:lin"
            )
        inner_spec = _pairwise_spec(args, inner_token, taxonomy, graph)
        spec = groupwise_measure(name, inner=inner_spec)
    else:
        raise CommandLineError(
            f"unknown groupwise measure {name!r}; "
            f"valid: {', '.join(DIRECT + STRATEGIES)}"
        )

    with _open_out(args.out) as out:
        for inst_a, inst_b in _read_pairs(args.pairs):
            for inst in (inst_a, inst_b):
                if inst not in reduced.assignments:
                    raise ingest.ResolutionError(f"unknown instance {inst!r}")
            mv = eval_groupwise(
                spec,
                taxonomy,
                reduced.assignments[inst_a],
                reduced.assignments[inst_b],
                allow_unreduced=args.allow_unreduced,
            )
            out.write(f"{inst_a}\t{inst_b}\t{_fmt(mv.value)}\n")
    return 0


def _cmd_abstract(args) -> int:
    graph = _load_graph(args)
    taxonomy = _taxonomy(graph)
    usage = _usage_from(args, graph, taxonomy)

    theta_token = args.theta
    family, _, rest = theta_token.partition(":")
    if family == "ic":
        if not rest:
            raise CommandLineError("--theta ic:<estimator> needs an estimator name")
        theta = _estimator(args, rest, taxonomy, usage)
    elif family in ("depth", "depth_raw"):
        theta = build_estimator("depth_raw", taxonomy)
    elif family == "depth_norm":
        theta = build_estimator("depth", taxonomy)
    else:
        raise CommandLineError(
            f"--theta must be ic:<estimator>, depth or depth_norm, got {theta_token!r}"
        )

    name, raw = parse_selector(args.form)
    if name.lower() in unify.FORMS:
        form = unify.abstract_form(name.lower(), **_float_params(raw, f"form {name}"))
    else:
        form = unify.instantiate(name)
        if raw:
            raise CommandLineError(f"named form {name!r} takes no parameters")
    form = form.with_theta(theta)

    with _open_out(args.out) as out:
        for label_a, label_b in _read_pairs(args.pairs):
            u = taxonomy.node(label_a)
            v = taxonomy.node(label_b)
            mv = unify.eval_abstract(form, taxonomy, u, v)
            out.write(f"{label_a}\t{label_b}\t{_fmt(mv.value)}\n")
    return 0


def _load_scheme(path) -> relatedness.PredicateWeightScheme:
    if path is None:
        return relatedness.UNIFORM
    weights = {}
    default = 1.0
    for lineno, line in ingest._lines(path):
        fields = line.split("\t")
        if len(fields) != 2:
            raise ingest.ParseError("expected predicate<TAB>weight", lineno)
        try:
            value = float(fields[1])
        except ValueError:
            raise ingest.ParseError(f"weight {fields[1]!r} is not a number", lineno) from None
        if fields[0].strip() == "*":
            default = value
        else:
            weights[fields[0].strip()] = value
    return relatedness.PredicateWeightScheme(weights=weights, default=default)


def _cmd_rel(args) -> int:
    graph = _load_graph(args)
    scheme = _load_scheme(args.weights)
    method = args.method

    scores = None
    model = None
    if method == "simrank":
        scores = relatedness.simrank(
            graph, decay=args.decay, iterations=args.iterations, tol=1e-12
        )
    elif method in ("hitting", "commute"):
        model = relatedness.TransitionModel.from_graph(graph, scheme)
    elif method != "wsp":
        raise CommandLineError(
            f"unknown method {method!r}; valid: wsp, hitting, commute, simrank"
        )

    with _open_out(args.out) as out:
        for label_a, label_b in _read_pairs(args.pairs):
            u = graph.node(label_a)
            v = graph.node(label_b)
            if method == "wsp":
                value = relatedness.weighted_shortest_path(graph, scheme, u, v)
                text = "unreachable" if value is None else _fmt(value)
            elif method == "hitting":
                text = _fmt(relatedness.hitting_time(model, u, v))
            elif method == "commute":
                text = _fmt(relatedness.commute_time(model, u, v))
            else:
                text = _fmt(scores.score(u, v))
            out.write(f"{label_a}\t{label_b}\t{text}\n")
    return 0


def _cmd_bench(args) -> int:
    graph = _load_graph(args)
    taxonomy = _taxonomy(graph)
    mapping = ingest.parse_word_mapping(args.mapping, graph)
    dataset = bench_mod.load_rated_pairs(args.dataset, kind=args.dataset_kind)
    measures = []
    for token in split_measure_list(args.measures):
        spec = _pairwise_spec(args, token, taxonomy, graph)
        measures.append((token, spec))
    if not measures:
        raise CommandLineError("no measures selected")
    run = bench_mod.run_benchmark(
        dataset,
        mapping.words,
        measures,
        taxonomy,
        threads=args.threads,
        allow_unreduced=args.allow_unreduced,
    )
    with _open_out(args.out) as out:
        bench_mod.write_report_csv(run, out)
    return 0


# -- parser ------------------------------------------------------------------


def _add_common(sub, graph=True, out=True, unreduced=False, annotations=False):
    if graph:
        sub.add_argument("--graph", required=True, help="graph triple TSV")
    if annotations:
        sub.add_argument("--annotations", help="instance annotation TSV")
    if out:
        sub.add_argument("--out", default="-", help="output path, '-' for stdout")
    if unreduced:
        sub.add_argument(
            "--allow-unreduced",
            action="store_true",
            help="let path-based measures run on a non-reduced taxonomy",
        )
    sub.add_argument("--log-base", default="e", help="logarithm base (default natural)")
    sub.add_argument(
        "--smooth",
        action="store_true",
        help="add-one smoothing for extrinsic information content",
    )
    try:
        default_threads = int(os.environ.get("SMX_THREADS", "1"))
    except ValueError:
        default_threads = 1
    sub.add_argument(
        "--threads",
        type=int,
        default=default_threads,
        help="worker cap for parallel sections (default SMX_THREADS or 1)",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="smx", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("preprocess", help="transitive reduction and cleaning report")
    _add_common(p)
    p.add_argument("--report", default="-", help="removed-triple report path")
    p.set_defaults(func=_cmd_preprocess)

    p = subs.add_parser("ic", help="dump per-class specificity values")
    _add_common(p, annotations=True)
    p.add_argument(
        "--estimator",
        required=True,
        help=f"one of {', '.join(ESTIMATOR_KINDS)}, e.g. zhou:k=0.6",
    )
    p.set_defaults(func=_cmd_ic)

    p = subs.add_parser("sim", help="pairwise class similarity scores")
    _add_common(p, unreduced=True, annotations=True)
    p.add_argument("--measure", required=True, help="e.g. lin, li:alpha=0.2,beta=0.6")
    p.add_argument("--ic", help="estimator for IC-based measures, e.g. seco")
    p.add_argument("--pairs", required=True, help="classA<TAB>classB pair list")
    p.set_defaults(func=_cmd_sim)

    p = subs.add_parser("groupsim", help="similarity between annotated instances")
    _add_common(p, unreduced=True)
    p.add_argument("--annotations", required=True, help="instance annotation TSV")
    p.add_argument("--measure", required=True, help="simui, nto, simgic or bma:lin style")
    p.add_argument("--ic", help="estimator for IC-based parts, e.g. seco")
    p.add_argument("--pairs", required=True, help="instanceA<TAB>instanceB pair list")
    p.set_defaults(func=_cmd_groupsim)

    p = subs.add_parser("abstract", help="evaluate unified abstract measure forms")
    _add_common(p, annotations=True)
    p.add_argument("--form", required=True, help="dice, jaccard, simpson, sigma_beta:beta=1, ...")
    p.add_argument("--theta", required=True, help="ic:<estimator>, depth or depth_norm")
    p.add_argument("--pairs", required=True, help="classA<TAB>classB pair list")
    p.set_defaults(func=_cmd_abstract)

    p = subs.add_parser("rel", help="graph relatedness (wsp, hitting, commute, simrank)")
    _add_common(p)
    p.add_argument("--method", required=True, help="wsp, hitting, commute or simrank")
    p.add_argument("--weights", help="predicate weight scheme TSV")
    p.add_argument("--pairs", required=True, help="nodeA<TAB>nodeB pair list")
    p.add_argument("--decay", type=float, default=0.8, help="simrank decay factor")
    p.add_argument("--iterations", type=int, default=100, help="simrank iteration cap")
    p.set_defaults(func=_cmd_rel)

    p = subs.add_parser("bench", help="correlate measures against rated word pairs")
    _add_common(p, unreduced=True, annotations=True)
    p.add_argument("--mapping", required=True, help="word to class mapping TSV")
    p.add_argument("--dataset", required=True, help="rated pair TSV")
    p.add_argument(
        "--dataset-kind",
        choices=sorted(bench_mod.KNOWN_DATASETS),
        help="validate the pair count of a known benchmark",
    )
    p.add_argument("--measures", required=True, help="e.g. lin:ic=seco,wupalmer,rada")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="smx: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise CommandLineError("--threads must be >= 1")
        return args.func(args)
    except CommandLineError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SmxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
