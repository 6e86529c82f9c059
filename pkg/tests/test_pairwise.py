import io
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

import smx
from smx.errors import ContractError, InfinityError, RedundancyError, UsageError
from smx.pairwise import MEASURES

from helpers import random_taxonomy, taxonomy_from_pairs

SIM = smx.Polarity.SIMILARITY
DIST = smx.Polarity.DISTANCE
APPROX = lambda x: pytest.approx(x, abs=1e-9)


def ev(name, t, a, b, theta=None, usage=None, allow_unreduced=False, **params):
    spec = smx.pairwise_measure(name, theta=theta, usage=usage, **params)
    return smx.eval_pairwise(spec, t, t.node(a), t.node(b), allow_unreduced)


@pytest.fixture(scope="module")
def toy_usage(toy, toy_graph):
    ann = smx.parse_annotations(
        io.BytesIO(b"g1\tE\ng2\tD\ng3\tF\n"), toy_graph
    )
    return smx.class_usage(toy, ann)


class TestStructural:
    def test_rada_family(self, toy):
        assert ev("rada", toy, "E", "D").value == 3
        assert ev("rada_sim", toy, "E", "D").value == 0.25
        assert ev("rada", toy, "E", "E").value == 0
        assert ev("resnik_edge", toy, "E", "D").value == 3.0

    def test_leacock_chodorow(self, toy):
        got = ev("leacock_chodorow", toy, "E", "D").value
        assert got == APPROX(-math.log(4 / 6))
        # self similarity attains the measure maximum
        assert ev("leacock_chodorow", toy, "E", "E").value == APPROX(math.log(6))

    def test_wu_palmer(self, toy):
        assert ev("wu_palmer", toy, "E", "D").value == APPROX(0.4)
        assert ev("wu_palmer", toy, "E", "E").value == 1.0
        assert ev("wu_palmer", toy, "root", "root").degenerate

    def test_pekar_staab(self, toy):
        assert ev("pekar_staab", toy, "E", "D").value == APPROX(1 / 4)

    def test_zhong(self, toy):
        # milestones 0.5 * k^-depth with k = 2
        assert ev("zhong", toy, "E", "D", k=2.0).value == APPROX(
            2 * 0.25 - 0.0625 - 0.125
        )
        assert ev("zhong", toy, "E", "E", k=2.0).value == 0.0

    def test_li(self, toy):
        expected = math.exp(-0.2 * 3) * math.tanh(0.6 * 1)
        assert ev("li", toy, "E", "D").value == APPROX(expected)

    def test_slimani(self, toy):
        wp = ev("wu_palmer", toy, "E", "D").value
        assert ev("slimani", toy, "E", "D").value == APPROX(wp / 6)
        penalty = min(3, 2) - toy.max_depth
        assert ev("slimani", toy, "E", "D", lam=0.0).value == APPROX(wp * penalty)

    def test_shenoy(self, toy):
        # one upward leg, one downward leg, one direction reversal
        expected = 2 * 3 * math.exp(-1.0 * 4 / 3) / (3 + 2)
        assert ev("shenoy", toy, "E", "D").value == APPROX(expected)
        assert ev("shenoy", toy, "root", "root").degenerate


class TestInformationTheoretic:
    def test_resnik(self, toy, toy_seco):
        assert ev("resnik", toy, "E", "D", toy_seco).value == APPROX(0.2875856258)
        assert ev("resnik", toy, "E", "F", toy_seco).value == 0.0

    def test_lin(self, toy, toy_seco):
        assert ev("lin", toy, "E", "D", toy_seco).value == APPROX(0.2875856258)
        assert ev("lin", toy, "E", "E", toy_seco).value == 1.0

    def test_zero_ic_root_pair_degenerates(self, toy, toy_seco):
        for name in ("lin", "nunivers", "faith", "rel_schlicker", "sim_dic", "jac_anc"):
            mv = ev(name, toy, "root", "root", toy_seco)
            assert mv.value == 0.0 and mv.degenerate, name

    def test_jiang_conrath(self, toy, toy_seco):
        assert ev("jiang_conrath", toy, "E", "D", toy_seco).value == APPROX(1.4248287484)
        assert ev("jiang_conrath", toy, "E", "E", toy_seco).value == 0.0

    def test_nunivers(self, toy, toy_seco):
        assert ev("nunivers", toy, "E", "D", toy_seco).value == APPROX(0.2875856258)

    def test_psec_reports_raw_negative_values(self, toy, toy_seco):
        got = ev("psec", toy, "E", "D", toy_seco).value
        assert got == APPROX(3 * 0.2875856258 - 2.0)
        assert got < 0

    def test_faith(self, toy, toy_seco):
        assert ev("faith", toy, "E", "D", toy_seco).value == APPROX(0.1679416093)

    def test_rel_schlicker_discounts_general_ancestors(self, toy, toy_seco):
        lin = ev("lin", toy, "E", "D", toy_seco).value
        got = ev("rel_schlicker", toy, "E", "D", toy_seco).value
        assert got == APPROX(lin * (1 - math.exp(-0.2875856258)))
        assert got < lin
        # identical leaves still do not reach 1
        assert ev("rel_schlicker", toy, "E", "E", toy_seco).value < 1.0

    def test_sim_dic_and_jac_anc(self, toy, toy_seco):
        theta = toy_seco
        mass = lambda nodes: sum(theta(c) for c in nodes)
        au, ad = toy.ancestors(toy.node("E")), toy.ancestors(toy.node("D"))
        assert ev("sim_dic", toy, "E", "D", theta).value == APPROX(
            2 * mass(au & ad) / (mass(au) + mass(ad))
        )
        assert ev("jac_anc", toy, "E", "D", theta).value == APPROX(
            mass(au & ad) / mass(au | ad)
        )

    def test_lin_grasm_single_dca_equals_lin(self, toy, toy_seco):
        assert ev("lin_grasm", toy, "E", "D", toy_seco).value == APPROX(
            ev("lin", toy, "E", "D", toy_seco).value
        )

    def test_lin_grasm_averages_over_dcas(self, diamond):
        theta = smx.seco_ic(diamond)
        z, w = diamond.node("Z"), diamond.node("W")
        omega = diamond.ncca(z, w)
        avg = sum(theta(c) for c in omega) / len(omega)
        spec = smx.pairwise_measure("lin_grasm", theta=theta)
        got = smx.eval_pairwise(spec, diamond, z, w).value
        assert got == APPROX(2 * avg / (theta(z) + theta(w)))

    def test_wang_dca(self, toy):
        # single DCA "A": mean root path lengths 3 (E) and 2 (D)
        assert ev("wang_dca", toy, "E", "D").value == APPROX(2 * 1 / (3 * 2))


class TestFeatureBased:
    def test_cmatch(self, toy):
        assert ev("cmatch", toy, "E", "D").value == APPROX(0.4)

    def test_dice_ancestors(self, toy):
        assert ev("dice_anc", toy, "E", "D").value == APPROX(4 / 7)

    def test_bulskov(self, toy):
        assert ev("bulskov", toy, "E", "D").value == APPROX(0.5 * 2 / 4 + 0.5 * 2 / 3)
        asym = ev("bulskov", toy, "E", "D", alpha=1.0)
        assert asym.value == APPROX(2 / 4)

    def test_rodriguez_egenhofer(self, toy):
        assert ev("rodriguez_egenhofer", toy, "E", "D").value == APPROX(
            2 / (0.5 * 2 + 0.5 * 1 + 2)
        )

    def test_sanchez_distance(self, toy):
        assert ev("sanchez", toy, "E", "D").value == APPROX(math.log2(1 + 3 / 5))
        assert ev("sanchez", toy, "E", "E").value == 0.0

    def test_tversky_ratio_jaccard_case(self, toy):
        got = ev("tversky_ratio", toy, "E", "D").value
        assert got == APPROX(ev("cmatch", toy, "E", "D").value)
        dice = ev("tversky_ratio", toy, "E", "D", alpha=0.5, beta=0.5).value
        assert dice == APPROX(ev("dice_anc", toy, "E", "D").value)

    def test_tversky_contrast(self, toy):
        assert ev("tversky_contrast", toy, "E", "D").value == APPROX(2 - 2 - 1)

    def test_jaccard_extensional(self, toy, toy_usage):
        assert ev("jaccard_ext", toy, "C", "A", usage=toy_usage).value == APPROX(1 / 2)
        assert ev("jaccard_ext", toy, "E", "D", usage=toy_usage).value == 0.0
        assert ev("jaccard_ext", toy, "E", "E", usage=toy_usage).value == 1.0

    def test_jaccard_extensional_zero_usage_error(self, toy, toy_graph):
        ann = smx.parse_annotations(io.BytesIO(b"g1\tE\n"), toy_graph)
        usage = smx.class_usage(toy, ann)
        with pytest.raises(UsageError):
            ev("jaccard_ext", toy, "E", "F", usage=usage)

    def test_damato_extensional(self, toy, toy_usage):
        got = ev("damato_ext", toy, "E", "D", usage=toy_usage).value
        assert got == APPROX((1 / 2) * (1 - 2 / 3) * (1 - 1 / 2))
        # self similarity collapses to zero by construction
        assert ev("damato_ext", toy, "E", "E", usage=toy_usage).value == 0.0


class TestHybrid:
    def test_reduces_to_jiang_conrath(self, toy, toy_seco):
        got = ev("jc_hybrid", toy, "E", "D", toy_seco).value
        want = ev("jiang_conrath", toy, "E", "D", toy_seco).value
        assert got == APPROX(want)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_reduces_to_jiang_conrath_on_random_trees(self, seed):
        t, _ = random_taxonomy(random.Random(seed), max_nodes=30, tree=True)
        theta = smx.seco_ic(t)
        hybrid = smx.pairwise_measure("jc_hybrid", theta=theta)
        plain = smx.pairwise_measure("jiang_conrath", theta=theta)
        rng = random.Random(seed + 1)
        nodes = sorted(t.class_ids)
        for _ in range(10):
            u, v = rng.choice(nodes), rng.choice(nodes)
            assert smx.eval_pairwise(hybrid, t, u, v).value == pytest.approx(
                smx.eval_pairwise(plain, t, u, v).value, abs=1e-9
            )

    def test_density_and_depth_factors_change_value(self, toy, toy_seco):
        base = ev("jc_hybrid", toy, "E", "D", toy_seco).value
        weighted = ev("jc_hybrid", toy, "E", "D", toy_seco, alpha=1.0, beta=0.5).value
        assert weighted != pytest.approx(base, abs=1e-12)
        doubled = ev(
            "jc_hybrid", toy, "E", "D", toy_seco, predicate_weight=2.0
        ).value
        assert doubled == APPROX(2 * base)


class TestConvert:
    def test_one_minus(self):
        out = smx.convert(
            smx.MeasureValue(1.0, SIM, True), DIST, smx.ConversionRule.ONE_MINUS
        )
        assert out.value == 0.0 and out.polarity is DIST

    def test_reciprocal(self):
        out = smx.convert(
            smx.MeasureValue(3.0, DIST, False), SIM, smx.ConversionRule.RECIPROCAL
        )
        assert out.value == 0.25 and out.normalized

    def test_neg_log(self):
        out = smx.convert(
            smx.MeasureValue(math.exp(-1), SIM, True), DIST, smx.ConversionRule.NEG_LOG
        )
        assert out.value == APPROX(1.0)

    def test_ratio(self):
        out = smx.convert(
            smx.MeasureValue(0.5, SIM, True), DIST, smx.ConversionRule.RATIO
        )
        assert out.value == 1.0

    def test_neg_log_of_zero(self):
        with pytest.raises(InfinityError):
            smx.convert(
                smx.MeasureValue(0.0, SIM, True), DIST, smx.ConversionRule.NEG_LOG
            )

    def test_polarity_mismatch(self):
        with pytest.raises(ContractError):
            smx.convert(
                smx.MeasureValue(2.0, DIST, False), DIST, smx.ConversionRule.ONE_MINUS
            )
        with pytest.raises(ContractError):
            smx.convert(
                smx.MeasureValue(0.9, SIM, True), SIM, smx.ConversionRule.RECIPROCAL
            )


class TestContracts:
    def test_unknown_measure(self):
        with pytest.raises(ContractError, match="unknown measure"):
            smx.pairwise_measure("nope")

    def test_parameter_validation(self, toy_seco):
        with pytest.raises(ContractError):
            smx.pairwise_measure("zhong", k=1.0)
        with pytest.raises(ContractError):
            smx.pairwise_measure("bulskov", alpha=2.0)
        with pytest.raises(ContractError):
            smx.pairwise_measure("slimani", lam=0.5)
        with pytest.raises(ContractError):
            smx.pairwise_measure("lin")  # missing estimator

    def test_path_measures_refuse_redundant_taxonomy(self, chain_with_skip):
        spec = smx.pairwise_measure("rada")
        c0 = chain_with_skip.node("c0")
        c4 = chain_with_skip.node("c4")
        with pytest.raises(RedundancyError):
            smx.eval_pairwise(spec, chain_with_skip, c0, c4)
        assert (
            smx.eval_pairwise(spec, chain_with_skip, c0, c4, allow_unreduced=True).value
            == 1
        )

    def test_ic_measures_tolerate_redundant_taxonomy(self, chain_with_skip):
        theta = smx.seco_ic(chain_with_skip)
        spec = smx.pairwise_measure("lin", theta=theta)
        value = smx.eval_pairwise(
            spec, chain_with_skip, chain_with_skip.node("c0"), chain_with_skip.node("c2")
        )
        assert 0.0 <= value.value <= 1.0


class TestProperties:
    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_tree_depth_identities(self, seed):
        rng = random.Random(seed)
        t, _ = random_taxonomy(rng, max_nodes=30, tree=True)
        rada = smx.pairwise_measure("rada")
        wp = smx.pairwise_measure("wu_palmer")
        nodes = sorted(t.class_ids)
        for _ in range(10):
            u, v = rng.choice(nodes), rng.choice(nodes)
            lca = t.deepest_common_ancestor(u, v)
            expected = t.depth(u) + t.depth(v) - 2 * t.depth(lca)
            assert smx.eval_pairwise(rada, t, u, v).value == expected
            if t.depth(u) + t.depth(v) > 0:
                assert smx.eval_pairwise(wp, t, u, v).value == pytest.approx(
                    2 * t.depth(lca) / (t.depth(u) + t.depth(v)), abs=1e-12
                )

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_grasm_never_exceeds_lin(self, seed):
        rng = random.Random(seed)
        t, _ = random_taxonomy(rng, max_nodes=40, multi=0.5)
        theta = smx.seco_ic(t)
        lin = smx.pairwise_measure("lin", theta=theta)
        grasm = smx.pairwise_measure("lin_grasm", theta=theta)
        nodes = sorted(t.class_ids)
        for _ in range(20):
            u, v = rng.choice(nodes), rng.choice(nodes)
            assert (
                smx.eval_pairwise(grasm, t, u, v).value
                <= smx.eval_pairwise(lin, t, u, v).value + 1e-12
            )

    def test_fresh_leaves_leave_intentional_measures_unchanged(self, toy, toy_seco):
        base_pairs = [
            ("A", "root"), ("B", "root"), ("C", "A"),
            ("D", "A"), ("E", "C"), ("F", "B"),
        ]
        grown = taxonomy_from_pairs(base_pairs + [("newE", "E"), ("newD", "D")])
        frozen = {
            c: toy_seco(toy.node(grown.label(c)))
            for c in grown.class_ids
            if grown.label(c) in {"root", "A", "B", "C", "D", "E", "F"}
        }
        for name in ("newE", "newD"):
            node = grown.node(name)
            parent = next(iter(grown.parents(node)))
            frozen[node] = frozen[parent] + 1.0
        theta_old = toy_seco
        theta_new = smx.ThetaEstimator.from_table(grown, frozen)
        for name in ("cmatch", "dice_anc", "tversky_ratio", "rodriguez_egenhofer",
                     "bulskov", "sanchez"):
            before = ev(name, toy, "E", "D").value
            after = ev(name, grown, "E", "D").value
            assert before == pytest.approx(after, abs=1e-12), name
        for name in ("resnik", "lin", "jiang_conrath", "faith", "nunivers"):
            before = ev(name, toy, "E", "D", theta_old).value
            after = ev(name, grown, "E", "D", theta_new).value
            assert before == pytest.approx(after, abs=1e-12), name

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_symmetry_under_random_swaps(self, seed, toy_graph):
        rng = random.Random(seed)
        t, _ = random_taxonomy(rng, max_nodes=25)
        t, _ = smx.transitive_reduction(t)
        theta = smx.seco_ic(t)
        classes = sorted(t.class_ids)
        picks = {
            f"i{k}": frozenset({rng.choice(classes)}) for k in range(6)
        }
        usage = smx.class_usage(t, smx.AnnotationSet(assignments=picks))
        nodes = sorted(t.class_ids)
        for name, info in MEASURES.items():
            spec = smx.pairwise_measure(
                name,
                theta=theta if info.needs_theta else None,
                usage=usage if info.needs_usage else None,
            )
            if not smx.is_symmetric(spec):
                continue
            for _ in range(5):
                u, v = rng.choice(nodes), rng.choice(nodes)
                try:
                    a = smx.eval_pairwise(spec, t, u, v).value
                    b = smx.eval_pairwise(spec, t, v, u).value
                except UsageError:
                    continue
                assert a == pytest.approx(b, abs=1e-9), name
