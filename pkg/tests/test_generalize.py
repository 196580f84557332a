from fractions import Fraction as F

import pytest

from conceptshap import datasets
from conceptshap.context import FormalContext
from conceptshap.errors import ContractError, ValidationError
from conceptshap.generalize import (
    MEASURES,
    BisetParams,
    GroupingSpec,
    Taxonomy,
    biset_incidence,
    build_generalized_context,
    compatible_similarity,
    concept_count_delta,
    generalize_attributes,
    h_sets,
    psi,
    psi_matrix,
    psi_scale,
    rule_confidence,
    rule_support,
    similarity,
    similarity_table,
    theorem3_bound,
)
from conceptshap.lattice import count_concepts

from conftest import random_context


@pytest.fixture(scope="module")
def generalized():
    return build_generalized_context(datasets.transactions(), datasets.taxonomy())


class TestTaxonomy:
    def test_closure(self):
        tax = datasets.taxonomy()
        assert tax.ancestors("Jacket") == {"Outerwear", "Clothes"}
        assert tax.leq("Ski Pants", "Clothes")
        assert tax.leq("Shoes", "Shoes")
        assert not tax.leq("Clothes", "Jacket")

    def test_cycle_rejected(self):
        with pytest.raises(ValidationError, match="cyclic"):
            Taxonomy((("a", "b"), ("b", "c"), ("c", "a")))

    def test_self_loop_rejected(self):
        with pytest.raises(ValidationError):
            Taxonomy((("a", "a"),))

    def test_generalized_context_shape(self, generalized):
        assert generalized.n_objects == 6 and generalized.n_attributes == 8
        assert generalized.attributes[5:] == ("Outerwear", "Clothes", "Footwear")

    def test_transaction_rows(self, generalized):
        names = lambda t: set(generalized.attribute_names(generalized.intent_of(t)))
        assert names("100") == {"Shirt", "Clothes"}
        assert names("200") == {"Jacket", "Hiking Boots", "Outerwear", "Clothes", "Footwear"}

    def test_empty_taxonomy(self):
        ctx = datasets.transactions()
        assert build_generalized_context(ctx, Taxonomy(())) == ctx

    def test_itemset_supports(self, generalized):
        count = lambda item: generalized.extent_of(item).bit_count()
        assert count("Outerwear") == 3
        assert count("Clothes") == 4
        assert count("Footwear") == 4


class TestRules:
    @pytest.mark.parametrize("premise,conclusion,support,confidence", [
        ("Outerwear", "Hiking Boots", F(1, 3), F(2, 3)),
        ("Outerwear", "Footwear", F(1, 3), F(2, 3)),
        ("Hiking Boots", "Outerwear", F(1, 3), F(1)),
        ("Hiking Boots", "Clothes", F(1, 3), F(1)),
    ])
    def test_fig5_rules(self, generalized, premise, conclusion, support, confidence):
        x = generalized.attribute_set([premise])
        y = generalized.attribute_set([conclusion])
        assert rule_support(generalized, x, y) == support
        assert rule_confidence(generalized, x, y) == confidence

    def test_empty_rule_support(self, generalized):
        assert rule_support(generalized, 0, 0) == 1

    def test_overlap_rejected(self, generalized):
        x = generalized.attribute_set(["Shoes"])
        with pytest.raises(ContractError):
            rule_support(generalized, x, x)

    def test_undefined_confidence(self):
        ctx = FormalContext(("t",), ("a", "b"), (0b10,))
        with pytest.raises(ContractError, match="undefined"):
            rule_confidence(ctx, 0b01, 0b10)


class TestGrouping:
    def test_table6_exists_merge(self, table6):
        out = generalize_attributes(table6, GroupingSpec({"m12": ("m1", "m2")}))
        assert out.attributes == ("1", "2", "3", "4", "5", "6", "m12")
        assert out.object_names(out.extent_of("m12")) == ["1", "2", "3", "4", "5", "6"]

    def test_table6_delta(self, table6):
        spec = GroupingSpec({"m12": ("m1", "m2")})
        assert concept_count_delta(table6, spec) == 16
        assert count_concepts(generalize_attributes(table6, spec)) == 128

    def test_config_file(self, table6):
        from conceptshap.config import load_config

        with __import__("importlib").resources.as_file(datasets.path("table6_groups.toml")) as p:
            spec = GroupingSpec.from_dict(load_config(p).section("groups"))
        assert spec.mode == "exists"
        assert concept_count_delta(table6, spec) == 16

    def test_singletons_leave_context(self, fruits):
        spec = GroupingSpec({"b2": ("b",)}, mode="forall")
        out = generalize_attributes(fruits, spec)
        assert out.rows == fruits.rows
        assert concept_count_delta(fruits, spec) == 0

    def test_alpha_one_is_forall(self, rng):
        for _ in range(30):
            ctx = random_context(rng, 6, 5)
            spec = GroupingSpec({"g": ("m0", "m1", "m2")}, mode="forall")
            alpha = spec.with_mode("alpha", F(1))
            assert generalize_attributes(ctx, spec) == generalize_attributes(ctx, alpha)

    def test_alpha_threshold_is_inclusive(self):
        ctx = FormalContext(("x",), ("a", "b"), (0b01,))
        spec = GroupingSpec({"ab": ("a", "b")}, mode="alpha", alpha={"ab": F(1, 2)})
        assert generalize_attributes(ctx, spec).rows == (1,)

    def test_forall_never_increases(self, rng):
        for _ in range(100):
            ctx = random_context(rng, int(rng.integers(2, 13)), int(rng.integers(2, 13)))
            spec = GroupingSpec({"g": (ctx.attributes[0], ctx.attributes[1])}, mode="forall")
            assert concept_count_delta(ctx, spec) <= 0

    @pytest.mark.parametrize("kwargs", [
        {"groups": {"g": ()}},
        {"groups": {"g": ("a",)}, "mode": "sometimes"},
        {"groups": {"g": ("a",)}, "mode": "alpha"},
        {"groups": {"g": ("a",)}, "mode": "alpha", "default_alpha": F(3, 2)},
    ])
    def test_invalid_specs(self, kwargs):
        with pytest.raises(ValidationError):
            GroupingSpec(**kwargs)

    def test_unknown_member(self, fruits):
        with pytest.raises(ValidationError, match="unknown attribute"):
            generalize_attributes(fruits, GroupingSpec({"g": ("zz",)}))

    def test_from_dict(self):
        spec = GroupingSpec.from_dict({"mode": "alpha", "alpha": "2/3", "members": {"g": ["a", "b", "c"]}})
        assert spec.threshold("g") == F(2, 3)
        with pytest.raises(ValidationError):
            GroupingSpec.from_dict({"mode": "exists"})


class TestBisets:
    def test_forall_forall(self, fruits):
        a = fruits.object_set(["apple", "grapefruit"])
        b = fruits.attribute_set(["y", "r"])
        assert biset_incidence(fruits, a, b, BisetParams(2))

    def test_density(self, fruits):
        a = fruits.object_set(["apple", "kiwi"])
        b = fruits.attribute_set(["s"])
        assert biset_incidence(fruits, a, b, BisetParams(9, alpha=F(1, 2)))
        assert not biset_incidence(fruits, a, b, BisetParams(9, alpha=F(3, 4)))

    @pytest.mark.parametrize("scenario,expected", [(1, False), (2, True), (3, True),
                                                   (4, True), (5, False), (6, False)])
    def test_empty_object_group(self, fruits, scenario, expected):
        # universals over an empty group hold, existentials fail
        assert biset_incidence(fruits, 0, fruits.attribute_set(["s"]), BisetParams(scenario)) is expected

    def test_scenarios_7_and_8(self, fruits):
        a = fruits.object_set(["apple", "plum"])
        b = fruits.attribute_set(["s", "b"])
        assert biset_incidence(fruits, a, b, BisetParams(7, alpha_A=F(1), beta_B=F(1, 2)))
        assert not biset_incidence(fruits, a, b, BisetParams(8, alpha_A=F(1), beta_B=F(1)))

    def test_ratio_scenarios_refuse_empty_groups(self, fruits):
        with pytest.raises(ContractError):
            biset_incidence(fruits, 0, 1, BisetParams(9, alpha=F(1, 2)))

    @pytest.mark.parametrize("kwargs", [
        {"scenario": 10}, {"scenario": 9}, {"scenario": 1, "alpha": F(1, 2)},
        {"scenario": 7, "alpha_A": F(1, 2)}, {"scenario": 9, "alpha": F(0)},
    ])
    def test_parameter_checks(self, kwargs):
        with pytest.raises(ValidationError):
            BisetParams(**kwargs)


class TestSimilarity:
    def test_reference_m2_row(self, table6):
        printed = {"Jc": 0.67, "Di": 0.80, "So": 0.89, "An": 0.94, "SS2": 0.50, "Ku": 0.80,
                   "Or": 0.80, "SM": 0.71, "RT": 0.56, "SS1": 0.83, "RR": 0.57}
        for measure, value in printed.items():
            assert abs(float(similarity(table6, "m1", "m2", measure)) - value) <= 0.01

    def test_exact_values(self, table6):
        assert similarity(table6, "m1", "m2", "Jc") == F(2, 3)
        assert similarity(table6, "m1", "6", "Jc") == F(5, 6)
        assert similarity(table6, "m1", "1", "Jc") == F(4, 7)

    def test_conventions_differ(self, table6):
        assert similarity(table6, "m1", "m2", "SM", "coabsence") == F(5, 7)
        assert similarity(table6, "m1", "m2", "SM", "symdiff") == F(3, 4)

    def test_identical_columns(self, fruits):
        assert similarity(fruits, "w", "f", "Jc") == 1
        assert similarity(fruits, "y", "r", "Jc") == 1
        assert similarity(fruits, "w", "f", "Or") == 1.0
        assert similarity(fruits, "w", "f", "YK") == 1

    def test_unknown_measure(self, fruits):
        with pytest.raises(ValidationError):
            similarity(fruits, "w", "f", "Zz")
        with pytest.raises(ValidationError):
            similarity(fruits, "w", "f", "Jc", "other")

    def test_axioms_on_random_contexts(self, rng):
        for _ in range(100):
            ctx = random_context(rng, int(rng.integers(1, 9)), int(rng.integers(2, 6)), rng.uniform(0.1, 0.9))
            for measure in MEASURES:
                table = similarity_table(ctx, measure)
                for i, row in enumerate(table.matrix):
                    for j, value in enumerate(row):
                        assert value >= 0
                        assert value == table.matrix[j][i]
                        assert table.matrix[i][i] >= value

    def test_table_lookup(self, table6):
        table = similarity_table(table6, "Jc")
        assert table["m1", "m2"] == F(2, 3)


class TestCompatibility:
    def test_table6_h_sets(self, table6):
        hs = h_sets(table6, "m1", "m2")
        assert (len(hs.h_a), len(hs.h_b), len(hs.h_union), len(hs.h_inter)) == (32, 32, 64, 16)
        assert hs.size_ab == 48
        assert hs.psi == 16

    def test_psi_matches_delta(self, rng):
        for _ in range(60):
            ctx = random_context(rng, int(rng.integers(1, 8)), int(rng.integers(2, 7)))
            a, b = ctx.attributes[0], ctx.attributes[1]
            assert psi(ctx, a, b) == concept_count_delta(ctx, GroupingSpec({"ab": (a, b)}))

    def test_theorem3_equality(self, rng):
        for _ in range(60):
            ctx = random_context(rng, int(rng.integers(1, 9)), int(rng.integers(2, 8)))
            rest = ctx.subcontext(None, ctx.all_attributes & ~0b11)
            assert count_concepts(ctx) == count_concepts(rest) + h_sets(ctx, 0, 1).size_ab

    def test_theorem3_bound_on_table6(self, table6):
        assert h_sets(table6, "m1", "m2").size_ab <= theorem3_bound(table6, "m1", "m2")

    def test_theorem3_bound_counterexample(self):
        # reduced context where merging m1 and m3 adds concepts yet |H| exceeds the printed bound
        ctx = FormalContext.from_intents(["g0", "g1", "g2"], ["m1", "m2", "m3", "m4"],
                                         [["m2", "m4"], ["m3", "m4"], ["m1", "m2"]])
        assert h_sets(ctx, "m1", "m3").size_ab == 3
        assert theorem3_bound(ctx, "m1", "m3") == 1

    def test_psi_matrix_table6(self, table6):
        matrix = psi_matrix(table6)
        assert max(max(r) for r in matrix) == 16
        assert min(min(r) for r in matrix) == -84
        assert psi_scale(table6) == 84
        assert psi(table6, "m1", "6") < 0

    def test_compatible_table6(self, table6):
        s = compatible_similarity(table6, "m1", "m2")
        assert (s.psi, s.delta) == (16, 0)
        assert s.value == F(1, 2) - F(16, 168)
        assert s.value < F(1, 2)

    def test_zero_psi_gives_one(self, fruits):
        s = compatible_similarity(fruits, "w", "f")
        assert s.psi == 0 and s.value == 1

    def test_zero_normaliser(self):
        ctx = FormalContext(("g",), ("a", "b"), (0b11,))
        s = compatible_similarity(ctx, "a", "b")
        assert s.value == 1

    def test_theorem4_on_fixtures(self):
        for ctx in (datasets.fruits(), datasets.table6(), datasets.transactions(), datasets.credit().base):
            n0 = psi_scale(ctx)
            for i in range(ctx.n_attributes):
                for j in range(i + 1, ctx.n_attributes):
                    s = compatible_similarity(ctx, i, j, n0)
                    assert (s.value >= F(1, 2)) == (s.psi <= 0)

    def test_same_attribute(self, fruits):
        assert psi(fruits, "w", "w") == 0
        with pytest.raises(ContractError):
            h_sets(fruits, "w", "w")
