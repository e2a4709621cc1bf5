"""Rooted cluster morphism checking: the worked examples and the
counterexamples, plus the randomized soundness properties."""

import random

import pytest

from clusterlab.errors import (
    Inconclusive,
    InvalidSeed,
    NonLaurentImage,
    NotSimilar,
    SeedMismatch,
)
from clusterlab.laurent import LaurentPoly, format_poly, parse_poly
from clusterlab.morphisms import (
    ClusterMap,
    biadmissible_descendant,
    check_cm1_cm2,
    check_cm3,
    check_ideal_witness,
    check_no_specialization_conditions,
    compose,
    enumerate_biadmissible,
    identity_map,
    image_seed,
    morphism_from_similarity,
)
from clusterlab.seeds import (
    Seed,
    check_similar,
    coproduct,
    enumerate_cluster_variables,
    full_subseed,
    is_admissible,
    mutate_seed,
    opposite_seed,
)


def a2_seed():
    return Seed.initial(["y1", "y2"], ["y1", "y2"], [("y1", "y2", 1), ("y2", "y1", -1)])


def example_seed():
    return Seed.initial(
        ["x1", "x2", "x3"],
        ["x2", "x3"],
        [("x1", "x2", 1), ("x2", "x1", -1), ("x3", "x2", 1), ("x2", "x3", -1)],
    )


def example_map():
    return ClusterMap(example_seed(), a2_seed(), {"x1": "y1", "x2": "y2", "x3": 1})


def ideal_counterexample_map():
    src = Seed.initial(
        ["a1", "x", "a2"],
        ["x"],
        [("a1", "x", 1), ("x", "a1", -1), ("x", "a2", 1), ("a2", "x", -1)],
    )
    return ClusterMap(
        src,
        a2_seed(),
        {"a1": 1, "a2": -1, "x": 0},
        extra={parse_poly("a1*x^-1 + a2*x^-1"): "y1"},
    )


def composition_counterexample():
    s1 = Seed.initial(
        ["x1", "x2", "x3"],
        ["x2"],
        [("x1", "x2", 1), ("x2", "x1", -1), ("x2", "x3", 1), ("x3", "x2", -1)],
    )
    s2 = Seed.initial(["z"], [], [])
    f = ClusterMap(s1, s2, {"x1": "z", "x2": "z", "x3": "z"})
    g = ClusterMap(s2, a2_seed(), {"z": "y1"})
    return f, g


class TestCm1Cm2:
    def test_example_map_passes(self):
        cm1, cm2, wit = check_cm1_cm2(example_map())
        assert cm1 and cm2 and not wit

    def test_defreezing_target_fails_cm2(self):
        f, _ = composition_counterexample()
        cm1, cm2, wit = check_cm1_cm2(f)
        assert cm1 and not cm2 and wit == ("x2",)

    def test_empty_source(self):
        m = ClusterMap(Seed.empty(), a2_seed(), {})
        assert check_cm1_cm2(m) == (True, True, ())


class TestBiadmissible:
    def test_example_depth_one(self):
        assert enumerate_biadmissible(example_map(), 1) == [(), ("x2",)]

    def test_ideal_counterexample_has_none(self):
        assert enumerate_biadmissible(ideal_counterexample_map(), 5) == [()]

    def test_no_specialization_equals_all_admissible(self):
        m = identity_map(example_seed())
        for depth in (1, 2, 3):
            sequences = enumerate_biadmissible(m, depth)
            assert all(is_admissible(m.source, s) for s in sequences)
            # count all admissible sequences directly
            def count(seed, d):
                if d == 0:
                    return 1
                return 1 + sum(
                    count(mutate_seed(seed, x), d - 1) - (1 if d > 1 else 0)
                    for x in sorted(seed.exchangeable)
                )
            # direct enumeration of admissible sequences
            def walk(seed, d):
                yield ()
                if d:
                    for x in sorted(seed.exchangeable):
                        for tail in walk(mutate_seed(seed, x), d - 1):
                            yield (x,) + tail
            expected = sorted(set(walk(m.source, depth)), key=lambda s: (len(s), s))
            assert sorted(sequences, key=lambda s: (len(s), s)) == expected

    def test_alternating_structure(self):
        seqs = enumerate_biadmissible(example_map(), 3)
        for s in seqs:
            if len(s) >= 1:
                assert s[0] == "x2"


class TestCm3:
    def test_example_map_verified(self):
        report = check_cm3(example_map(), 4)
        assert report.passed
        assert report.cm3_verified_to == 4

    def test_exchange_value_transported(self):
        m = example_map()
        lhs = m.apply(parse_poly("x1*x2^-1*x3 + x2^-1"))
        assert lhs == parse_poly("y1*y2^-1 + y2^-1")

    def test_composition_counterexample(self):
        f, g = composition_counterexample()
        gf = compose(g, f)
        report = check_cm3(gf, 1)
        assert not report.passed
        ce = report.counterexample
        assert ce.sequence == ("x2",)
        assert ce.lhs == LaurentPoly.const(2)
        assert ce.rhs == parse_poly("y1^-1*y2 + y1^-1")

    def test_identity_verified(self):
        for seed in (a2_seed(), example_seed()):
            assert check_cm3(identity_map(seed), 3).passed

    def test_counterexample_replays(self):
        f, g = composition_counterexample()
        gf = compose(g, f)
        ce = check_cm3(gf, 1).counterexample
        mutated = mutate_seed(gf.source, ce.sequence[0])
        new = next(l for l in mutated.labels if l not in gf.source.labels)
        assert gf.apply(mutated.values[new]) == ce.lhs
        tgt = mutate_seed(gf.target, "y1")
        tnew = next(l for l in tgt.labels if l not in gf.target.labels)
        assert tgt.values[tnew] == ce.rhs


class TestNoSpecializationConditions:
    def test_full_subseed_inclusion_passes(self):
        outer = example_seed()
        inner = full_subseed(outer, ["x1", "x2"])
        inner = Seed(inner.labels, frozenset(), inner.matrix, dict(inner.values))
        m = ClusterMap(inner, outer, {"x1": "x1", "x2": "x2"})
        report = check_no_specialization_conditions(m)
        assert report.passed

    def test_opposite_seed_sign(self):
        s = example_seed()
        m = ClusterMap(s, opposite_seed(s), {l: l for l in s.labels})
        report = check_no_specialization_conditions(m)
        assert report.passed
        assert report.component_signs == (-1,)

    def test_merging_exchangeables_fails_condition1(self):
        s = coproduct([a2_seed(), Seed.initial(["z"], ["z"], [])])
        m = ClusterMap(s, a2_seed(), {"y1": "y1", "y2": "y2", "z": "y1"})
        report = check_no_specialization_conditions(m)
        assert not report.condition1

    def test_specialization_rejected(self):
        with pytest.raises(InvalidSeed):
            check_no_specialization_conditions(example_map())

    def test_coefficient_merge_via_sufficient_criterion(self):
        # two coefficient clones with identical rows merge cleanly
        src = Seed.initial(
            ["c1", "c2", "e"],
            ["e"],
            [("c1", "e", 1), ("e", "c1", -1), ("c2", "e", 1), ("e", "c2", -1)],
        )
        dst = Seed.initial(["c", "w"], ["w"], [("c", "w", 2), ("w", "c", -2)])
        m = ClusterMap(src, dst, {"c1": "c", "c2": "c", "e": "w"})
        report = check_no_specialization_conditions(m)
        assert report.passed
        assert check_cm3(m, 3).passed

    def test_sign_conflict_is_definitive(self):
        src = Seed.initial(
            ["c1", "c2", "e"],
            ["e"],
            [("c1", "e", 1), ("e", "c1", -1), ("c2", "e", -1), ("e", "c2", 1)],
        )
        dst = Seed.initial(["c", "w"], ["w"], [])
        m = ClusterMap(src, dst, {"c1": "c", "c2": "c", "e": "w"})
        report = check_no_specialization_conditions(m, depth=2)
        assert not report.condition2
        assert any("condition2" in w for w in report.witnesses)

    def test_inconclusive_condition2(self):
        # rows differ in magnitude but never in sign
        src = Seed.initial(
            ["c1", "c2", "e"],
            ["e"],
            [("c1", "e", 1), ("e", "c1", -1), ("c2", "e", 2), ("e", "c2", -2)],
        )
        dst = Seed.initial(["c", "w"], ["w"], [("c", "w", 3), ("w", "c", -1)])
        m = ClusterMap(src, dst, {"c1": "c", "c2": "c", "e": "w"})
        with pytest.raises(Inconclusive):
            check_no_specialization_conditions(m, depth=3)

    def test_soundness_on_verified_maps(self):
        # every map passing the characterization passes CM3 to depth
        s = example_seed()
        cases = [
            identity_map(s),
            ClusterMap(s, opposite_seed(s), {l: l for l in s.labels}),
        ]
        for m in cases:
            assert check_no_specialization_conditions(m).passed
            assert check_cm3(m, 3).passed

    def test_condition3_violations_fail_cm3(self):
        # flipping one arrow of a two-arrow component cannot be fixed by a
        # global component sign, and CM3 detects it at depth 1
        src = Seed.initial(
            ["x1", "x2", "x3"],
            ["x1", "x2", "x3"],
            [("x1", "x2", 1), ("x2", "x1", -1), ("x2", "x3", 1), ("x3", "x2", -1)],
        )
        dst = Seed.initial(
            ["x1", "x2", "x3"],
            ["x1", "x2", "x3"],
            [("x1", "x2", 1), ("x2", "x1", -1), ("x2", "x3", -1), ("x3", "x2", 1)],
        )
        m = ClusterMap(src, dst, {l: l for l in src.labels})
        report = check_no_specialization_conditions(m)
        assert not report.condition3
        assert not check_cm3(m, 1).passed

    def test_condition1_violations_fail_cm3(self):
        src = Seed.initial(
            ["x1", "x2", "x3"],
            ["x1", "x2", "x3"],
            [("x1", "x2", 1), ("x2", "x1", -1), ("x2", "x3", 1), ("x3", "x2", -1)],
        )
        m = ClusterMap(src, a2_seed(), {"x1": "y1", "x2": "y2", "x3": "y1"})
        report = check_no_specialization_conditions(m)
        assert not report.condition1
        assert not check_cm3(m, 2).passed


class TestImageSeed:
    def test_ideal_counterexample_empty_image(self):
        img = image_seed(ideal_counterexample_map())
        assert img.labels == ()

    def test_example_image(self):
        img = image_seed(example_map())
        assert set(img.labels) == {"y1", "y2"}
        assert set(img.exchangeable) == {"y2"}
        assert img.b("y1", "y2") == 1

    def test_identity_image(self):
        s = example_seed()
        assert image_seed(identity_map(s)).same_seed(s)


class TestIdealWitness:
    def test_ideal_counterexample_witness(self):
        m = ideal_counterexample_map()
        assert check_cm3(m, 4).passed
        report = check_ideal_witness(m, 4)
        assert report.is_witness
        assert report.witness == LaurentPoly.var("y1")

    def test_no_specialization_is_ideal(self):
        s = example_seed()
        for m in (identity_map(s), ClusterMap(s, opposite_seed(s), {l: l for l in s.labels})):
            for depth in (2, 3, 4):
                assert check_ideal_witness(m, depth).status == "ideal-to-depth"

    def test_example_map_ideal_to_depth(self):
        assert check_ideal_witness(example_map(), 4).status == "ideal-to-depth"


class TestApply:
    def test_integer_quotient(self):
        m = ClusterMap(a2_seed(), Seed.empty(), {"y1": 2, "y2": 1})
        assert m.apply(parse_poly("y1^-1*y2 + y1^-1")) == LaurentPoly.one()

    def test_non_laurent_image(self):
        m = ClusterMap(a2_seed(), Seed.empty(), {"y1": 2, "y2": 2})
        with pytest.raises(NonLaurentImage):
            m.apply(parse_poly("y1^-1*y2 + y1^-1 + 1"))

    def test_inverted_zero(self):
        m = ClusterMap(a2_seed(), Seed.empty(), {"y1": 0, "y2": 1})
        with pytest.raises(NonLaurentImage):
            m.apply(parse_poly("y1^-1*y2"))

    def test_extra_consistency_enforced(self):
        src = ideal_counterexample_map().source
        with pytest.raises(InvalidSeed):
            ClusterMap(
                src,
                a2_seed(),
                {"a1": 1, "a2": 1, "x": 0},  # a1 + a2 maps to 2, not 0
                extra={parse_poly("a1*x^-1 + a2*x^-1"): "y1"},
            )


class TestCompose:
    def test_identity_unit(self):
        m = example_map()
        assert compose(identity_map(a2_seed()), m).assignment == m.assignment
        assert compose(m, identity_map(example_seed())).assignment == m.assignment

    def test_mismatch(self):
        with pytest.raises(SeedMismatch):
            compose(example_map(), example_map())

    def test_inclusion_composition_is_inclusion(self):
        s = example_seed()
        sub1 = full_subseed(s, ["x1"])
        sub1 = Seed(sub1.labels, frozenset(), sub1.matrix, dict(sub1.values))
        sub2 = full_subseed(s, ["x1", "x2"])
        sub2 = Seed(sub2.labels, frozenset(), sub2.matrix, dict(sub2.values))
        f12 = ClusterMap(sub1, sub2, {"x1": "x1"})
        f23 = ClusterMap(sub2, s, {"x1": "x1", "x2": "x2"})
        f13 = compose(f23, f12)
        assert f13.assignment == {"x1": "x1"}
        assert f13.target.same_seed(s)


class TestSimilarityMorphisms:
    def test_opposite_pair(self):
        s = example_seed()
        bij = check_similar(s, opposite_seed(s))
        fwd, inv = morphism_from_similarity(bij, s, opposite_seed(s))
        assert check_no_specialization_conditions(fwd).passed
        assert check_no_specialization_conditions(inv).passed
        # composites act as the identity on cluster variables
        for p in enumerate_cluster_variables(s, 3):
            assert inv.apply(fwd.apply(p)) == p

    def test_a2_swap(self):
        s = a2_seed()
        t = Seed.initial(["y1", "y2"], ["y1", "y2"], [("y2", "y1", 1), ("y1", "y2", -1)])
        bij = check_similar(s, t)
        fwd, inv = morphism_from_similarity(bij, s, t)
        for p in enumerate_cluster_variables(s, 3):
            assert inv.apply(fwd.apply(p)) == p

    def test_not_similar(self):
        t = Seed.initial(["z1", "z2"], ["z1", "z2"], [])
        with pytest.raises(NotSimilar):
            morphism_from_similarity({"y1": "z1", "y2": "z2"}, a2_seed(), t)


class TestMorphismProperties:
    def test_stability_under_biadmissible_mutation(self):
        m = example_map()
        depth = 4
        assert check_cm3(m, depth).passed
        for seq in enumerate_biadmissible(m, 2):
            induced = biadmissible_descendant(m, seq)
            assert check_cm3(induced, depth - len(seq)).passed

    def test_almost_injective_on_verified_maps(self):
        rng = random.Random(31)
        verified = 0
        for _ in range(250):
            s = example_seed() if rng.random() < 0.5 else a2_seed()
            targets = [s, opposite_seed(s)]
            t = targets[rng.randrange(2)]
            m = ClusterMap(s, t, {l: l for l in s.labels})
            if not check_cm3(m, 2).passed:
                continue
            verified += 1
            for x in m.source.exchangeable:
                img = m.assignment[x]
                if isinstance(img, int):
                    continue
                for y in m.source.labels:
                    if y != x:
                        assert m.assignment[y] != img
        assert verified >= 200

    def test_matrix_restriction_law(self):
        # for verified morphisms, b'_{f(x)f(y)} = +/- b_{xy} on surviving
        # exchangeables
        cases = []
        s = example_seed()
        cases.append(identity_map(s))
        cases.append(ClusterMap(s, opposite_seed(s), {l: l for l in s.labels}))
        cases.append(example_map())
        for m in cases:
            assert check_cm3(m, 3).passed
            for x in m.source.exchangeable:
                for y in m.source.exchangeable:
                    fx, fy = m.assignment[x], m.assignment[y]
                    if isinstance(fx, int) or isinstance(fy, int):
                        continue
                    if fx in m.target.exchangeable and fy in m.target.exchangeable:
                        assert abs(m.target.b(fx, fy)) == abs(m.source.b(x, y))


class TestBudgets:
    def test_biadmissible_resource_limit(self):
        from clusterlab.errors import ResourceLimit

        m = identity_map(example_seed())
        with pytest.raises(ResourceLimit):
            enumerate_biadmissible(m, 6, max_nodes=4)


class TestRandomizedSoundness:
    def test_random_condition1_violators_fail_cm3(self):
        rng = random.Random(61)
        failed = 0
        for _ in range(60):
            rank = rng.randint(2, 4)
            labels = [f"v{i}" for i in range(rank)]
            entries = []
            for i in range(rank):
                for j in range(i + 1, rank):
                    b = rng.choice([-1, 0, 1])
                    if b:
                        entries += [
                            (labels[i], labels[j], b),
                            (labels[j], labels[i], -b),
                        ]
            src = Seed.initial(labels, labels, entries)
            # merge two exchangeables onto one target exchangeable
            tgt = Seed.initial(labels, labels, entries)
            assignment = {l: l for l in labels}
            assignment[labels[1]] = labels[0]
            m = ClusterMap(src, tgt, assignment)
            report = check_no_specialization_conditions(m)
            assert not report.condition1
            if not check_cm3(m, 2).passed:
                failed += 1
        assert failed == 60
