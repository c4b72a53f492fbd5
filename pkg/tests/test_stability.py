import random
from itertools import combinations, permutations

import pytest

from helpers import (
    oracle_is_stable,
    rand_config,
    rand_nonspecial_weight,
    rand_structure,
)
from paramod.exactnum import INF, Poly, Scalar, sc
from paramod.parastruct import (
    B,
    BPRIME,
    MarkedConfiguration,
    ParabolicStructure,
    classify,
)
from paramod.stability import (
    ChamberDescriptor,
    OnWallError,
    WeightVector,
    chamber_classify,
    destabilizing_candidates,
    formal_resultant,
    is_stable,
    no_stable_structure,
    s_value,
    stabilizing_weight,
    weight_is_kostov_generic,
)

CFG = MarkedConfiguration([0, 1, 2, 3, 4])
W14 = WeightVector.uniform(sc("1/4"))


class TestKostovGeneric:
    def test_quarter_weights(self):
        assert weight_is_kostov_generic(W14, 1)

    def test_fifth_weights(self):
        assert not weight_is_kostov_generic(WeightVector.uniform(sc("1/5")), 1)

    def test_zero_weights(self):
        w0 = WeightVector.uniform(0)
        assert weight_is_kostov_generic(w0, 1)
        assert not weight_is_kostov_generic(w0, 2)


class TestSValue:
    def test_direct_formula(self):
        assert s_value(1, 1, set(), W14) == sc("1/4")

    def test_full_contact_threshold(self):
        w = WeightVector.uniform(sc("1/4"))
        assert s_value(1, -1, set(range(5)), w) == sc(3) - w.total()

    def test_degree_zero_positive(self):
        assert s_value(1, 0, set(), W14) == sc(1) + W14.total()

    def test_permutation_equivariance(self):
        rng = random.Random(2)
        w = [Scalar.rational(rng.randrange(0, 8), 9) for _ in range(5)]
        contact = {0, 2}
        base = s_value(1, 0, contact, WeightVector(w))
        for perm in list(permutations(range(5)))[:24]:
            wp = WeightVector([w[perm[i]] for i in range(5)])
            cp = {perm.index(i) for i in contact}
            assert s_value(1, 0, cp, wp) == base


class TestFormalResultant:
    def test_coprime(self):
        # q = z, r = z - 1 at formal degrees (1, 2): no projective common root
        assert not formal_resultant([sc(0), sc(1)], 1, [sc(-1), sc(1), sc(0)], 2).is_zero()

    def test_common_affine_root(self):
        # q = z, r = z^2
        assert formal_resultant([sc(0), sc(1)], 1, [sc(0), sc(0), sc(1)], 2).is_zero()

    def test_common_root_at_infinity(self):
        # both drop formal degree: q = 1 (bound 1), r = z (bound 2)
        assert formal_resultant([sc(1), sc(0)], 1, [sc(0), sc(1), sc(0)], 2).is_zero()


class TestCandidates:
    def test_degree_one_contact_is_infinity_set(self):
        s = ParabolicStructure(B, [INF, 0, 1, INF, 5])
        cands = [c for c in destabilizing_candidates(s, CFG) if c.degree == 1]
        assert len(cands) == 1
        assert cands[0].contact == frozenset({0, 3})

    def test_full_contact_when_determinant_vanishes(self):
        # flags cut out by the base-point-free map (z - 5, z^2 + 1): the
        # determinant vanishes and the full contact set is achieved
        q = Poly([-5, 1])
        r = Poly([1, 0, 1])
        s = ParabolicStructure(B, [r(z) / q(z) for z in CFG.z])
        from helpers import _delta_matrix

        assert _delta_matrix(s, CFG).det().is_zero()
        cands = [c for c in destabilizing_candidates(s, CFG) if c.degree == -1]
        assert len(cands) == 1
        assert cands[0].contact == frozenset(range(5))

    def test_collinear_full_contact_saturates_to_degree_zero(self):
        # along the collinear locus every degree -1 full-contact map has a
        # base point; the saturated witness appears at degree 0 instead
        s = ParabolicStructure(B, [0, 1, 2, 3, 4])
        cands = destabilizing_candidates(s, CFG)
        deg0 = [c for c in cands if c.degree == 0]
        assert any(c.contact == frozenset(range(5)) for c in deg0)
        assert all(c.contact != frozenset(range(5)) for c in cands if c.degree == -1)

    def test_generic_four_point_contacts(self):
        rng = random.Random(9)
        for _ in range(5):
            s = rand_structure(rng, B, n_inf=0)
            from helpers import _delta_matrix

            if _delta_matrix(s, CFG).det().is_zero():
                continue
            cands = [c for c in destabilizing_candidates(s, CFG) if c.degree == -1]
            contacts = {c.contact for c in cands}
            assert contacts == {
                frozenset(x) for x in combinations(range(5), 4)
            }

    def test_witnesses_hit_their_contacts(self):
        rng = random.Random(31)
        for _ in range(10):
            s = rand_structure(rng, B)
            for cand in destabilizing_candidates(s, CFG):
                for i in cand.contact:
                    qv, rv = cand.fiber_at(CFG.z[i])
                    u = s.flags[i]
                    if u.is_infinity():
                        assert qv.is_zero() and not rv.is_zero()
                    else:
                        assert rv == u.value * qv

    def test_bprime_degrees(self):
        rng = random.Random(12)
        s = rand_structure(rng, BPRIME, n_inf=0)
        degs = {c.degree for c in destabilizing_candidates(s, CFG)}
        assert degs <= {-1, 2}
        assert 2 in degs


class TestIsStable:
    def test_bump_structure_stable_at_quarter(self):
        s = ParabolicStructure(B, [0, 0, 0, 0, 1])
        report = is_stable(s, CFG, W14)
        assert report.stable
        assert report.margin == sc("1/4")

    def test_bump_structure_unstable_at_tenth(self):
        s = ParabolicStructure(B, [0, 0, 0, 0, 1])
        report = is_stable(s, CFG, WeightVector.uniform(sc("1/10")))
        assert not report.stable
        assert report.worst.degree == 1
        assert report.margin == sc("-1/2")

    def test_two_infinity_chamber_weight(self):
        s = ParabolicStructure(B, [INF, INF, 0, 1, 3])
        w = WeightVector(["3/4", "1/4", "3/4", "3/4", "3/4"])
        assert is_stable(s, CFG, w).stable

    def test_on_wall_reported(self):
        s = ParabolicStructure(B, [0, 0, 0, 0, 1])
        with pytest.raises(OnWallError):
            is_stable(s, CFG, WeightVector.uniform(sc("1/5")))


class TestOracleAgreement:
    def test_random_instances_match_case_analysis(self):
        rng = random.Random(77)
        for _ in range(120):
            cfg = rand_config(rng)
            bundle = rng.choice([B, B, BPRIME])
            s = rand_structure(rng, bundle)
            w = rand_nonspecial_weight(rng)
            try:
                verdict = is_stable(s, cfg, w).stable
            except OnWallError:
                continue
            assert verdict == oracle_is_stable(s, cfg, w)


class TestStabilizingWeight:
    def test_witness_values(self):
        assert stabilizing_weight(classify(ParabolicStructure(B, [0, 0, 1, 0, 0]), CFG)) == WeightVector.uniform(sc("4/15"))
        st = classify(ParabolicStructure(B, [0, INF, 1, 0, 0]), CFG)
        assert stabilizing_weight(st) == WeightVector.uniform(sc("7/15"))
        st2 = classify(ParabolicStructure(B, [INF, INF, 0, 1, 3]), CFG)
        assert stabilizing_weight(st2) == WeightVector(
            ["11/15", "4/15", "11/15", "11/15", "11/15"]
        )

    def test_witnesses_are_non_special(self):
        from paramod.stability import weight_is_non_special

        for st in [
            classify(ParabolicStructure(B, [0, 0, 1, 0, 0]), CFG),
            classify(ParabolicStructure(B, [0, INF, 1, 0, 0]), CFG),
            classify(ParabolicStructure(B, [INF, INF, 0, 1, 3]), CFG),
        ]:
            assert weight_is_non_special(stabilizing_weight(st), 1)

    def test_rejects_decomposable(self):
        from paramod.parastruct import StratumError

        st = classify(ParabolicStructure(B, [INF, INF, INF, 0, 0]), CFG)
        with pytest.raises(StratumError):
            stabilizing_weight(st)


class TestEmptiness:
    def test_small_total(self):
        assert no_stable_structure(WeightVector.uniform(sc("1/10")), B)

    def test_chamber_weight_admits_stable(self):
        assert not no_stable_structure(WeightVector.uniform(sc("4/15")), B)

    def test_bprime_quarter(self):
        assert no_stable_structure(W14, BPRIME)

    def test_matches_search(self):
        rng = random.Random(123)
        w_empty = WeightVector.uniform(sc("1/10"))
        for _ in range(300):
            s = rand_structure(rng, B)
            try:
                assert not is_stable(s, CFG, w_empty).stable
            except OnWallError:
                pass


class TestMonotonicity:
    def test_degree_one_weight_growth(self):
        rng = random.Random(55)
        for n_inf, expected_sign in [(3, -1), (4, -1), (5, -1), (0, 1), (1, 1), (2, 1)]:
            s = rand_structure(rng, B, n_inf=n_inf)
            contact = set(s.infinity_indices())
            w_small = WeightVector.uniform(sc("1/8"))
            w_big = WeightVector.uniform(sc("1/4"))
            delta = s_value(1, 1, contact, w_big) - s_value(1, 1, contact, w_small)
            if expected_sign < 0:
                assert delta < sc(0)
            else:
                assert delta > sc(0)


class TestChambers:
    def test_quarter_weight_descriptor(self):
        desc = chamber_classify(W14, 1)
        assert isinstance(desc, ChamberDescriptor)
        assert "+++++ > 1" in desc.inequalities
        assert "+++++ < 3" in desc.inequalities

    def test_fifth_weight_on_wall(self):
        with pytest.raises(OnWallError):
            chamber_classify(WeightVector.uniform(sc("1/5")), 1)

    def test_zero_weight_valid(self):
        desc = chamber_classify(WeightVector.uniform(0), 1)
        assert desc.inequalities
