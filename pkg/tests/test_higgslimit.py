import random

import pytest

from helpers import rand_nonspecial_spectrum, rand_nonspecial_weight, rand_rational
from paramod.connection import gauge_transform, solve_connection_space, validate_triple
from paramod.exactnum import INF, Poly, ProjectivePoint, Scalar, sc
from paramod.higgslimit import (
    FixedLocusPoint,
    HiggsError,
    StronglyParabolicHiggs,
    cstar_limit,
    fixed_component,
    fixedpoint_canonicalize,
    fiber_dimension,
    gaussian_sqrt,
    higgs_is_stable,
    in_removed_locus,
    quadratic_roots,
    special_loci,
    theta_from_connection,
)
from paramod.parastruct import (
    B,
    BPRIME,
    MarkedConfiguration,
    ParabolicStructure,
    bprime_generic_representative,
    is_decomposable,
)
from paramod.stability import WeightVector, is_stable

CFG = MarkedConfiguration([0, 1, 2, 3, 4])
W_SMALL = WeightVector(["1/8", "1/9", "1/7", "1/11", "1/13"])


def f0_datum():
    s = ParabolicStructure(BPRIME, [0, 0, 0, 0, 0])
    return StronglyParabolicHiggs(BPRIME, s, Poly([1], bound=0), CFG)


def b_datum(theta, flags):
    return StronglyParabolicHiggs(B, ParabolicStructure(B, flags), theta, CFG)


class TestGaussianSqrt:
    def test_rational_square(self):
        assert gaussian_sqrt(sc("9/4")) == sc("3/2")

    def test_negative(self):
        assert gaussian_sqrt(sc(-4)) == Scalar(0, 2)

    def test_gaussian(self):
        s = Scalar.parse("3/5+4/5*i")
        r = gaussian_sqrt(s * s)
        assert r is not None and r * r == s * s

    def test_non_square(self):
        assert gaussian_sqrt(sc(2)) is None
        assert gaussian_sqrt(Scalar.parse("1+i")) is None

    def test_pure_imaginary(self):
        assert gaussian_sqrt(Scalar.parse("2*i")) == Scalar.parse("1+i")
        r = gaussian_sqrt(Scalar.parse("-2*i"))
        assert r is not None and r * r == Scalar.parse("-2*i")

    def test_squares_always_recovered(self):
        rng = random.Random(53)
        for _ in range(60):
            s = Scalar.rational(
                rng.randrange(-20, 21), rng.randrange(1, 9)
            ) + Scalar.rational(rng.randrange(-20, 21), rng.randrange(1, 9)) * Scalar(0, 1)
            sq = s * s
            r = gaussian_sqrt(sq)
            assert r is not None and r * r == sq


class TestQuadraticRoots:
    def test_split(self):
        roots = quadratic_roots(Poly([2, -3, 1], bound=2))
        assert set(roots) == {ProjectivePoint.finite(1), ProjectivePoint.finite(2)}

    def test_degree_drop(self):
        roots = quadratic_roots(Poly([-3, 1, 0], bound=2))
        assert set(roots) == {ProjectivePoint.finite(3), INF}
        assert quadratic_roots(Poly([5, 0, 0], bound=2)) == (INF, INF)

    def test_irrational(self):
        assert quadratic_roots(Poly([-2, 0, 1], bound=2)) is None


class TestHiggsData:
    def test_strong_parabolicity_enforced(self):
        theta = Poly([1], bound=2)  # nowhere vanishing on the marked set
        with pytest.raises(HiggsError):
            b_datum(theta, [INF, 0, 0, 0, 0])
        b_datum(theta, [0, 0, 0, 0, 0])

    def test_upper_choice_at_zero_allowed(self):
        theta = Poly([0, 1], bound=2)  # vanishes at z_1 = 0
        h = b_datum(theta, [INF, 0, 0, 0, 0])
        assert h.marked_zero_indices() == [0]

    def test_f0_stability(self):
        h = f0_datum()
        assert higgs_is_stable(h, CFG, W_SMALL)

    def test_b_lower_flags_stability_flip(self):
        theta = Poly([1], bound=2)
        h = b_datum(theta, [0, 0, 0, 0, 0])
        assert higgs_is_stable(h, CFG, W_SMALL)
        big = WeightVector(["1/2", "1/2", "1/3", "1/3", "1/3"])
        assert not higgs_is_stable(h, CFG, big)

    def test_zero_theta_reduces_to_parabolic(self):
        h = b_datum(Poly.zero(2), [0, 0, 0, 0, 1])
        w = WeightVector.uniform(sc("4/15"))
        assert higgs_is_stable(h, CFG, w) == is_stable(h.structure, CFG, w).stable

    def test_zero_theta_not_fixed_in_small_regime(self):
        h = b_datum(Poly.zero(2), [0, 0, 0, 0, INF])
        assert fixed_component(h, CFG, W_SMALL) == "NotFixed"


class TestThetaFromConnection:
    def test_valid_connection_degree_two(self):
        rng = random.Random(3)
        while True:
            s = ParabolicStructure(
                B, [rand_rational(rng, -9, 9, 4) for _ in range(5)]
            )
            if not is_decomposable(s, CFG)[0] and all(
                not u.value.is_zero() for u in s.flags
            ):
                break
        nu = rand_nonspecial_spectrum(rng, d=1)
        space = solve_connection_space(s, CFG, nu)
        theta = theta_from_connection(space.connection_at([1, 2]), CFG)
        assert theta.bound == 2

    def test_zero_offdiagonal(self):
        from paramod.connection import LogConnection

        plus = [sc("1/3"), sc("-1/3"), sc("1/2"), sc("-1/2"), sc(0)]
        minus = [sc("-1/5")] * 5
        conn = LogConnection(B, [((p, 0), (0, m)) for p, m in zip(plus, minus)])
        assert theta_from_connection(conn, CFG).is_zero()

    def test_raw_numerator_cancellation(self):
        # residues (1, -1, 0, 0, 0): the top coefficient cancels but the next
        # one survives, so the numerator has degree 3, not 2: such residue
        # data is not the upper entry of any holomorphic connection
        from paramod.connection import RationalEntry
        from paramod.exactnum import monic_from_roots, ExactError

        entry = RationalEntry(CFG, [1, -1, 0, 0, 0])
        raw = entry.cleared_numerator()
        expected = monic_from_roots([1, 2, 3, 4]) - monic_from_roots([0, 2, 3, 4])
        assert raw == expected
        assert raw.degree() == 3
        with pytest.raises(ExactError):
            raw.shrink(2)

    def test_balanced_numerator_degree_two(self):
        from paramod.connection import RationalEntry

        entry = RationalEntry(CFG, [1, -2, 1, 0, 0])
        raw = entry.cleared_numerator()
        assert raw.degree() <= 2


class TestSpecialLoci:
    def test_counts(self):
        loci = special_loci(CFG)
        assert len(loci.points) == 15
        assert len([1 for (i, j) in loci.points if i < j]) == 10
        assert len([1 for (i, j) in loci.points if i == j]) == 5
        assert len(loci.lines) == 5

    def test_incidence(self):
        loci = special_loci(CFG)
        for (i, j), pt in loci.points.items():
            for k in (i, j):
                dual = loci.lines[k]["dual"]
                pairing = sum((a * b for a, b in zip(pt, dual)), sc(0))
                assert pairing.is_zero()

    def test_line_parametrization_lands_on_line(self):
        loci = special_loci(CFG)
        for i in range(5):
            pt = loci.lines[i]["parametrization"](sc("7/3"))
            dual = loci.lines[i]["dual"]
            assert sum((a * b for a, b in zip(pt, dual)), sc(0)).is_zero()


def interior_point(flag_choice=()):
    theta = Poly([sc("7/2"), 1, 1], bound=2)  # no marked zeros on 0..4
    for z in CFG.z:
        assert not theta(z).is_zero()
    from paramod.higgslimit import _normalize_theta

    return FixedLocusPoint("F1", "bottom", _normalize_theta(theta), None, None, flag_choice)


class TestCanonicalize:
    def test_interior_goes_top(self):
        p = interior_point()
        q = fixedpoint_canonicalize(p, CFG)
        assert q.chart == "top"
        assert fixedpoint_canonicalize(q, CFG) == q

    def test_marked_line_swaps_to_exceptional(self):
        from paramod.higgslimit import _normalize_theta
        from paramod.exactnum import monic_from_roots

        theta = monic_from_roots([CFG.z[0], sc("9/2")]).shrink(2)
        p = FixedLocusPoint("F1", "bottom", _normalize_theta(theta), None, None, ((0, "lower"),))
        q = fixedpoint_canonicalize(p, CFG)
        assert q.chart == "top"
        assert q.exceptional_index == 0
        assert q.tangent == ProjectivePoint.finite(sc("9/2"))
        assert fixedpoint_canonicalize(q, CFG) == q

    def test_intersection_point_fixed(self):
        p = FixedLocusPoint(
            "F1", "bottom", None, 2, ProjectivePoint.finite(CFG.z[2]), ((2, "upper"),)
        )
        assert fixedpoint_canonicalize(p, CFG) == p

    def test_double_marked_pair_stays_separated(self):
        top = FixedLocusPoint(
            "F1", "top", None, 1, ProjectivePoint.finite(CFG.z[1]), ((1, "lower"),)
        )
        bottom = FixedLocusPoint(
            "F1", "bottom", None, 1, ProjectivePoint.finite(CFG.z[1]), ((1, "upper"),)
        )
        assert fixedpoint_canonicalize(top, CFG) == top
        assert fixedpoint_canonicalize(bottom, CFG) == bottom
        assert top != bottom

    def test_two_marked_zero_class(self):
        from paramod.higgslimit import _normalize_theta
        from paramod.exactnum import monic_from_roots

        theta = monic_from_roots([CFG.z[1], CFG.z[3]]).shrink(2)
        line_top = FixedLocusPoint("F1", "top", _normalize_theta(theta), None, None)
        exc_hi = FixedLocusPoint(
            "F1", "bottom", None, 3, ProjectivePoint.finite(CFG.z[1])
        )
        c1 = fixedpoint_canonicalize(line_top, CFG)
        c2 = fixedpoint_canonicalize(exc_hi, CFG)
        assert c1 == c2
        assert c1.exceptional_index == 1
        assert c1.chart == "bottom"

    def test_gamma_membership(self):
        p = FixedLocusPoint(
            "F1", "bottom", None, 2, ProjectivePoint.finite(sc("11/7"))
        )
        assert in_removed_locus(p, CFG)
        q = FixedLocusPoint(
            "F1", "bottom", None, 2, ProjectivePoint.finite(CFG.z[4])
        )
        assert not in_removed_locus(q, CFG)


def solved_b_triple(rng, flags=None):
    if flags is None:
        while True:
            s = ParabolicStructure(
                B, [rand_rational(rng, -9, 9, 4) for _ in range(5)]
            )
            if not is_decomposable(s, CFG)[0]:
                break
    else:
        s = ParabolicStructure(B, flags)
    nu = rand_nonspecial_spectrum(rng, d=1)
    space = solve_connection_space(s, CFG, nu)
    params = [rand_rational(rng, -4, 4, 2) for _ in range(space.dim)]
    return space.triple_at(params)


class TestCstarLimit:
    def test_b_triple_limit_is_f1(self):
        rng = random.Random(11)
        t = solved_b_triple(rng)
        w = rand_nonspecial_weight(rng, total_below=1)
        res = cstar_limit(t, w)
        assert res.point.component == "F1"
        assert res.higgs.is_nilpotent_nonzero()
        assert higgs_is_stable(res.higgs, CFG, w)
        assert fixed_component(res.higgs, CFG, w) == "F1"
        assert len([c for c in res.candidates if c.stable]) == 1

    def test_bprime_limit_is_f0(self):
        rng = random.Random(13)
        s = bprime_generic_representative(CFG)
        nu = rand_nonspecial_spectrum(rng, d=1)
        space = solve_connection_space(s, CFG, nu)
        t = space.triple_at([1, 2])
        w = rand_nonspecial_weight(rng, total_below=1)
        res = cstar_limit(t, w)
        assert res.point.component == "F0"
        assert fixed_component(res.higgs, CFG, w) == "F0"

    def test_dichotomy(self):
        rng = random.Random(17)
        for _ in range(5):
            t = solved_b_triple(rng)
            w = rand_nonspecial_weight(rng, total_below=1)
            res = cstar_limit(t, w)
            theta_nonzero = res.higgs.is_nilpotent_nonzero()
            from paramod.stability import OnWallError

            try:
                underlying_stable = is_stable(res.higgs.structure, CFG, w).stable
            except OnWallError:
                continue
            assert theta_nonzero == (not underlying_stable)

    def test_gauge_invariance(self):
        rng = random.Random(19)
        t = solved_b_triple(rng)
        w = rand_nonspecial_weight(rng, total_below=1)
        base = cstar_limit(t, w)
        for _ in range(3):
            params = [
                Scalar.rational(rng.choice([1, 2, 3, -2]), rng.choice([1, 3])),
                rand_rational(rng, -3, 3, 2),
                rand_rational(rng, -3, 3, 2),
            ]
            t2 = gauge_transform(t, params)
            ok, violations = validate_triple(t2)
            assert ok, violations
            res2 = cstar_limit(t2, w)
            assert res2.point == base.point

    def test_rejects_large_weight(self):
        rng = random.Random(23)
        t = solved_b_triple(rng)
        w = WeightVector.uniform(sc("4/15"))
        with pytest.raises(HiggsError):
            cstar_limit(t, w)

    def test_idempotence_on_fixed_coordinates(self):
        rng = random.Random(29)
        t = solved_b_triple(rng)
        w = rand_nonspecial_weight(rng, total_below=1)
        res = cstar_limit(t, w)
        assert fixedpoint_canonicalize(res.point, CFG) == res.point


class TestFiberDimension:
    def test_f0(self):
        rng = random.Random(31)
        nu = rand_nonspecial_spectrum(rng, d=1)
        assert fiber_dimension(FixedLocusPoint("F0"), CFG, nu) == 2

    def test_f1_generic(self):
        rng = random.Random(37)
        nu = rand_nonspecial_spectrum(rng, d=1)
        assert fiber_dimension(interior_point(), CFG, nu) == 2

    def test_f1_marked_zero_both_choices(self):
        rng = random.Random(41)
        nu = rand_nonspecial_spectrum(rng, d=1)
        for choice in ("lower", "upper"):
            p = FixedLocusPoint(
                "F1",
                "top",
                None,
                1,
                ProjectivePoint.finite(sc("17/5")),
                ((1, choice),),
            )
            assert fiber_dimension(p, CFG, nu) == 2

    def test_limit_fibers(self):
        rng = random.Random(43)
        t = solved_b_triple(rng)
        w = rand_nonspecial_weight(rng, total_below=1)
        res = cstar_limit(t, w)
        assert fiber_dimension(res.point, CFG, t.spectrum) == 2


class TestDegreeSplitBound:
    def test_limits_within_k_range(self):
        # w-bound ceil(sum w) = 1: admissible splits for nonzero fixed Higgs
        rng = random.Random(47)
        d, wbound = 1, 1
        lo = (d - wbound) // 2
        hi = (d + 3) // 2
        allowed = set()
        for k in range(1, hi - lo + 1):
            allowed.add((d - k - lo, lo + k))
        assert (0, 1) in allowed and (-1, 2) in allowed
        for _ in range(3):
            t = solved_b_triple(rng)
            w = rand_nonspecial_weight(rng, total_below=1)
            res = cstar_limit(t, w)
            b = res.higgs.bundle
            assert (b.d0, b.d1) in allowed
