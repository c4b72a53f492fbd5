"""Wall-crossing shadows of the moduli-chart construction.

Crossing from the uniform 4/15 chamber to the 7/15 chamber destabilizes
exactly the five coordinate classes (the blow-up centers) while the
one-infinity strata become stable; crossing into an 11/15-pattern chamber
flips a specific finite list of classes, and the two-infinity strata
containing the distinguished index become stable.  All instances are decided
exactly by the witness enumeration.
"""

from itertools import combinations

import pytest

from paramod.exactnum import INF, sc
from paramod.parastruct import (
    B,
    BPRIME,
    MarkedConfiguration,
    ParabolicStructure,
    classify,
)
from paramod.stability import WeightVector, is_stable, stabilizing_weight

CFG = MarkedConfiguration([0, 1, 2, 3, 4])
W1 = WeightVector.uniform(sc("4/15"))
W2 = WeightVector.uniform(sc("7/15"))


def w_pattern(j):
    w = [sc("11/15")] * 5
    w[j] = sc("4/15")
    return WeightVector(w)


def coordinate_structure(i):
    return ParabolicStructure(B, [1 if k == i else 0 for k in range(5)])


class TestFirstWall:
    def test_coordinate_classes_flip(self):
        # stable in the low chamber, unstable after the wall at 1/3
        for i in range(5):
            s = coordinate_structure(i)
            assert is_stable(s, CFG, W1).stable
            report = is_stable(s, CFG, W2)
            assert not report.stable
            assert report.worst.degree == 0
            assert len(report.worst.contact) == 4

    def test_one_infinity_strata_become_stable(self):
        for i in range(5):
            flags = [INF if k == i else sc(k + 1) ** 2 for k in range(5)]
            s = ParabolicStructure(B, flags)
            assert classify(s, CFG).family == "Ui"
            assert not is_stable(s, CFG, W1).stable
            assert is_stable(s, CFG, W2).stable


class TestSecondWall:
    # the classes listed as unstable in the 11/15-pattern chamber at j = 2
    INFINITY_CLASSES = [
        [INF, 1, 0, 0, 0],
        [1, INF, 0, 0, 0],
        [0, INF, 1, 0, 0],
        [0, INF, 0, 1, 0],
        [0, INF, 0, 0, 1],
        [0, 1, INF, 0, 0],
        [0, 1, 0, INF, 0],
        [0, 1, 0, 0, INF],
    ]

    def test_listed_infinity_classes_flip(self):
        w12 = w_pattern(1)
        for flags in self.INFINITY_CLASSES:
            s = ParabolicStructure(B, flags)
            assert is_stable(s, CFG, W2).stable, flags
            assert not is_stable(s, CFG, w12).stable, flags

    def test_line_families_unstable(self):
        # classes through pairs of blown-up points: representatives with two
        # free entries supported at a pair containing the distinguished index
        w12 = w_pattern(1)
        for u1, u2 in [(sc(3), sc(7)), (sc("1/2"), sc(-5))]:
            s = ParabolicStructure(B, [u1, u2, 0, 0, 0])
            assert not is_stable(s, CFG, w12).stable

    def test_two_infinity_strata_through_index_stable(self):
        w12 = w_pattern(1)
        for pair in [(0, 1), (1, 2), (1, 3), (1, 4)]:
            count = 0
            for vals in [(0, 1, 3), (2, 5, 11), (1, 4, 9)]:
                flags = []
                it = iter(vals)
                for k in range(5):
                    flags.append(INF if k in pair else sc(next(it)))
                s = ParabolicStructure(B, flags)
                if classify(s, CFG).family != "UijDoublePrime":
                    continue
                count += 1
                assert is_stable(s, CFG, w12).stable, (pair, vals)
            assert count >= 2

    def test_two_infinity_strata_missing_index_unstable(self):
        w12 = w_pattern(1)
        for pair in [(0, 2), (2, 3), (3, 4), (0, 4)]:
            flags = []
            vals = iter((0, 1, 3))
            for k in range(5):
                flags.append(INF if k in pair else sc(next(vals)))
            s = ParabolicStructure(B, flags)
            if classify(s, CFG).family != "UijDoublePrime":
                continue
            assert not is_stable(s, CFG, w12).stable, pair


class TestBprimeCoordinateStructure:
    def test_stable_in_three_patterns(self):
        s = ParabolicStructure(BPRIME, [1, 0, 0, 0, 0])
        assert classify(s, CFG).family == "BprimeGenericIndec"
        for j in (1, 2, 3):
            assert is_stable(s, CFG, w_pattern(j)).stable

    def test_stabilizing_weight_works_for_generic_orbit(self):
        s = ParabolicStructure(BPRIME, [1, 0, 0, 0, 0])
        w = stabilizing_weight(classify(s, CFG))
        assert is_stable(s, CFG, w).stable
