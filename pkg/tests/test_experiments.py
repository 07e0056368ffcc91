import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ietlab.exact import GeneratorBasis
from ietlab.experiments import (classify, example1, example2, example3_independent, example3_perturbed,
                                example3_rational, example4_independent, family_instance,
                                gasket_b_point, random_keane_iet, random_rank_two, random_rich_instance,
                                random_slice_b_point, scan, scan_csv, SCAN_HEADER)
from ietlab.gasket import GasketPoint, gasket_membership, render_raster
from ietlab.linalg import rank

F = Fraction


def test_example_builders_have_unit_length():
    for T in (example1(3), example2(F(1, 5), F(3, 10), F(3, 10)), example3_rational(F(1, 10), F(3, 20)),
              example3_independent(), example3_perturbed(F(1, 10), F(3, 20)), example4_independent()):
        assert T.total == 1


def test_example_relations():
    T = example3_independent()
    a1, a2, a3, a4 = T.lengths
    assert 3 * a1 == a2 + a4 and 4 * a1 + a3 == 1
    T = example4_independent()
    a = T.lengths
    assert a[0] == a[4] == a[5] and a[1] == a[6] and a[2] == a[3]


def test_classify_reports():
    rep = classify(example3_independent(), depth=2000, power_cap=8)
    assert rep["genus"] == 2 and rep["sCount"] == 1
    assert rep["verdict"] == "poor"
    assert rep["separatingCycle"] is not None
    assert rep["minimality"]["kind"] == "NoObstructionUpTo"
    rep = classify(example4_independent())
    assert rep["genus"] == 3 and rep["sCount"] == 2
    assert rep["verdict"] == "rich" and rep["separatingCycle"] is None
    assert "minimality" not in rep


def test_example3_scan_matches_predicate():
    rows = scan("example3square", 12, 12, 3000, 8)
    assert len(rows) == 144
    inside = 0
    for col, row, a1, a2, kind, cert in rows:
        if kind == "Outside":
            continue
        inside += 1
        a1, a2 = F(a1), F(a2)
        if abs(a2 - a1) < F(1, 16):
            continue
        assert (kind == "NonMinimalPeriodic") == (a2 > a1), (a1, a2, kind)
        if kind == "NonMinimalPeriodic":
            assert cert.startswith("period=")
    assert inside > 30


def test_example3_raster_matches_scan():
    w = 8
    pixels = render_raster("example3square", w, w, 0)
    rows = scan("example3square", w, w, 2000, 8)
    for (col, row, a1, a2, kind, _), px in zip(rows, pixels):
        if kind != "Outside" and a1 != a2:
            assert (px == 0) == (kind != "NonMinimalPeriodic")


def test_slice_scan_matches_raster():
    w, depth = 24, 8
    pixels = render_raster("example4slice", w, w, depth)
    rows = scan("example4slice", w, w, depth)
    assert [r[:2] for r in rows] == [[c, r] for r in range(w) for c in range(w)]
    for row, px in zip(rows, pixels):
        assert (px == 0) == (row[4] not in ("Escaped", "Outside"))


def test_scan_csv_header():
    assert scan_csv([]).strip() == ",".join(SCAN_HEADER)
    assert scan("example4slice", 0, 3, 5) == []


@given(st.integers(0, 10 ** 6))
def test_random_rich_instances_are_rich(seed):
    rng = random.Random(seed)
    T = random_rich_instance(rng, rng.randint(2, 7), rng.randint(1, 3))
    assert T.total == 1
    assert classify(T)["verdict"] == "rich"


def test_keane_and_rank_two_generators():
    rng = random.Random(3)
    for _ in range(5):
        T = random_keane_iet(rng, 5)
        assert rank(T.coefficient_matrix()) == 5 and T.perm.is_irreducible()
        S = random_rank_two(rng, 6)
        assert rank(S.coefficient_matrix()) <= 2 and S.total == 1


def test_gasket_b_points_survive():
    rng = random.Random(1)
    survived = 0
    for _ in range(5):
        _, b1, b2 = gasket_b_point(rng, 30)
        b, T = family_instance(b1, b2)
        assert T.total == 1
        survived += gasket_membership(GasketPoint(b), 40).kind == "SurvivedDepth"
    assert survived >= 4


def test_random_slice_points_are_admissible():
    rng = random.Random(2)
    for _ in range(5):
        b1, b2 = random_slice_b_point(rng)
        b, T = family_instance(b1, b2)
        assert all(x.sign() > 0 for x in T.lengths)
