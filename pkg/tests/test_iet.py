import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from oracles import brute_eval, rational_lengths
from ietlab.errors import DomainError, RauzyTie, ReduciblePermutation, ResourceLimit
from ietlab.exact import GeneratorBasis
from ietlab.experiments import example3_independent, random_keane_iet
from ietlab.iet import (Iet, NoObstructionUpTo, NonMinimalPeriodic, Permutation, PiecewiseTranslation,
                        SaddleConnection, detect_fixed_intervals, first_return, frequency_deviation,
                        iet_compose, iet_eval, iet_new, iet_power, induced_pieces,
                        minimality_verdict, occupation_vector, rauzy_step, saddle_connection_search,
                        _orbit_scan)

GOLD = GeneratorBasis.golden()
PHI = GOLD["phi"]
R = GeneratorBasis.rational()


def golden_rotation():
    return iet_new([2, 1], [2 - PHI, PHI - 1])


def rotation(r):
    r = Fraction(r)
    return Iet.from_rationals([2, 1], [1 - r, r])


@st.composite
def rational_iets(draw, max_n=6):
    n = draw(st.integers(2, max_n))
    perm = draw(st.permutations(list(range(1, n + 1))))
    assume(Permutation(perm).is_irreducible())
    w = draw(st.lists(st.integers(1, 30), min_size=n, max_size=n))
    total = sum(w)
    return Iet.from_rationals(perm, [Fraction(x, total) for x in w])


def points(T, count, rng):
    den = 997
    return [R.const(Fraction(rng.randrange(den), den)) for _ in range(count)]


# -- construction ---------------------------------------------------------------------


def test_golden_rotation_is_valid():
    T = golden_rotation()
    assert T.total == 1
    assert T.x[1] == 2 - PHI


def test_second_example_data_valid():
    T = Iet.from_rationals([2, 4, 3, 1], ["1/5", "3/10", "3/10", "1/5"])
    assert T.lengths[0] == T.lengths[3]


def test_reducible_rejected():
    with pytest.raises(ReduciblePermutation):
        Iet.from_rationals([1, 2], ["1/2", "1/2"])
    with pytest.raises(ReduciblePermutation):
        Iet.from_rationals([2, 1, 3], ["1/3", "1/3", "1/3"])


def test_bad_lengths_rejected():
    with pytest.raises(DomainError):
        Iet.from_rationals([2, 1], ["1/2", "0"])
    with pytest.raises(DomainError):
        Iet.from_rationals([2, 1], ["1/2", "1/3"])
    with pytest.raises(DomainError):
        Permutation([1, 1])


def test_novak_permutation():
    assert Permutation.novak(2).images == (4, 3, 2, 1)
    assert Permutation.novak(3).images == (4, 3, 6, 5, 2, 1)
    assert all(Permutation.novak(k).is_irreducible() for k in range(2, 8))


# -- evaluation ---------------------------------------------------------------------------


def test_second_example_fixes_third_interval():
    T = Iet.from_rationals([2, 4, 3, 1], ["1/5", "3/10", "3/10", "1/5"])
    for q in ("1/2", "3/5", "79/100"):
        x = R.const(Fraction(q))
        assert iet_eval(T, x) == x


def test_golden_rotation_at_zero():
    assert iet_eval(golden_rotation(), GOLD.zero()) == PHI - 1


def test_eval_outside_rejected():
    with pytest.raises(DomainError):
        iet_eval(golden_rotation(), GOLD.one())


@given(rational_iets(), st.randoms())
def test_inverse_round_trip_and_brute_oracle(T, rng):
    lengths = rational_lengths(T)
    for x in points(T, 20, rng):
        y = iet_eval(T, x)
        assert y.rational() == brute_eval(T.perm.images, lengths, x.rational())
        assert iet_eval(T, y, "inv") == x


@given(rational_iets())
def test_inverse_from_data_matches_inverse_map(T):
    inv = T.inverse_iet().to_pt()
    assert inv == T.to_pt().inverse()


# -- composition and powers -------------------------------------------------------------------


def test_compose_with_inverse_is_identity():
    T = golden_rotation().to_pt()
    assert iet_compose(T, T.inverse()).is_identity()


def test_rotation_group_law():
    S, T = rotation("1/3"), rotation("1/2")
    C = iet_compose(S.to_pt(), T.to_pt())
    assert C == rotation("5/6").to_pt()
    assert len(C) == 2


def _breakpoint_count_oracle(S, T):
    """``|cuts(S) u S^{-1}(cuts(T))|`` computed by brute force on rationals."""
    cuts = {p[0].rational() for p in S.pieces}
    for l, _, _ in T.pieces:
        cuts.add(S.inverse()(l).rational())
    return len(cuts)


@given(rational_iets(), rational_iets())
def test_compose_piece_count(S, T):
    S, T = S.to_pt(), T.to_pt()
    C = iet_compose(S, T)
    C.check()
    assert len(C) <= len(S) + len(T) - 1
    assert len(C) <= _breakpoint_count_oracle(S, T)


@given(rational_iets(), st.integers(0, 6), st.randoms())
def test_power_matches_iterated_eval(T, p, rng):
    P = iet_power(T, p)
    P.check()
    for x in points(T, 100, rng):
        y = x
        for _ in range(p):
            y = T(y)
        assert P(x) == y


@given(rational_iets(), st.integers(0, 996), st.integers(1, 996))
def test_measure_preservation(T, c, w):
    c = Fraction(c, 997)
    d = min(Fraction(1), c + Fraction(w, 997))
    assume(c < d)
    P = T.to_pt()
    total = Fraction(0)
    for l, r, s in P.pieces:
        lo = max(l.rational() + s.rational(), c)
        hi = min(r.rational() + s.rational(), d)
        if lo < hi:
            total += hi - lo
    assert total == d - c


def test_power_zero_and_golden_square():
    T = golden_rotation()
    assert iet_power(T, 0).is_identity()
    P = iet_power(T, 2)
    r = 2 * (PHI - 1) - 1
    assert P == PiecewiseTranslation([(GOLD.zero(), 1 - r, r), (1 - r, GOLD.one(), r - 1)])


def test_power_piece_cap():
    with pytest.raises(ResourceLimit):
        iet_power(golden_rotation(), 5, piece_cap=1)


def test_third_example_fourth_power_fixed_piece():
    T = Iet.from_rationals([2, 4, 3, 1], ["1/10", "2/10", "6/10", "1/10"])
    fixed = detect_fixed_intervals(iet_power(T, 4))
    assert any(l <= 0 and Fraction(1, 10) <= r for l, r in fixed)


def test_fixed_intervals_of_identity_and_second_example():
    T = Iet.from_rationals([2, 4, 3, 1], ["1/5", "3/10", "3/10", "1/5"])
    assert detect_fixed_intervals(iet_power(T, 0)) == [(R.zero(), R.one())]
    assert detect_fixed_intervals(T.to_pt()) == [(T.x[2], T.x[3])]


# -- saddle connections -----------------------------------------------------------------


def test_golden_rotation_has_no_connection():
    assert saddle_connection_search(golden_rotation(), 10 ** 5) is None


def test_rational_rotation_connection():
    hit = saddle_connection_search(rotation("3/5"), 10)
    assert hit is not None and hit[2] <= 5


def test_third_example_rational_connection():
    T = Iet.from_rationals([2, 4, 3, 1], ["1/10", "3/20", "3/5", "3/20"])
    hit = saddle_connection_search(T, 10)
    assert hit is not None
    assert SaddleConnection(*hit).recheck(T)


def _brute_first_connection(T, depth):
    cuts = list(T.x[1:-1])
    orbits = [[c] for c in cuts]
    for m in range(1, depth + 1):
        for i, orb in enumerate(orbits):
            orb.append(T(orb[-1]))
            for j, c in enumerate(cuts):
                if orb[-1] == c:
                    return (i + 1, j + 1, m)
    return None


@given(rational_iets(max_n=5))
def test_connection_search_matches_brute_force(T):
    assert saddle_connection_search(T, 40) == _brute_first_connection(T, 40)


@given(rational_iets(max_n=5), st.integers(1, 6))
def test_fixed_interval_forces_connection(T, p):
    if detect_fixed_intervals(iet_power(T, p)):
        assert saddle_connection_search(T, p * T.n) is not None


# -- occupation ---------------------------------------------------------------------------


def test_occupation_single_step():
    T = golden_rotation()
    assert occupation_vector(T, GOLD.const(Fraction(9, 10)), 1) == [0, 1]


def test_golden_occupation_frequencies():
    T = golden_rotation()
    k = 10 ** 4
    v = occupation_vector(T, GOLD.const(Fraction(1, 10)), k)
    assert sum(v) == k
    assert max(abs(c / k - float(a)) for c, a in zip(v, T.lengths)) < 1e-3


def test_occupation_on_fixed_interval():
    T = Iet.from_rationals([2, 4, 3, 1], ["1/5", "3/10", "3/10", "1/5"])
    assert occupation_vector(T, R.const(Fraction(3, 5)), 100) == [0, 0, 100, 0]


@pytest.mark.parametrize("make", [golden_rotation, example3_independent])
def test_frequency_deviation_shrinks(make):
    T = make()
    for k in (500, 2000):
        _, c1, s1 = _orbit_scan(T, k, stop_at_hit=False)
        _, c2, s2 = _orbit_scan(T, 2 * k, stop_at_hit=False)
        assert frequency_deviation(T, c2, s2) <= frequency_deviation(T, c1, s1) + 2 / k


# -- induction -------------------------------------------------------------------------------


def test_golden_first_return_is_rotation():
    T = golden_rotation()
    F = first_return(T, PHI - 1)
    assert F.perm.images == (2, 1)
    assert F.total == PHI - 1
    assert F.lengths == (2 - PHI, 2 * PHI - 3)
    # ratio of the two lengths is again the golden one
    assert float(F.lengths[0].numeric() / F.lengths[1].numeric()) == pytest.approx(float(PHI.numeric()))


@given(rational_iets())
def test_first_return_at_total_is_the_map_itself(T):
    assert first_return(T, T.total).to_pt() == T.to_pt()
    assert first_return(T, T.total, merge=False) == T


@given(rational_iets())
def test_first_return_near_one_has_one_extra_piece(T):
    top = max(T.x[-2], T.xt[-2])
    s = top + (1 - top) / 2
    assert len(induced_pieces(T, s)) == T.n + 1


@given(rational_iets(), st.integers(1, 99))
def test_first_return_matches_orbit_following(T, frac):
    s = T.total * Fraction(frac, 100)
    F = first_return(T, s, normalize=False)
    for q in range(0, 50):
        x = s * Fraction(q, 50)
        y = T(x)
        while not y < s:
            y = T(y)
        assert F(x) == y


def test_golden_rauzy_step_self_similar():
    T = golden_rotation()
    S = rauzy_step(T)
    assert S.perm.images == (2, 1)
    ratio = S.lengths[0].numeric() / S.lengths[1].numeric()
    assert float(ratio) == pytest.approx(float(T.lengths[0].numeric() / T.lengths[1].numeric())) or \
        float(1 / ratio) == pytest.approx(float(T.lengths[0].numeric() / T.lengths[1].numeric()))


def test_rauzy_tie():
    with pytest.raises(RauzyTie):
        rauzy_step(Iet.from_rationals([2, 1], ["1/2", "1/2"]))


def test_rauzy_keeps_n_intervals_on_generic_iets():
    rng = random.Random(7)
    for _ in range(30):
        T = random_keane_iet(rng, rng.randint(2, 6))
        S = rauzy_step(T)
        assert S.n == T.n and S.perm.is_irreducible()
        assert S.total < T.total
        if S.total.is_rational():
            assert sum(a.rational() for a in S.normalized().lengths) == 1


def test_first_return_step_cap():
    T = Iet.from_rationals([2, 1], ["999/1000", "1/1000"])
    with pytest.raises(ResourceLimit):
        first_return(T, T.basis.const(Fraction(1, 1000)), step_cap=10)


# -- verdicts -----------------------------------------------------------------------------


def test_verdict_second_example():
    T = Iet.from_rationals([2, 4, 3, 1], ["1/5", "3/10", "3/10", "1/5"])
    v = minimality_verdict(T, 100, 5)
    assert v == NonMinimalPeriodic(1, (T.x[2], T.x[3]))
    assert v.recheck(T)


def test_verdict_third_example_periodic_branch():
    T = Iet.from_rationals([2, 4, 3, 1], ["1/10", "3/20", "3/5", "3/20"])
    v = minimality_verdict(T, 100, 6)
    assert isinstance(v, NonMinimalPeriodic) and v.period == 4 and v.recheck(T)


def test_verdict_third_example_independent_branch():
    T = example3_independent()
    v = minimality_verdict(T, 2000, 10)
    assert isinstance(v, NoObstructionUpTo)
    assert v.recheck(T)
