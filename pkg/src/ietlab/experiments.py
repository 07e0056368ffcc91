"""Reproducible experiments: the four worked examples, random instance
generators for the dichotomy checks, parameter scans and the gasket
correlation run."""

from __future__ import annotations

import csv
import io as _io
import random
from decimal import Decimal, localcontext
from fractions import Fraction

from .errors import IetLabError
from .exact import GeneratorBasis, decimal_string, format_rational
from .gasket import (GasketPoint, gasket_membership, pixel_black, pixel_point, slice_chart)
from .homology import OmegaForm, genus_and_markings, omega_matrix
from .iet import Iet, Permutation, minimality_verdict
from .linalg import matvec, nullspace, rank
from .restrictions import (Poor, RestrictionSpace, classify_rich_poor, find_separating_cycle,
                           full_restriction_lattice, saf_invariant)
from .spi import family_k3

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23)


# -- worked examples -------------------------------------------------------------


def example1(k: int, precision=None) -> Iet:
    """The alternating family ``(a1, a2, a1, a2, ...)`` with ``a1 : a2`` irrational."""
    B = GeneratorBasis.square_roots([2], precision)
    a1 = B["sqrt2"] / (4 * k)
    a2 = B.const(Fraction(1, k)) - a1
    return Iet(Permutation.novak(k), [a1, a2] * k)


def example2(a1, a2, a3) -> Iet:
    """``pi = (2 4 3 1)`` with ``a4 = a1``; the third interval is fixed."""
    B = GeneratorBasis.rational()
    return Iet([2, 4, 3, 1], [B.const(Fraction(x)) for x in (a1, a2, a3, a1)])


def example3_rational(a1, a2) -> Iet:
    """``pi = (2 4 3 1)`` under ``3 a1 = a2 + a4`` with rational ``a1, a2``."""
    a1, a2 = Fraction(a1), Fraction(a2)
    return Iet.from_rationals([2, 4, 3, 1], [a1, a2, 1 - 4 * a1, 3 * a1 - a2])


def example3_independent(precision=None) -> Iet:
    """``a1 = sqrt2/10 > a2 = sqrt3/20``; only ``3 a1 = a2 + a4`` holds."""
    B = GeneratorBasis.square_roots([2, 3], precision)
    a1 = B["sqrt2"] / 10
    a2 = B["sqrt3"] / 20
    return Iet([2, 4, 3, 1], [a1, a2, 1 - 4 * a1, 3 * a1 - a2])


def example3_perturbed(a1, a2, eps=Fraction(1, 10 ** 6), precision=None) -> Iet:
    """Rational ``(a1, a2)`` pushed off every extra relation by ``eps*sqrt2, eps*sqrt3``."""
    B = GeneratorBasis.square_roots([2, 3], precision)
    x1 = B.const(Fraction(a1)) + B["sqrt2"] * eps
    x2 = B.const(Fraction(a2)) + B["sqrt3"] * eps
    return Iet([2, 4, 3, 1], [x1, x2, 1 - 4 * x1, 3 * x1 - x2])


def example4(a1, a2) -> Iet:
    """``pi = (3 6 5 2 7 4 1)`` with lengths ``(a1, a2, a3, a3, a1, a1, a2)`` on
    ``3 a1 + 2 a2 + 2 a3 = 1``; ``a1, a2`` may be field elements."""
    a3 = (1 - a1 * 3 - a2 * 2) / 2
    return Iet([3, 6, 5, 2, 7, 4, 1], [a1, a2, a3, a3, a1, a1, a2])


def example4_independent(precision=None) -> Iet:
    B = GeneratorBasis.square_roots([2, 3], precision)
    return example4(B["sqrt2"] / 20, B["sqrt3"] / 20)


def example4_projective(a1, a2, a3) -> Iet:
    return Iet([3, 6, 5, 2, 7, 4, 1], [a1, a2, a3, a3, a1, a1, a2], unit=False)


# -- classification report ------------------------------------------------------------


def classify(T: Iet, depth: int | None = None, power_cap: int | None = None) -> dict:
    """Genus, restriction lattice, rich/poor, SAF and separating cycle of ``T``."""
    omega = omega_matrix(T.perm)
    g, s = genus_and_markings(omega)
    R = full_restriction_lattice(T)
    cls = classify_rich_poor(R, omega)
    saf = saf_invariant(T, omega)
    sep = find_separating_cycle(R, T, omega)
    report = {
        "genus": g,
        "sCount": s,
        "restrictionBasis": [list(r) for r in R.basis],
        "verdict": cls.kind,
        "safNonzero": not saf.is_zero(),
        "separatingCycle": sep[1] if sep else None,
        "witnesses": {
            "poorPair": [list(cls.v), list(cls.w), format_rational(cls.value)] if isinstance(cls, Poor) else None,
            "cocycle": sep[0] if sep else None,
            "safMatrix": [[format_rational(x) for x in row] for row in saf.M],
        },
    }
    if depth is not None:
        from .io import verdict_to_json

        report["minimality"] = verdict_to_json(minimality_verdict(T, depth, power_cap or 1))
    return report


def novak_pairing(k: int) -> Fraction:
    """``<e1 + e3 + ..., e2 + e4 + ...>`` for the alternating permutation on ``2k`` letters."""
    omega = omega_matrix(Permutation.novak(k))
    v = [int(i % 2 == 0) for i in range(2 * k)]
    w = [int(i % 2 == 1) for i in range(2 * k)]
    return omega(v, w)


def novak_restrictions(k: int) -> RestrictionSpace:
    n = 2 * k
    rows = []
    for i in range(n - 2):
        r = [0] * n
        r[i], r[i + 2] = 1, -1
        rows.append(r)
    return RestrictionSpace(n, rows)


# -- random instances ---------------------------------------------------------------


def random_irreducible(rng: random.Random, n: int) -> Permutation:
    while True:
        images = list(range(1, n + 1))
        rng.shuffle(images)
        p = Permutation(images)
        if p.is_irreducible():
            return p


def _iet_from_matrix(perm, rows, basis) -> Iet:
    n = perm.n
    lengths = [basis.vector([rows[k][i] for k in range(basis.dim)]) for i in range(n)]
    return Iet(perm, lengths)


def _positive_base(rng, n):
    p = [Fraction(rng.randint(1, 6)) for _ in range(n)]
    total = sum(p)
    return [x / total for x in p]


def _small(row, base):
    """Scale a zero-sum row so that it cannot flip the sign of any ``base`` entry."""
    m = max((abs(x) for x in row), default=0)
    if m == 0:
        return row
    room = min(base) / (40 * m)
    return [x * room for x in row]


def random_rich_instance(rng: random.Random, n: int, d: int, precision=None) -> Iet:
    """Lengths whose generator coefficient rows span an isotropic subspace.

    The rational part ``p`` is positive; further rows are drawn from the
    ``Omega``-orthogonal complement of the rows so far and then shifted by a
    multiple of ``p`` to sum to zero, which keeps the span isotropic.
    """
    perm = random_irreducible(rng, n)
    omega = omega_matrix(perm)
    p = _positive_base(rng, n)
    rows = [p]
    for _ in range(d - 1):
        constraints = [matvec(omega.rows(), r) for r in rows]
        complement = nullspace(constraints)
        if rank(rows + complement) == len(rows):
            break
        for _ in range(20):
            coeffs = [Fraction(rng.randint(-3, 3)) for _ in complement]
            w = [sum(k * c[i] for k, c in zip(coeffs, complement)) for i in range(n)]
            if rank(rows + [w]) > len(rows):
                break
        else:
            break
        w = [x - sum(w) * y for x, y in zip(w, p)]
        rows.append(_small(w, p))
    basis = GeneratorBasis.square_roots(SMALL_PRIMES[:len(rows) - 1], precision)
    return _iet_from_matrix(perm, rows, basis)


def random_generic_instance(rng: random.Random, n: int, d: int, precision=None) -> Iet:
    """Random coefficient rows; usually poor unless ``d`` is small."""
    perm = random_irreducible(rng, n)
    p = _positive_base(rng, n)
    rows = [p]
    for _ in range(d - 1):
        w = [Fraction(rng.randint(-4, 4)) for _ in range(n)]
        shift = sum(w) / n
        rows.append(_small([x - shift for x in w], p))
    basis = GeneratorBasis.square_roots(SMALL_PRIMES[:d - 1], precision)
    return _iet_from_matrix(perm, rows, basis)


def random_triad_instance(rng: random.Random, max_n: int = 8, max_d: int = 4, precision=None) -> Iet:
    n = rng.randint(2, max_n)
    d = rng.randint(1, max_d)
    if rng.random() < 0.5:
        return random_rich_instance(rng, n, d, precision)
    return random_generic_instance(rng, n, d, precision)


def random_keane_iet(rng: random.Random, n: int, precision=None) -> Iet:
    """``n`` generators, coefficient matrix of full rank: no relation at all."""
    while True:
        T = random_generic_instance(rng, n, n, precision)
        if rank(T.coefficient_matrix()) == n:
            return T


def random_rank_two(rng: random.Random, n: int, precision=None) -> Iet:
    return random_generic_instance(rng, n, 2, precision)


# -- scans -----------------------------------------------------------------------------

SCAN_HEADER = ["col", "row", "a1", "a2", "kind", "certificate"]


def _certificate(verdict) -> str:
    kind = verdict.kind
    if kind == "NonMinimalPeriodic":
        return "period=%d" % verdict.period
    if kind == "SaddleConnection":
        return "i=%d;j=%d;steps=%d" % (verdict.i, verdict.j, verdict.steps)
    if kind == "NoObstructionUpTo":
        return "depth=%d;dev=%.3e" % (verdict.depth, verdict.max_frequency_deviation)
    if kind == "Escaped":
        return "step=%d;tie=%s" % (verdict.step, verdict.tie)
    if kind == "IndexStarved":
        return "step=%d;missing=%s" % (verdict.step, "".join(map(str, verdict.missing)))
    return "depth=%d" % verdict.step


def scan_point(region: str, col: int, row: int, nx: int, ny: int, depth: int, power_cap: int):
    point = pixel_point(region, col, row, nx, ny)
    if region == "example3square":
        a1, a2 = point
        if not (a2 < 3 * a1 and 4 * a1 < 1):
            return [col, row, format_rational(a1), format_rational(a2), "Outside", ""]
        try:
            verdict = minimality_verdict(example3_perturbed(a1, a2), depth, power_cap)
        except IetLabError as exc:
            return [col, row, format_rational(a1), format_rational(a2), "Error", type(exc).__name__]
        return [col, row, format_rational(a1), format_rational(a2), verdict.kind, _certificate(verdict)]
    a1, a2, a3 = point
    if a3 < 0:
        return [col, row, format_rational(a1), format_rational(a2), "Outside", ""]
    trace = gasket_membership(slice_chart(a1, a2, a3), depth + 1, 0)
    return [col, row, format_rational(a1), format_rational(a2), trace.kind, _certificate(trace)]


def _scan_rows(args):
    region, nx, ny, depth, power_cap, r0, r1 = args
    return [scan_point(region, c, r, nx, ny, depth, power_cap) for r in range(r0, r1) for c in range(nx)]


def scan(region: str, nx: int, ny: int, depth: int, power_cap: int = 8, workers: int = 1):
    """Rows in row-major order, one per grid point."""
    if nx <= 0 or ny <= 0:
        return []
    jobs = [(region, nx, ny, depth, power_cap, r, r + 1) for r in range(ny)]
    if workers <= 1:
        chunks = map(_scan_rows, jobs)
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_scan_rows, jobs))
    return [row for chunk in chunks for row in chunk]


def scan_csv(rows) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_HEADER)
    writer.writerows(rows)
    return buf.getvalue()


# -- gasket correlation --------------------------------------------------------------


def _normalized_decimals(v):
    s = sum(v)
    return [x / s for x in v]


def gasket_b_point(rng: random.Random, blocks: int, digits: int = 80):
    """``(b1, b2)`` near the gasket: the seed ``(1 : sqrt2 : sqrt3)`` pushed through
    ``P3 P2`` and ``blocks`` random orderings of ``P1, P2, P3``."""
    seq = [3, 2]
    for _ in range(blocks):
        block = [1, 2, 3]
        rng.shuffle(block)
        seq += block
    with localcontext() as ctx:
        ctx.prec = digits + 40
        x = [Decimal(1), Decimal(2).sqrt(), Decimal(3).sqrt()]
        for i in reversed(seq):
            k = i - 1
            x[k] = x[0] + x[1] + x[2]
            x = _normalized_decimals(x)
        return seq, decimal_string(x[0], digits), decimal_string(x[1], digits)


def random_slice_b_point(rng: random.Random, digits: int = 80):
    """``(b1, b2)`` of a uniformly random point of the slice triangle."""
    with localcontext() as ctx:
        ctx.prec = digits + 40
        while True:
            a1 = Decimal(rng.getrandbits(200)) / Decimal(2 ** 200) / 3
            a2 = Decimal(rng.getrandbits(200)) / Decimal(2 ** 200) / 2
            a3 = (1 - 3 * a1 - 2 * a2) / 2
            if a3 > 0:
                break
        b = _normalized_decimals([a1, a1 + a2 + a3, 2 * a1 + a2 + 2 * a3])
        return decimal_string(b[0], digits), decimal_string(b[1], digits)


def family_instance(b1: str, b2: str, digits: int = 80):
    """The balanced three-arm family at declared generators ``b1, b2``."""
    B = GeneratorBasis.from_decimals(["b1", "b2"], [b1, b2], precision=digits)
    b = (B["b1"], B["b2"], 1 - B["b1"] - B["b2"])
    perm, a = family_k3(*b)
    return b, Iet(perm, a)


def correlation_experiment(seed: int = 0, count: int = 10, membership_depth: int = 40,
                           depth: int = 10 ** 4, power_cap: int = 200, digits: int = 80,
                           blocks: int = 30):
    """Compare gasket membership of ``(b1 : b2 : b3)`` with the minimality verdict.

    Returns ``(gasket_rows, escaped_rows)``; each row is
    ``(b1, b2, membership kind, escape step, verdict kind)``.
    """
    rng = random.Random(seed)
    gasket_rows, escaped_rows = [], []
    while len(gasket_rows) < count:
        _, b1, b2 = gasket_b_point(rng, blocks, digits)
        b, T = family_instance(b1, b2, digits)
        trace = gasket_membership(GasketPoint(b), membership_depth)
        if trace.kind != "SurvivedDepth":
            continue
        verdict = minimality_verdict(T, depth, power_cap)
        gasket_rows.append((b1, b2, trace.kind, trace.step, verdict.kind))
    while len(escaped_rows) < count:
        b1, b2 = random_slice_b_point(rng, digits)
        b, T = family_instance(b1, b2, digits)
        trace = gasket_membership(GasketPoint(b), membership_depth)
        if trace.kind != "Escaped" or trace.tie:
            continue
        verdict = minimality_verdict(T, depth, power_cap)
        escaped_rows.append((b1, b2, trace.kind, trace.step, verdict.kind))
    return gasket_rows, escaped_rows


# -- interval translation mappings -----------------------------------------------------


def random_itm(rng: random.Random, q: int, k: int):
    """``k`` blocks with lengths and translations in ``(1/q) Z``."""
    from .itm import Itm

    cuts = sorted(rng.sample(range(1, q), k - 1))
    ends = [0] + cuts + [q]
    lam = [Fraction(ends[i + 1] - ends[i], q) for i in range(k)]
    t = []
    for i in range(k):
        lo, hi = -ends[i], q - ends[i + 1]
        t.append(Fraction(rng.randint(lo, hi), q))
    return Itm(lam, t)
