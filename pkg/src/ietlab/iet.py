"""Interval exchange transformations over exact field parameters.

Conventions: a permutation is the tuple ``(pi(1), ..., pi(n))``.  Interval
``i`` of the top partition ``[x_{i-1}, x_i)`` is translated so that its right
end lands on ``xt_{pi^{-1}(i)}``, where ``xt_j = a_{pi(1)} + ... + a_{pi(j)}``.
Reading the bottom partition left to right therefore lists the intervals
``pi(1), pi(2), ..., pi(n)``.

Every map is also available as a :class:`PiecewiseTranslation`, the form
used for compositions, powers and induced maps.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, RauzyTie, ReduciblePermutation, ResourceLimit
from .exact import FieldVector, GeneratorBasis, fv_min

DEFAULT_PIECE_CAP = 10 ** 6
DEFAULT_STEP_CAP = 10 ** 6


# -- permutations -----------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    images: tuple

    def __init__(self, images: Sequence[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise DomainError("not a permutation of 1..%d: %r" % (len(images), images))
        object.__setattr__(self, "images", images)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __iter__(self):
        return iter(self.images)

    def __len__(self):
        return len(self.images)

    @property
    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, p in enumerate(self.images, 1):
            inv[p - 1] = i
        return Permutation(inv)

    def is_irreducible(self) -> bool:
        m = 0
        for k, p in enumerate(self.images[:-1], 1):
            m = max(m, p)
            if m == k:
                return False
        return True

    @classmethod
    def novak(cls, k: int) -> "Permutation":
        """The permutation ``(4 3 6 5 ... 2k 2k-1 2 1)`` on ``2k`` letters."""
        if k < 2:
            raise DomainError("Novak family needs k >= 2")
        images = []
        for j in range(1, k):
            images += [2 * j + 2, 2 * j + 1]
        images += [2, 1]
        return cls(images)

    def __repr__(self):
        return "Permutation(%s)" % list(self.images)


# -- piecewise translations ---------------------------------------------------


class PiecewiseTranslation:
    """A bijection of ``[0, total)`` that translates each half-open piece.

    ``pieces`` is a tuple of ``(left, right, shift)`` sorted by ``left``.
    Adjacent pieces with equal shift are merged unless ``merge=False``.
    """

    __slots__ = ("pieces", "total", "_lefts")

    def __init__(self, pieces, total=None, merge=True, check=True):
        pieces = list(pieces)
        if not pieces:
            raise DomainError("a piecewise translation needs at least one piece")
        if total is None:
            total = pieces[-1][1]
        if merge:
            pieces = _merge(pieces)
        self.pieces = tuple(pieces)
        self.total = total
        self._lefts = [p[0] for p in self.pieces[1:]]
        if check:
            self.check()

    @classmethod
    def identity(cls, total) -> "PiecewiseTranslation":
        zero = total - total
        return cls([(zero, total, zero)], total)

    def check(self) -> None:
        """Raise unless domains and images both tile ``[0, total)``."""
        zero = self.total - self.total
        _check_tiling([(l, r) for l, r, _ in self.pieces], zero, self.total, "domain")
        images = sorted(((l + s, r + s) for l, r, s in self.pieces), key=_Key)
        _check_tiling(images, zero, self.total, "image")

    def __len__(self):
        return len(self.pieces)

    def piece_index(self, x) -> int:
        return bisect_right(self._lefts, x)

    def __call__(self, x):
        zero = self.total - self.total
        if x < zero or not x < self.total:
            raise DomainError("point outside [0, total)")
        return x + self.pieces[self.piece_index(x)][2]

    def inverse(self) -> "PiecewiseTranslation":
        inv = sorted(((l + s, r + s, -s) for l, r, s in self.pieces), key=lambda p: _Key(p[0]))
        return PiecewiseTranslation(inv, self.total, check=False)

    def then(self, other: "PiecewiseTranslation") -> "PiecewiseTranslation":
        """``other`` after ``self``."""
        return iet_compose(self, other)

    def fixed_intervals(self):
        return [(l, r) for l, r, s in self.pieces if s.is_zero()]

    def is_identity(self) -> bool:
        return len(self.pieces) == 1 and self.pieces[0][2].is_zero()

    def __eq__(self, other):
        if not isinstance(other, PiecewiseTranslation):
            return NotImplemented
        return self.total == other.total and self.pieces == other.pieces

    def __repr__(self):
        return "PiecewiseTranslation(%d pieces)" % len(self.pieces)


class _Key:
    """Sort key wrapper so ``sorted`` uses exact field comparisons."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v[0] if isinstance(v, tuple) else v

    def __lt__(self, other):
        return self.v < other.v


def _merge(pieces):
    out = [pieces[0]]
    for l, r, s in pieces[1:]:
        pl, pr, ps = out[-1]
        if ps == s and pr == l:
            out[-1] = (pl, r, s)
        else:
            out.append((l, r, s))
    return out


def _check_tiling(intervals, start, end, what):
    cur = start
    for l, r in intervals:
        if l != cur:
            raise DomainError("%s pieces do not tile: gap or overlap at %r" % (what, cur))
        if not l < r:
            raise DomainError("%s piece [%r, %r) is empty" % (what, l, r))
        cur = r
    if cur != end:
        raise DomainError("%s pieces end at %r instead of %r" % (what, cur, end))


def iet_compose(S: PiecewiseTranslation, T: PiecewiseTranslation) -> PiecewiseTranslation:
    """Return ``T o S``: the domain of ``S`` refined by ``S^{-1}`` of the cuts of ``T``."""
    if S.total != T.total:
        raise DomainError("cannot compose maps on intervals of different length")
    out = []
    tp = T.pieces
    lefts = T._lefts
    for l, r, s in S.pieces:
        lo, hi = l + s, r + s
        k = bisect_right(lefts, lo)
        cur = lo
        while True:
            _, tr, ts = tp[k]
            if tr < hi:
                out.append((cur - s, tr - s, s + ts))
                cur = tr
                k += 1
            else:
                out.append((cur - s, r, s + ts))
                break
    return PiecewiseTranslation(out, S.total, check=False)


# -- interval exchanges -------------------------------------------------------


class Iet:
    """``T_{pi,a}``: an exchange of ``n`` intervals with field lengths.

    By default the lengths must sum to exactly 1.  ``unit=False`` accepts
    any positive total; induced maps are built that way, since dividing by
    an irrational length leaves the generator span.
    """

    def __init__(self, perm, lengths: Sequence[FieldVector], *, unit: bool = True,
                 require_irreducible: bool = True):
        if not isinstance(perm, Permutation):
            perm = Permutation(perm)
        lengths = tuple(lengths)
        if len(lengths) != perm.n:
            raise DomainError("%d lengths for a permutation on %d letters" % (len(lengths), perm.n))
        if perm.n < 1:
            raise DomainError("empty permutation")
        if not all(isinstance(a, FieldVector) for a in lengths):
            raise DomainError("lengths must be field vectors (use Iet.from_rationals)")
        basis = lengths[0].basis
        if require_irreducible and not perm.is_irreducible():
            raise ReduciblePermutation("reducible permutation %r" % (list(perm.images),))
        for i, a in enumerate(lengths, 1):
            if a.sign() <= 0:
                raise DomainError("length a_%d is not positive" % i)
        x = [basis.zero()]
        for a in lengths:
            x.append(x[-1] + a)
        total = x[-1]
        if unit and total != 1:
            raise DomainError("lengths sum to %r, not 1" % (total,))
        xt = [basis.zero()]
        for j in range(perm.n):
            xt.append(xt[-1] + lengths[perm.images[j] - 1])
        inv = perm.inverse.images
        self.perm = perm
        self.lengths = lengths
        self.basis = basis
        self.n = perm.n
        self.total = total
        self.x = tuple(x)
        self.xt = tuple(xt)
        self.shifts = tuple(xt[inv[i]] - x[i + 1] for i in range(perm.n))
        self._cuts = list(x[1:-1])
        self._bottom_cuts = list(xt[1:-1])

    @classmethod
    def from_rationals(cls, perm, lengths, basis: GeneratorBasis | None = None, **kw) -> "Iet":
        basis = basis or GeneratorBasis.rational()
        return cls(perm, [basis.const(Fraction(a)) for a in lengths], **kw)

    @property
    def discontinuities(self):
        return self.x[1:-1]

    def interval_index(self, x) -> int:
        """0-based index ``i`` with ``x`` in ``[x_i, x_{i+1})``."""
        return bisect_right(self._cuts, x)

    def _check_point(self, x):
        if x < self.basis.zero() or not x < self.total:
            raise DomainError("point %r outside [0, %r)" % (x, self.total))

    def __call__(self, x):
        self._check_point(x)
        return x + self.shifts[bisect_right(self._cuts, x)]

    def eval(self, x, direction: str = "fwd"):
        if direction == "fwd":
            return self(x)
        if direction == "inv":
            self._check_point(x)
            j = bisect_right(self._bottom_cuts, x)
            return x - self.shifts[self.perm.images[j] - 1]
        raise DomainError("direction must be 'fwd' or 'inv'")

    def to_pt(self) -> PiecewiseTranslation:
        return PiecewiseTranslation(
            [(self.x[i], self.x[i + 1], self.shifts[i]) for i in range(self.n)], self.total)

    def inverse_iet(self) -> "Iet":
        """``T^{-1} = T_{pi^{-1}, a.pi}``, built from the data rather than the pieces."""
        a_pi = [self.lengths[p - 1] for p in self.perm.images]
        return Iet(self.perm.inverse, a_pi, unit=False, require_irreducible=False)

    def coefficient_matrix(self):
        """``A[k][i]`` = coefficient of generator ``k`` in ``a_i``."""
        cols = [a.coeffs for a in self.lengths]
        return [[c[k] for c in cols] for k in range(self.basis.dim)]

    def normalized(self) -> "Iet":
        """Rescale to total length 1; only possible when the total is rational."""
        if not self.total.is_rational():
            raise DomainError("total length is irrational; renormalization leaves the generator span")
        t = self.total.rational()
        return Iet(self.perm, [a / t for a in self.lengths])

    def __eq__(self, other):
        if not isinstance(other, Iet):
            return NotImplemented
        return self.perm == other.perm and self.lengths == other.lengths

    def __repr__(self):
        return "Iet(%s, %r)" % (list(self.perm.images), list(self.lengths))


def iet_new(perm, lengths) -> Iet:
    return Iet(perm, lengths)


def iet_eval(T: Iet, x, direction: str = "fwd"):
    return T.eval(x, direction)


def iet_power(T, p: int, piece_cap: int = DEFAULT_PIECE_CAP) -> PiecewiseTranslation:
    if p < 0:
        raise DomainError("power must be nonnegative")
    base = T.to_pt() if isinstance(T, Iet) else T
    result = PiecewiseTranslation.identity(base.total)
    for _ in range(p):
        result = iet_compose(result, base)
        if len(result) > piece_cap:
            raise ResourceLimit("power exceeds %d pieces" % piece_cap)
    return result


def detect_fixed_intervals(P: PiecewiseTranslation):
    return P.fixed_intervals()


# -- orbits -------------------------------------------------------------------


def _orbit_scan(T: Iet, depth: int, stop_at_hit: bool = True):
    """Follow the forward orbits of the discontinuities for ``depth`` steps.

    Returns ``(hit, counts)`` where ``hit`` is the first ``(i, j, m)`` with
    ``T^m(x_i) = x_j`` (1-based, smallest ``m`` then smallest ``i``) and
    ``counts[i]`` is the occupation vector of the orbit of ``x_i`` over the
    steps actually taken.
    """
    cuts = T._cuts
    shifts = T.shifts
    n = T.n
    targets = {c.key(): j for j, c in enumerate(cuts, 1)}
    points = list(cuts)
    counts = [[0] * n for _ in points]
    hit = None
    for m in range(1, depth + 1):
        for i, x in enumerate(points):
            k = bisect_right(cuts, x)
            counts[i][k] += 1
            x = x + shifts[k]
            points[i] = x
            if hit is None:
                j = targets.get(x.key())
                if j is not None:
                    hit = (i + 1, j, m)
        if hit is not None and stop_at_hit:
            return hit, counts, m
    return hit, counts, depth


def saddle_connection_search(T: Iet, depth: int):
    if depth < 1:
        raise DomainError("depth must be >= 1")
    hit, _, _ = _orbit_scan(T, depth)
    return hit


def occupation_vector(T: Iet, x, k: int):
    T._check_point(x)
    cuts, shifts = T._cuts, T.shifts
    v = [0] * T.n
    for _ in range(k):
        i = bisect_right(cuts, x)
        v[i] += 1
        x = x + shifts[i]
    return v


def frequency_deviation(T: Iet, counts, steps: int) -> float:
    freqs = [float(a.numeric() / T.total.numeric()) for a in T.lengths]
    return max(abs(c / steps - f) for row in counts for c, f in zip(row, freqs))


# -- minimality verdicts ---------------------------------------------------------


@dataclass(frozen=True)
class NonMinimalPeriodic:
    period: int
    interval: tuple
    kind = "NonMinimalPeriodic"

    def recheck(self, T: Iet) -> bool:
        l, r = self.interval
        mid = l + (r - l) / 2
        for x0 in (l, mid):
            x = x0
            for _ in range(self.period):
                x = T(x)
            if x != x0:
                return False
        return True


@dataclass(frozen=True)
class SaddleConnection:
    i: int
    j: int
    steps: int
    kind = "SaddleConnection"

    def recheck(self, T: Iet) -> bool:
        x = T.x[self.i]
        for _ in range(self.steps):
            x = T(x)
        return x == T.x[self.j]


@dataclass(frozen=True)
class NoObstructionUpTo:
    """Heuristic: no periodic piece and no saddle connection within budget."""

    depth: int
    power_cap: int
    max_frequency_deviation: float
    kind = "NoObstructionUpTo"

    def recheck(self, T: Iet) -> bool:
        return saddle_connection_search(T, self.depth) is None


def minimality_verdict(T: Iet, depth: int, power_cap: int, piece_cap: int = DEFAULT_PIECE_CAP):
    if depth < 1 or power_cap < 1:
        raise DomainError("depth and power_cap must be >= 1")
    base = T.to_pt()
    P = PiecewiseTranslation.identity(T.total)
    for p in range(1, power_cap + 1):
        P = iet_compose(P, base)
        if len(P) > piece_cap:
            raise ResourceLimit("T^%d exceeds %d pieces" % (p, piece_cap))
        fixed = P.fixed_intervals()
        if fixed:
            return NonMinimalPeriodic(p, fixed[0])
    hit, counts, steps = _orbit_scan(T, depth)
    if hit is not None:
        return SaddleConnection(*hit)
    return NoObstructionUpTo(depth, power_cap, frequency_deviation(T, counts, steps))


# -- induction ------------------------------------------------------------------


def _split_apply(T: Iet, lo, hi):
    """Pieces ``(l, r, shift)`` of ``[lo, hi)`` cut by the partition of ``T``."""
    i = bisect_right(T._cuts, lo)
    cur = lo
    x = T.x
    while True:
        end = x[i + 1]
        if end < hi:
            yield cur, end, T.shifts[i]
            cur = end
            i += 1
        else:
            yield cur, hi, T.shifts[i]
            return


def induced_pieces(T: Iet, s, step_cap: int = DEFAULT_STEP_CAP):
    """Unmerged pieces ``(left, right, shift)`` of the first return map to ``[0, s)``."""
    zero = T.basis.zero()
    if not (zero < s and s <= T.total):
        raise DomainError("return interval [0, s) needs 0 < s <= total")
    pending = [(zero, s, zero)]
    done = []
    steps = 0
    while pending:
        steps += 1
        if steps > step_cap:
            raise ResourceLimit("first return not reached within %d steps" % step_cap)
        nxt = []
        for l, r, acc in pending:
            for pl, pr, sh in _split_apply(T, l + acc, r + acc):
                dl, dr, nacc = pl - acc, pr - acc, acc + sh
                il, ir = pl + sh, pr + sh
                if ir <= s:
                    done.append((dl, dr, nacc))
                elif il >= s:
                    nxt.append((dl, dr, nacc))
                else:
                    cut = s - nacc
                    done.append((dl, cut, nacc))
                    nxt.append((cut, dr, nacc))
        pending = nxt
    done.sort(key=_Key)
    return done


def first_return(T: Iet, s, step_cap: int = DEFAULT_STEP_CAP, normalize: bool = True,
                 merge: bool = True) -> Iet:
    """First return map of ``T`` on ``[0, s)``.

    With ``normalize`` and a rational ``s`` the result is rescaled to
    ``[0, 1)``.  An irrational ``s`` cannot be divided out inside the
    generator span, so the map is then returned on ``[0, s)`` as is.
    ``merge`` joins neighbouring pieces that share a translation.
    """
    pieces = induced_pieces(T, s, step_cap)
    if merge:
        pieces = _merge(pieces)
    R = _iet_from_pieces(pieces)
    if normalize and R.total.is_rational() and R.total != 1:
        t = R.total.rational()
        R = Iet(R.perm, [a / t for a in R.lengths], require_irreducible=False)
    return R


def _iet_from_pieces(pieces) -> Iet:
    lengths = [r - l for l, r, _ in pieces]
    order = sorted(range(len(pieces)), key=lambda i: _Key(pieces[i][0] + pieces[i][2]))
    perm = [i + 1 for i in order]
    return Iet(perm, lengths, unit=False, require_irreducible=False)


def rauzy_step(T: Iet, step_cap: int = DEFAULT_STEP_CAP) -> Iet:
    """One Rauzy step, left unnormalized so that the lengths stay exact."""
    top = T.lengths[-1]
    bottom = T.lengths[T.perm.images[-1] - 1]
    if top == bottom:
        raise RauzyTie("a_n = a_pi(n); Rauzy induction is undefined")
    s = T.total - fv_min(top, bottom)
    R = first_return(T, s, step_cap, normalize=False, merge=False)
    assert R.n == T.n, "Rauzy step changed the number of intervals"
    return R
