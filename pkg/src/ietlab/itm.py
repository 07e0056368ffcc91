"""Interval translation mappings and the stabilization of their images."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError
from .exact import FieldVector, GeneratorBasis
from .iet import _Key


def _as_fv(values, basis=None):
    values = list(values)
    fvs = [v for v in values if isinstance(v, FieldVector)]
    if basis is None:
        basis = fvs[0].basis if fvs else GeneratorBasis.rational()
    return [v if isinstance(v, FieldVector) else basis.const(Fraction(v)) for v in values], basis


class IntervalSet:
    """Finite union of half-open intervals, kept sorted with touching pieces merged."""

    __slots__ = ("pieces",)

    def __init__(self, pieces=()):
        items = sorted((p for p in pieces if p[0] < p[1]), key=_Key)
        merged = []
        for l, r in items:
            if merged and not merged[-1][1] < l:
                pl, pr = merged[-1]
                merged[-1] = (pl, r if r > pr else pr)
            else:
                merged.append((l, r))
        self.pieces = tuple(merged)

    def measure(self):
        if not self.pieces:
            return 0
        total = self.pieces[0][0] - self.pieces[0][0]
        for l, r in self.pieces:
            total = total + (r - l)
        return total

    def contains_set(self, other: "IntervalSet") -> bool:
        for l, r in other.pieces:
            if not any(not l < pl and not pr < r for pl, pr in self.pieces):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self):
        return len(self.pieces)

    def __repr__(self):
        return "IntervalSet(%r)" % (list(self.pieces),)


@dataclass(frozen=True)
class Itm:
    """``T(x) = x + t_i`` on the ``i``-th block of the partition by ``lam``."""

    lam: tuple
    t: tuple

    def __init__(self, lam: Sequence, t: Sequence):
        vals, basis = _as_fv(list(lam) + list(t))
        n = len(lam)
        if n < 1 or len(t) != n:
            raise DomainError("lam and t must be nonempty and of equal length")
        lam, t = tuple(vals[:n]), tuple(vals[n:])
        if any(l.sign() <= 0 for l in lam):
            raise DomainError("block lengths must be positive")
        left = basis.zero()
        for i, (l, s) in enumerate(zip(lam, t), 1):
            if s < -left or s > 1 - left - l:
                raise DomainError("translation t_%d moves block %d out of [0, 1)" % (i, i))
            left = left + l
        if left != 1:
            raise DomainError("block lengths must sum to 1")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "t", t)

    @property
    def basis(self) -> GeneratorBasis:
        return self.lam[0].basis

    def breakpoints(self):
        x = [self.basis.zero()]
        for l in self.lam:
            x.append(x[-1] + l)
        return x

    def __call__(self, x):
        cuts = self.breakpoints()[1:-1]
        return x + self.t[bisect_right(cuts, x)]

    def full(self) -> IntervalSet:
        return IntervalSet([(self.basis.zero(), self.basis.one())])


def itm_image_step(T: Itm, S: IntervalSet) -> IntervalSet:
    x = T.breakpoints()
    out = []
    for l, r in S:
        for i in range(len(T.lam)):
            lo = l if l > x[i] else x[i]
            hi = r if r < x[i + 1] else x[i + 1]
            if lo < hi:
                out.append((lo + T.t[i], hi + T.t[i]))
    return IntervalSet(out)


@dataclass(frozen=True)
class FiniteType:
    m: int
    image: IntervalSet
    kind = "FiniteType"


@dataclass(frozen=True)
class Undetermined:
    cap: int
    image: IntervalSet
    kind = "Undetermined"


def itm_finite_type(T: Itm, cap: int):
    if cap < 1:
        raise DomainError("cap must be >= 1")
    S = T.full()
    for m in range(cap):
        nxt = itm_image_step(T, S)
        if nxt == S:
            return FiniteType(m, S)
        S = nxt
    return Undetermined(cap, S)
