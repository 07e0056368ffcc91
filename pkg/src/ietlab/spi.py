"""Systems of partial isometries and their double suspension surfaces.

An orientation preserving arm ``psi_i: [a_i, b_i] -> [c_i, d_i]`` is a
translation by ``c_i - a_i``.  The double suspension cuts two horizontal
slits per arm out of the unit square at heights ``y_i`` and ``y_{i+k}`` and
glues their edges crosswise, so that flowing upward into one slit comes out
of the top of its partner.  The first return of the upward flow to the
bottom edge is an interval exchange.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ChartDomain, DomainError, ResourceLimit
from .exact import FieldVector, GeneratorBasis
from .iet import Iet, Permutation, _iet_from_pieces, _merge, _Key

FAMILY_K3_PERM = Permutation([3, 5, 7, 2, 6, 1, 4])
FAMILY_K3_SHORT_PERM = Permutation([3, 6, 5, 2, 7, 4, 1])


def _as_fv(values, basis=None):
    values = list(values)
    fvs = [v for v in values if isinstance(v, FieldVector)]
    if basis is None:
        basis = fvs[0].basis if fvs else GeneratorBasis.rational()
    return [v if isinstance(v, FieldVector) else basis.const(Fraction(v)) for v in values], basis


@dataclass(frozen=True)
class Spi:
    """Arms ``(a, b, c, d)`` with ``d - c = b - a > 0``, all in ``[0, 1]``."""

    arms: tuple

    def __init__(self, arms: Sequence[Sequence]):
        flat, basis = _as_fv([x for arm in arms for x in arm])
        arms = tuple(tuple(flat[4 * i:4 * i + 4]) for i in range(len(flat) // 4))
        if not arms or any(len(arm) != 4 for arm in arms):
            raise DomainError("each arm is a quadruple (a, b, c, d)")
        for i, (a, b, c, d) in enumerate(arms, 1):
            if not (b - a).sign() > 0:
                raise DomainError("arm %d has nonpositive length" % i)
            if d - c != b - a:
                raise DomainError("arm %d is not an isometry: d - c != b - a" % i)
            if a < 0 or c < 0 or b > 1 or d > 1:
                raise DomainError("arm %d leaves [0, 1]" % i)
        if not any(arm[0] == 0 or arm[2] == 0 for arm in arms):
            raise DomainError("no arm starts at 0")
        if not any(arm[1] == 1 or arm[3] == 1 for arm in arms):
            raise DomainError("no arm ends at 1")
        object.__setattr__(self, "arms", arms)

    @classmethod
    def from_translations(cls, triples) -> "Spi":
        """Arms given as ``(a, b, c)``; ``d = c + b - a``."""
        return cls([(a, b, c, c + b - a) for a, b, c in triples])

    @property
    def k(self) -> int:
        return len(self.arms)

    @property
    def basis(self) -> GeneratorBasis:
        return self.arms[0][0].basis


def spi_excess(psi: Spi) -> FieldVector:
    total = psi.basis.zero()
    for a, b, _, _ in psi.arms:
        total = total + (b - a)
    return total - 1


def family_k3_constraints(b1, b2, b3) -> list:
    """Names of violated constraints of the three-arm family (empty when admissible)."""
    c1, c2, c3 = 1 - b1, 1 - b2, 1 - b3
    failed = []
    checks = [
        ("0<b1", 0 < b1), ("b1<b2", b1 < b2), ("b2<b3", b2 < b3), ("b3<c2", b3 < c2),
        ("c3<b3", c3 < b3), ("2b3<b2+c1", 2 * b3 < b2 + c1),
    ]
    for name, ok in checks:
        if not ok:
            failed.append(name)
    return failed


def family_k3(b1, b2, b3):
    """Permutation and lengths of the exchange induced by ``psi_i: [0, b_i] -> [c_i, 1]``."""
    (b1, b2, b3), _ = _as_fv([b1, b2, b3])
    failed = family_k3_constraints(b1, b2, b3)
    if failed:
        raise ChartDomain("family constraints violated: %s" % ", ".join(failed))
    c1, c2, c3 = 1 - b1, 1 - b2, 1 - b3
    a = (b1, b2 + c1 - 2 * b3, b3 - c3, b3 - b2, c2 - b3, b2 - b1, b1)
    return FAMILY_K3_PERM, a


def family_k3_spi(b1, b2, b3) -> Spi:
    (b1, b2, b3), basis = _as_fv([b1, b2, b3])
    zero, one = basis.zero(), basis.one()
    return Spi([(zero, b, 1 - b, one) for b in (b1, b2, b3)])


def family_k3_heights(k: int = 3):
    """Evenly spaced admissible heights ``y_1 < ... < y_{2k}``."""
    return [Fraction(j, 2 * k + 1) for j in range(1, 2 * k + 1)]


# -- double suspension ----------------------------------------------------------


@dataclass(frozen=True)
class DoubleSuspension:
    iet: Iet
    fills: bool
    swept: FieldVector
    slit_measure: FieldVector
    epsilon: Fraction


def default_epsilon(y) -> Fraction:
    ys = sorted(Fraction(v) for v in y)
    gaps = [b - a for a, b in zip(ys, ys[1:])] + [1 - ys[-1]]
    return min(gaps) / 2


def double_suspension_iet(psi: Spi, y: Sequence, epsilon=None, step_cap: int = 10 ** 5,
                          normalize: bool = True) -> DoubleSuspension:
    """Follow the upward flow from the bottom edge back to the top edge.

    ``fills`` is decided by measure: every point of a slit edge lies on at
    most one flow segment from the bottom, so the leaves through the bottom
    edge fill the surface exactly when the measure they sweep across slit
    edges equals the total edge measure ``2 sum (b_i - a_i)``.
    """
    k = psi.k
    y = [Fraction(v) for v in y]
    if len(y) != 2 * k:
        raise DomainError("need %d heights, got %d" % (2 * k, len(y)))
    if len(set(y)) != len(y) or any(not 0 < v < 1 for v in y):
        raise DomainError("heights must be pairwise distinct points of (0, 1)")
    eps = default_epsilon(y) if epsilon is None else Fraction(epsilon)
    ys = sorted(y)
    if not 0 < eps or any(b - a <= eps for a, b in zip(ys, ys[1:])) or ys[-1] + eps >= 1:
        raise DomainError("epsilon too large for the heights")
    basis = psi.basis
    zero = basis.zero()
    # slit j: x-range, bottom height, and where its bottom edge leads
    slits = []
    for i, (a, b, c, d) in enumerate(psi.arms):
        shift = c - a
        slits.append((a, b, y[i], i + k, shift))
        slits.append((c, d, y[i + k], i, -shift))
    slits.sort(key=lambda s: s[2])
    order = {id(s): n for n, s in enumerate(slits)}
    partner_index = {}
    for n, s in enumerate(slits):
        partner_index[n] = next(m for m, t in enumerate(slits) if t[2] == y[s[3]])
    tops = [s[2] + eps for s in slits]

    pieces = []
    swept = zero
    # state: domain [l, r), accumulated shift, current height, crossings so far
    stack = [(zero, basis.one(), zero, Fraction(0), 0)]
    steps = 0
    while stack:
        steps += 1
        if steps > step_cap:
            raise ResourceLimit("double suspension flow did not return within %d steps" % step_cap)
        l, r, acc, h, crossed = stack.pop()
        L, R = l + acc, r + acc
        hit = None
        for n, (lo, hi, bottom, _, _) in enumerate(slits):
            if bottom > h and lo < R and L < hi:
                hit = n
                break
        if hit is None:
            pieces.append((l, r, acc))
            swept = swept + (r - l) * crossed
            continue
        lo, hi, bottom, _, shift = slits[hit]
        if L < lo:
            stack.append((l, lo - acc, acc, bottom, crossed))
        if hi < R:
            stack.append((hi - acc, r, acc, bottom, crossed))
        il, ir = (lo if lo > L else L), (hi if hi < R else R)
        m = partner_index[hit]
        stack.append((il - acc, ir - acc, acc + shift, tops[m], crossed + 1))
    pieces.sort(key=_Key)
    iet = _iet_from_pieces(_merge(pieces))
    measure = zero
    for a, b, _, _ in psi.arms:
        measure = measure + (b - a) * 2
    return DoubleSuspension(iet, swept == measure, swept, measure, eps)
