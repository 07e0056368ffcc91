"""The intersection form of a permutation and pairings of cycles.

Relative cycles are written in the basis ``h_1..h_n`` dual to the
intervals.  Absolute cycles are carried as ``s = Omega u`` together with the
cocycle ``u``; pairing such a cycle with a relative cycle ``r`` is ``u . r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError
from .exact import FieldVector
from .iet import Iet, Permutation
from .linalg import dot, matvec, rank, solve


@dataclass(frozen=True)
class OmegaForm:
    perm: Permutation
    matrix: tuple

    @property
    def n(self) -> int:
        return len(self.matrix)

    def rows(self):
        return [list(r) for r in self.matrix]

    def __call__(self, v, w):
        """``<v, w>`` for rational vectors."""
        return dot(v, matvec(self.matrix, w))

    def apply(self, u):
        return matvec(self.matrix, u)

    @property
    def rank(self) -> int:
        return rank(self.rows())


def omega_matrix(perm) -> OmegaForm:
    if not isinstance(perm, Permutation):
        perm = Permutation(perm)
    inv = perm.inverse.images
    n = perm.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i < j and inv[i] > inv[j]:
                row.append(1)
            elif i > j and inv[i] < inv[j]:
                row.append(-1)
            else:
                row.append(0)
        rows.append(tuple(row))
    return OmegaForm(perm, tuple(rows))


def genus_and_markings(omega: OmegaForm):
    """``(g, number of singular points)`` of the suspension surface."""
    r = omega.rank
    assert r % 2 == 0, "antisymmetric form of odd rank"
    g = r // 2
    return g, omega.n + 1 - 2 * g


@dataclass(frozen=True)
class HomologyVector:
    coords: tuple
    witness: tuple | None = None

    @property
    def is_absolute(self) -> bool:
        return self.witness is not None

    @classmethod
    def relative(cls, coords) -> "HomologyVector":
        return cls(tuple(Fraction(c) for c in coords))

    @classmethod
    def from_cocycle(cls, omega: OmegaForm, u) -> "HomologyVector":
        u = tuple(Fraction(x) for x in u)
        return cls(tuple(omega.apply(u)), u)


def cocycle_witness(omega: OmegaForm, s):
    """Some ``u`` with ``Omega u = s``, or ``None`` when ``s`` is not absolute."""
    return solve(omega.rows(), [Fraction(x) for x in s])


def pairing(u: Sequence, r) -> Fraction:
    """Intersection of the absolute cycle ``Omega u`` with the relative cycle ``r``."""
    coords = r.coords if isinstance(r, HomologyVector) else r
    if len(coords) != len(u):
        raise DomainError("dimension mismatch in pairing")
    return dot(u, coords)


def asymptotic_pairing(u: Sequence, T: Iet, omega: OmegaForm | None = None) -> FieldVector:
    """Pairing of ``Omega u`` with the asymptotic cycle ``sum a_i h_i``.

    Equals ``s . a`` with ``s = Omega u``; its sign is fixed by matching the
    limit of ``s . v / k`` for occupation vectors ``v``.
    """
    if omega is None:
        omega = omega_matrix(T.perm)
    s = omega.apply([Fraction(x) for x in u])
    return cycle_length(s, T)


def cycle_length(s: Sequence, T: Iet) -> FieldVector:
    """``sum s_i a_i`` as an exact field element."""
    total = T.basis.zero()
    for c, a in zip(s, T.lengths):
        if c:
            total = total + a * c
    return total
