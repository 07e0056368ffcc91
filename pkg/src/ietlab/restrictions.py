"""Restriction spaces, the rich/poor dichotomy, the SAF invariant and
separating cycles.

A restriction is an integral covector ``r`` with ``r . a = 0``.  A space of
restrictions is rich when its annihilator is isotropic for the form of the
permutation, and poor otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError
from .exact import FieldVector
from .homology import OmegaForm, asymptotic_pairing, cycle_length, omega_matrix
from .iet import Iet
from .linalg import integral_row_basis, matmul, nullspace, primitive, rank, solve, transpose


class RestrictionSpace:
    """Span of integral covectors, stored as a canonical primitive basis."""

    __slots__ = ("n", "basis")

    def __init__(self, n: int, rows: Sequence[Sequence] = ()):
        rows = [list(r) for r in rows]
        for r in rows:
            if len(r) != n:
                raise DomainError("restriction of length %d in a space of dimension %d" % (len(r), n))
        self.n = n
        self.basis = tuple(tuple(r) for r in integral_row_basis(rows)) if rows else ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, r) -> bool:
        if not self.basis:
            return not any(r)
        return rank(list(self.basis) + [list(r)]) == self.dim

    def __le__(self, other: "RestrictionSpace") -> bool:
        return all(other.contains(r) for r in self.basis)

    def __eq__(self, other):
        if not isinstance(other, RestrictionSpace):
            return NotImplemented
        return self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return hash((self.n, self.basis))

    def is_satisfied_by(self, T: Iet) -> bool:
        return all(cycle_length(r, T).is_zero() for r in self.basis)

    def __repr__(self):
        return "RestrictionSpace(%d, %s)" % (self.n, [list(r) for r in self.basis])


def full_restriction_lattice(T: Iet) -> RestrictionSpace:
    """Every integral relation ``r . a = 0`` among the lengths of ``T``."""
    return RestrictionSpace(T.n, nullspace(T.coefficient_matrix()))


def annihilator(R: RestrictionSpace):
    """Rational basis of ``{v : r . v = 0 for r in R}``."""
    return nullspace([list(r) for r in R.basis], ncols=R.n)


@dataclass(frozen=True)
class Rich:
    kind = "rich"


@dataclass(frozen=True)
class Poor:
    v: tuple
    w: tuple
    value: Fraction
    kind = "poor"


def classify_rich_poor(R: RestrictionSpace, omega: OmegaForm):
    if R.n != omega.n:
        raise DomainError("restriction space and form have different dimensions")
    ann = [primitive(v) for v in annihilator(R)]
    for i, v in enumerate(ann):
        for w in ann[i + 1:]:
            value = omega(v, w)
            if value != 0:
                return Poor(tuple(v), tuple(w), value)
    return Rich()


@dataclass(frozen=True)
class SafMatrix:
    """``SAF = sum_{k<l} 2 M[k][l] g_k ^ g_l`` over the generators ``names``."""

    names: tuple
    M: tuple

    @property
    def d(self) -> int:
        return len(self.names)

    def is_zero(self) -> bool:
        return not any(x for row in self.M for x in row)

    def wedge_coefficients(self) -> dict:
        """Nonzero coefficients of ``g_k ^ g_l`` for ``k < l``."""
        out = {}
        for k in range(self.d):
            for l in range(k + 1, self.d):
                if self.M[k][l]:
                    out[(self.names[k], self.names[l])] = 2 * self.M[k][l]
        return out


def saf_invariant(T: Iet, omega: OmegaForm | None = None) -> SafMatrix:
    if omega is None:
        omega = omega_matrix(T.perm)
    A = T.coefficient_matrix()
    M = matmul(matmul(A, omega.rows()), transpose(A))
    return SafMatrix(T.basis.names, tuple(tuple(r) for r in M))


def find_separating_cycle(R: RestrictionSpace, T: Iet, omega: OmegaForm | None = None):
    """A cocycle ``u`` in ``Ann(R)`` whose absolute cycle ``s = Omega u`` has
    nonzero length ``s . a``; returns ``(u, s)`` as integer vectors or ``None``.

    The length is linear in ``u``, so testing a basis of ``Ann(R)`` decides
    existence.
    """
    if omega is None:
        omega = omega_matrix(T.perm)
    for u in annihilator(R):
        u = primitive(u)
        if not asymptotic_pairing(u, T, omega).is_zero():
            s = [int(x) for x in omega.apply(u)]
            return u, s
    return None


def is_separating_cycle(s: Sequence, R: RestrictionSpace, T: Iet,
                        omega: OmegaForm | None = None) -> bool:
    """Check ``s`` directly: ``s = Omega u`` for some ``u`` annihilating ``R``,
    and ``s . a != 0``."""
    if omega is None:
        omega = omega_matrix(T.perm)
    rows = omega.rows() + [list(r) for r in R.basis]
    rhs = [Fraction(x) for x in s] + [Fraction(0)] * R.dim
    if solve(rows, rhs) is None:
        return False
    return not cycle_length(s, T).is_zero()
