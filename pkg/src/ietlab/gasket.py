"""The Rauzy gasket: fully subtractive projective dynamics on triples.

``P_i`` adds the other two coordinates to coordinate ``i``.  A point of the
simplex lies in the gasket when repeatedly undoing the unique applicable
``P_i`` never gets stuck and every index keeps reappearing.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from math import gcd

from .errors import CellViolation, ChartDomain, DomainError
from .exact import FieldVector

P_MATRICES = {
    1: ((1, 1, 1), (0, 1, 0), (0, 0, 1)),
    2: ((1, 0, 0), (1, 1, 1), (0, 0, 1)),
    3: ((1, 0, 0), (0, 1, 0), (1, 1, 1)),
}

DEFAULT_STARVATION_WINDOW = 30


def _is_fv(x) -> bool:
    return isinstance(x, FieldVector)


@dataclass(frozen=True)
class GasketPoint:
    """Projective triple with nonnegative coordinates.

    Rational triples are kept normalized to sum 1.  Field-vector triples are
    normalized only when their sum happens to be rational.
    """

    coords: tuple

    def __init__(self, coords):
        coords = tuple(c if _is_fv(c) else Fraction(c) for c in coords)
        if len(coords) != 3:
            raise DomainError("a gasket point has three coordinates")
        if any(c < 0 for c in coords):
            raise DomainError("gasket coordinates must be nonnegative")
        total = coords[0] + coords[1] + coords[2]
        if total == 0:
            raise DomainError("gasket point (0:0:0) is not projective")
        if _is_fv(total):
            if total.is_rational():
                t = total.rational()
                coords = tuple(c / t for c in coords)
        else:
            coords = tuple(c / total for c in coords)
        object.__setattr__(self, "coords", coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def is_rational(self) -> bool:
        return all(not _is_fv(c) or c.is_rational() for c in self.coords)

    def fractions(self):
        return tuple(c.rational() if _is_fv(c) else c for c in self.coords)


def gasket_apply(i: int, p: GasketPoint, direction: str = "fwd") -> GasketPoint:
    if i not in P_MATRICES:
        raise DomainError("gasket index must be 1, 2 or 3")
    x = list(p.coords)
    k = i - 1
    others = [x[j] for j in range(3) if j != k]
    if direction == "fwd":
        x[k] = x[k] + others[0] + others[1]
    elif direction == "inv":
        y = x[k] - others[0] - others[1]
        if y < 0:
            raise CellViolation("point is outside the cell P_%d(Delta)" % i)
        x[k] = y
    else:
        raise DomainError("direction must be 'fwd' or 'inv'")
    return GasketPoint(x)


@dataclass(frozen=True)
class MembershipTrace:
    """Outcome of the subtractive algorithm.

    ``kind`` is ``"SurvivedDepth"``, ``"Escaped"`` or ``"IndexStarved"``;
    ``step`` is the depth reached, the escape step, or the step at which
    starvation was detected.
    """

    kind: str
    step: int
    indices: tuple
    tie: bool = False
    missing: tuple = ()
    window: int = 0
    point: tuple = field(default=(), compare=False, repr=False)

    @property
    def escaped(self) -> bool:
        return self.kind == "Escaped"


def _starved(indices, window):
    if window <= 0 or len(indices) < window:
        return ()
    recent = set(indices[-window:])
    return tuple(i for i in (1, 2, 3) if i not in recent)


def _integer_triple(coords):
    fr = [c.rational() if _is_fv(c) else Fraction(c) for c in coords]
    den = 1
    for q in fr:
        den = den * q.denominator // gcd(den, q.denominator)
    return [int(q * den) for q in fr]


def gasket_membership(p, depth: int, starvation_window: int = DEFAULT_STARVATION_WINDOW) -> MembershipTrace:
    if depth < 1:
        raise DomainError("depth must be >= 1")
    if not isinstance(p, GasketPoint):
        p = GasketPoint(p)
    if p.is_rational():
        return _membership_int(_integer_triple(p.coords), depth, starvation_window)
    return _membership_generic(list(p.coords), depth, starvation_window)


def _membership_int(x, depth, window):
    indices = []
    x0, x1, x2 = x
    for step in range(depth):
        t = x0 + x1 + x2
        if 2 * x0 >= t:
            if 2 * x0 == t:
                return MembershipTrace("Escaped", step, tuple(indices), tie=True, point=(x0, x1, x2))
            x0 -= x1 + x2
            indices.append(1)
        elif 2 * x1 >= t:
            if 2 * x1 == t:
                return MembershipTrace("Escaped", step, tuple(indices), tie=True, point=(x0, x1, x2))
            x1 -= x0 + x2
            indices.append(2)
        elif 2 * x2 >= t:
            if 2 * x2 == t:
                return MembershipTrace("Escaped", step, tuple(indices), tie=True, point=(x0, x1, x2))
            x2 -= x0 + x1
            indices.append(3)
        else:
            return MembershipTrace("Escaped", step, tuple(indices), point=(x0, x1, x2))
        missing = _starved(indices, window)
        if missing:
            return MembershipTrace("IndexStarved", step + 1, tuple(indices), missing=missing,
                                   window=window, point=(x0, x1, x2))
    return MembershipTrace("SurvivedDepth", depth, tuple(indices), point=(x0, x1, x2))


def _membership_generic(x, depth, window):
    indices = []
    for step in range(depth):
        t = x[0] + x[1] + x[2]
        chosen = None
        for k in range(3):
            d = x[k] * 2 - t
            s = d.sign() if _is_fv(d) else (d > 0) - (d < 0)
            if s == 0:
                return MembershipTrace("Escaped", step, tuple(indices), tie=True, point=tuple(x))
            if s > 0:
                chosen = k
                break
        if chosen is None:
            return MembershipTrace("Escaped", step, tuple(indices), point=tuple(x))
        x[chosen] = x[chosen] * 2 - t
        indices.append(chosen + 1)
        missing = _starved(indices, window)
        if missing:
            return MembershipTrace("IndexStarved", step + 1, tuple(indices), missing=missing,
                                   window=window, point=tuple(x))
    return MembershipTrace("SurvivedDepth", depth, tuple(indices), point=tuple(x))


def trace_rows(p, indices):
    """Rows ``(step, index, x1, x2, x3)`` replaying ``indices`` from ``p``."""
    if not isinstance(p, GasketPoint):
        p = GasketPoint(p)
    rows = [(0, 0) + p.coords]
    for step, i in enumerate(indices, 1):
        p = gasket_apply(i, p, "inv")
        rows.append((step, i) + p.coords)
    return rows


def perron_point(digits: int = 80, iterations: int = 400) -> GasketPoint:
    """Rational approximation of the Perron eigenvector of ``P1 P2 P3``."""
    M = ((4, 3, 2), (2, 2, 1), (1, 1, 1))
    with localcontext() as ctx:
        ctx.prec = digits + 10
        v = [Decimal(1)] * 3
        for _ in range(iterations):
            w = [sum(M[i][j] * v[j] for j in range(3)) for i in range(3)]
            s = sum(w)
            v = [c / s for c in w]
        q = Decimal(1).scaleb(-digits)
        return GasketPoint([Fraction(c.quantize(q)) for c in v])


# -- the slice of the three-parameter family ----------------------------------


def slice_chart(a1, a2, a3) -> GasketPoint:
    """``(b1 : b2 : b3) = P3 P2 (a1 : a2 : a3)`` on the slice ``3a1 + 2a2 + 2a3 = 1``."""
    for a in (a1, a2, a3):
        if a < 0:
            raise ChartDomain("slice coordinates must be nonnegative")
    if a1 * 3 + a2 * 2 + a3 * 2 != 1:
        raise ChartDomain("point is off the slice 3a1 + 2a2 + 2a3 = 1")
    return GasketPoint((a1, a1 + a2 + a3, a1 * 2 + a2 + a3 * 2))


def slice_chart_inverse(b) -> tuple:
    """Slice coordinates ``(a1, a2, a3)`` of a point ``(b1 : b2 : b3)`` of ``P3 P2 (Delta)``."""
    if not isinstance(b, GasketPoint):
        b = GasketPoint(b)
    b1, b2, b3 = b.coords
    a = (b1, b2 * 2 - b3, b3 - b1 - b2)
    if any(c < 0 for c in a):
        raise ChartDomain("point is outside P3 P2 (Delta)")
    scale = b1 + b2 * 2
    if _is_fv(scale):
        if not scale.is_rational():
            raise ChartDomain("cannot normalize onto the slice with an irrational scale")
        scale = scale.rational()
    return tuple(c / scale for c in a)


# -- rasters ---------------------------------------------------------------------

REGIONS = ("delta", "example4slice", "example3square")


def pixel_point(region: str, col: int, row: int, width: int, height: int):
    """Exact parameters at the center of a pixel; row 0 is the top."""
    u = Fraction(2 * col + 1, 2 * width)
    v = Fraction(2 * (height - row) - 1, 2 * height)
    if region == "delta":
        return (u, v, 1 - u - v)
    if region == "example4slice":
        a2 = u / 2
        a1 = v / 3
        return (a1, a2, (1 - 3 * a1 - 2 * a2) / 2)
    if region == "example3square":
        return (u / 4, v * 3 / 4)
    raise DomainError("unknown region %r" % region)


def pixel_black(region: str, point, depth: int) -> bool:
    """Survives ``depth + 1`` cell tests (gasket regions) or lies in ``a2 < a1``."""
    if region == "example3square":
        a1, a2 = point
        return a2 <= 3 * a1 and a2 < a1
    if any(c < 0 for c in point):
        return False
    if region == "example4slice":
        point = slice_chart(*point).coords
    trace = _membership_int(_integer_triple(point), depth + 1, 0)
    return not trace.escaped


def _pixel_triple(region, col, row, width, height):
    """Integer homogeneous triple of the gasket point at a pixel, or ``None``
    outside the region; agrees with :func:`pixel_point` up to scale."""
    U = 2 * col + 1
    V = 2 * (height - row) - 1
    if region == "delta":
        X, Y = U * height, V * width
        Z = 2 * width * height - X - Y
        return None if Z < 0 else (X, Y, Z)
    A1 = 2 * width * V
    A2 = 3 * height * U
    A3 = 3 * (2 * width * height - width * V - height * U)
    if A3 < 0:
        return None
    return (A1, A1 + A2 + A3, 2 * A1 + A2 + 2 * A3)


def _render_rows(args):
    region, width, height, depth, r0, r1 = args
    out = bytearray()
    if region == "example3square":
        for row in range(r0, r1):
            for col in range(width):
                black = pixel_black(region, pixel_point(region, col, row, width, height), depth)
                out.append(0 if black else 255)
        return bytes(out)
    for row in range(r0, r1):
        for col in range(width):
            x = _pixel_triple(region, col, row, width, height)
            black = x is not None and not _membership_int(list(x), depth + 1, 0).escaped
            out.append(0 if black else 255)
    return bytes(out)


def render_raster(region: str, width: int, height: int, depth: int, workers: int = 1) -> bytes:
    """Grayscale pixels, row-major, 0 for points in the set and 255 otherwise."""
    if region not in REGIONS:
        raise DomainError("unknown region %r" % region)
    if width <= 0 or height <= 0:
        raise DomainError("raster dimensions must be positive")
    if depth < 0:
        raise DomainError("depth must be nonnegative")
    if workers <= 1:
        return _render_rows((region, width, height, depth, 0, height))
    chunk = max(1, height // (4 * workers))
    jobs = [(region, width, height, depth, r, min(height, r + chunk)) for r in range(0, height, chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return b"".join(pool.map(_render_rows, jobs))


def pgm_bytes(pixels: bytes, width: int, height: int) -> bytes:
    if len(pixels) != width * height:
        raise DomainError("pixel buffer does not match the raster size")
    return b"P5\n%d %d\n255\n" % (width, height) + pixels


def black_count(pixels: bytes) -> int:
    return pixels.count(0)
