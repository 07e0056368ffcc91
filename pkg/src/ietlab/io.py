"""JSON encodings.  Rationals travel as ``"p/q"`` strings; field elements as
one such string per generator."""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError
from .exact import FieldVector, GeneratorBasis, format_rational, parse_rational
from .gasket import MembershipTrace
from .iet import Iet, NoObstructionUpTo, NonMinimalPeriodic, SaddleConnection
from .itm import FiniteType, IntervalSet, Undetermined


def basis_to_json(basis: GeneratorBasis) -> dict:
    digits = basis.precision
    values = []
    for v in basis.values:
        n = abs(v.numerator) * 10 ** digits // v.denominator
        s = str(n).rjust(digits + 1, "0")
        text = s[:-digits] + "." + s[-digits:]
        values.append(("-" if v < 0 else "") + text.rstrip("0").rstrip("."))
    return {"names": list(basis.names), "values": values}


def basis_from_json(obj, precision=None) -> GeneratorBasis:
    if obj is None:
        return GeneratorBasis.rational()
    try:
        names, values = obj["names"], obj["values"]
    except (KeyError, TypeError):
        raise DomainError("generators need 'names' and 'values'")
    if not names or str(names[0]) != "1":
        raise DomainError("the first generator must be the literal 1")
    if precision is None and "precision" in obj:
        precision = int(obj["precision"])
    if precision is None:
        longest = max((len(str(v).partition(".")[2]) for v in values), default=1)
        from .exact import default_precision

        precision = max(longest, default_precision())
    return GeneratorBasis(names, [str(v) for v in values], precision)


def fv_to_json(v) -> list:
    if isinstance(v, FieldVector):
        return v.to_strings()
    return [format_rational(v)]


def fv_from_json(basis: GeneratorBasis, obj) -> FieldVector:
    if isinstance(obj, (str, int)):
        return basis.const(parse_rational(obj))
    if isinstance(obj, list):
        if len(obj) > basis.dim:
            raise DomainError("%d coefficients for %d generators" % (len(obj), basis.dim))
        coeffs = [parse_rational(c) for c in obj] + [Fraction(0)] * (basis.dim - len(obj))
        return basis.vector(coeffs)
    raise DomainError("cannot read field element %r" % (obj,))


def iet_to_json(T: Iet) -> dict:
    return {
        "generators": basis_to_json(T.basis),
        "pi": list(T.perm.images),
        "lengths": [fv_to_json(a) for a in T.lengths],
    }


def iet_from_json(obj, precision=None, unit=True) -> Iet:
    if not isinstance(obj, dict) or "pi" not in obj or "lengths" not in obj:
        raise DomainError("an IET needs 'pi' and 'lengths'")
    basis = basis_from_json(obj.get("generators"), precision)
    lengths = [fv_from_json(basis, a) for a in obj["lengths"]]
    return Iet(obj["pi"], lengths, unit=unit)


def interval_to_json(interval) -> list:
    return [fv_to_json(x) for x in interval]


def verdict_to_json(verdict) -> dict:
    if isinstance(verdict, NonMinimalPeriodic):
        return {"kind": verdict.kind, "period": verdict.period,
                "interval": interval_to_json(verdict.interval)}
    if isinstance(verdict, SaddleConnection):
        return {"kind": verdict.kind, "i": verdict.i, "j": verdict.j, "steps": verdict.steps}
    if isinstance(verdict, NoObstructionUpTo):
        return {"kind": verdict.kind, "depth": verdict.depth, "powerCap": verdict.power_cap,
                "maxFrequencyDeviation": verdict.max_frequency_deviation}
    if isinstance(verdict, MembershipTrace):
        out = {"kind": verdict.kind, "step": verdict.step, "indices": list(verdict.indices)}
        if verdict.kind == "Escaped":
            out["tie"] = verdict.tie
        if verdict.kind == "IndexStarved":
            out["missing"] = list(verdict.missing)
            out["window"] = verdict.window
        return out
    if isinstance(verdict, (FiniteType, Undetermined)):
        out = {"kind": verdict.kind, "image": interval_set_to_json(verdict.image)}
        if isinstance(verdict, FiniteType):
            out["m"] = verdict.m
        else:
            out["cap"] = verdict.cap
        return out
    raise DomainError("no JSON form for %r" % (verdict,))


def interval_set_to_json(S: IntervalSet) -> list:
    return [interval_to_json(p) for p in S]


def fractions_to_json(values) -> list:
    return [format_rational(Fraction(v)) for v in values]


def parse_rational_list(text: str) -> list:
    return [parse_rational(t) for t in str(text).split(",") if t.strip()]
