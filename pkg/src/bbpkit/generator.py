"""Binary BBP-type formulas from polylogarithm evaluation points.

A point is the real or imaginary part of Li_s at z = 2^(-q/2) * exp(i*pi*n/d)
with d in {1, 2, 3, 4}.  Coefficients are derived from first principles: the
series is folded over one period L of exp(i*x) chosen so that 2^(-q*L/2) is an
integer power of two, the exact trigonometric values are carried in the field
Q(sqrt2, sqrt3), and the sqrt(2) parts are required to cancel identically.
Imaginary parts at angle pi/3 retain a common sqrt(3) factor, which moves into
the prefactor flag and makes the result evaluate-only.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple

from .pformula import PFormula, PHeader, canonicalize, evaluate

__all__ = [
    "LiPoint",
    "TrigValue",
    "PointError",
    "IrrationalCarryError",
    "period",
    "generate",
    "li_series_header",
    "parse_li_point",
    "serialize_li_point",
]


class PointError(ValueError):
    pass


class IrrationalCarryError(PointError):
    """A coefficient kept an irrational factor that does not cancel."""


class TrigValue(NamedTuple):
    """Exact rat + root2*sqrt(2) + root3*sqrt(3); at most one part irrational."""

    rat: Fraction
    root2: Fraction
    root3: Fraction


_ZERO = Fraction(0)
_HALF = Fraction(1, 2)

# cos/sin(m * pi/d) indexed by m mod 2d, for each supported denominator
_COS_TABLE: dict[int, list[TrigValue]] = {
    1: [TrigValue(Fraction(1), _ZERO, _ZERO), TrigValue(Fraction(-1), _ZERO, _ZERO)],
    2: [
        TrigValue(Fraction(1), _ZERO, _ZERO),
        TrigValue(_ZERO, _ZERO, _ZERO),
        TrigValue(Fraction(-1), _ZERO, _ZERO),
        TrigValue(_ZERO, _ZERO, _ZERO),
    ],
    3: [
        TrigValue(Fraction(1), _ZERO, _ZERO),
        TrigValue(_HALF, _ZERO, _ZERO),
        TrigValue(-_HALF, _ZERO, _ZERO),
        TrigValue(Fraction(-1), _ZERO, _ZERO),
        TrigValue(-_HALF, _ZERO, _ZERO),
        TrigValue(_HALF, _ZERO, _ZERO),
    ],
    4: [
        TrigValue(Fraction(1), _ZERO, _ZERO),
        TrigValue(_ZERO, _HALF, _ZERO),
        TrigValue(_ZERO, _ZERO, _ZERO),
        TrigValue(_ZERO, -_HALF, _ZERO),
        TrigValue(Fraction(-1), _ZERO, _ZERO),
        TrigValue(_ZERO, -_HALF, _ZERO),
        TrigValue(_ZERO, _ZERO, _ZERO),
        TrigValue(_ZERO, _HALF, _ZERO),
    ],
}

_SIN_TABLE: dict[int, list[TrigValue]] = {
    1: [TrigValue(_ZERO, _ZERO, _ZERO), TrigValue(_ZERO, _ZERO, _ZERO)],
    2: [
        TrigValue(_ZERO, _ZERO, _ZERO),
        TrigValue(Fraction(1), _ZERO, _ZERO),
        TrigValue(_ZERO, _ZERO, _ZERO),
        TrigValue(Fraction(-1), _ZERO, _ZERO),
    ],
    3: [
        TrigValue(_ZERO, _ZERO, _ZERO),
        TrigValue(_ZERO, _ZERO, _HALF),
        TrigValue(_ZERO, _ZERO, _HALF),
        TrigValue(_ZERO, _ZERO, _ZERO),
        TrigValue(_ZERO, _ZERO, -_HALF),
        TrigValue(_ZERO, _ZERO, -_HALF),
    ],
    4: [
        TrigValue(_ZERO, _ZERO, _ZERO),
        TrigValue(_ZERO, _HALF, _ZERO),
        TrigValue(Fraction(1), _ZERO, _ZERO),
        TrigValue(_ZERO, _HALF, _ZERO),
        TrigValue(_ZERO, _ZERO, _ZERO),
        TrigValue(_ZERO, -_HALF, _ZERO),
        TrigValue(Fraction(-1), _ZERO, _ZERO),
        TrigValue(_ZERO, -_HALF, _ZERO),
    ],
}


@dataclass(frozen=True, slots=True)
class LiPoint:
    """Polylog evaluation site: part of Li_degree at 2^(-scale_exp/2)*e^(i*pi*ang_num/ang_den).

    ang_num == 0 (with ang_den == 1) is the degenerate positive-real-argument
    case; it requires an even scale exponent and the real part.
    """

    degree: int
    scale_exp: int
    ang_num: int
    ang_den: int
    part: str  # "re" | "im"

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise PointError("degree must be positive")
        if self.scale_exp < 1:
            raise PointError("scale exponent must be positive")
        if self.part not in ("re", "im"):
            raise PointError(f"part must be 're' or 'im', not {self.part!r}")
        if self.ang_den not in (1, 2, 3, 4):
            raise PointError(f"unsupported angle denominator {self.ang_den}")
        if self.ang_num == 0:
            if self.part == "im":
                raise PointError("imaginary part at angle zero is identically zero")
            if self.ang_den != 1:
                raise PointError("angle zero must be written over denominator 1")
            if self.scale_exp % 2:
                raise PointError("angle-zero points need an even scale exponent")
        else:
            if not 0 < self.ang_num < 2 * self.ang_den:
                raise PointError("angle must lie in (0, 2*pi)")
            if gcd(self.ang_num, self.ang_den) != 1:
                raise PointError("angle fraction must be in lowest terms")
            # the half-odd scale factor sqrt(2) against sqrt(3)/2 trig values
            # yields sqrt(6) terms with no way to cancel
            if self.ang_den == 3 and self.scale_exp % 2:
                raise PointError("pi/3 angles need an even scale exponent")

    def trig(self, multiple: int) -> TrigValue:
        """Exact cos/sin(multiple * angle) per the selected part."""
        table = _COS_TABLE if self.part == "re" else _SIN_TABLE
        return table[self.ang_den][(multiple * self.ang_num) % (2 * self.ang_den)]

    def __str__(self) -> str:
        return serialize_li_point(self)


def parse_li_point(text: str) -> LiPoint:
    text = text.strip()
    for head, part, zero in (("ReLi0", "re", True), ("ReLi", "re", False), ("ImLi", "im", False)):
        if text.startswith(head + "(") and text.endswith(")"):
            args = [a.strip() for a in text[len(head) + 1 : -1].split(",")]
            if zero:
                if len(args) != 2:
                    raise PointError(f"ReLi0 takes (degree, scale_exp): {text!r}")
                return LiPoint(int(args[0]), int(args[1]), 0, 1, "re")
            if len(args) != 3:
                raise PointError(f"{head} takes (degree, scale_exp, n/d): {text!r}")
            if "/" in args[2]:
                n_str, d_str = args[2].split("/")
                n, d = int(n_str), int(d_str)
            else:
                n, d = int(args[2]), 1
            return LiPoint(int(args[0]), int(args[1]), n, d, part)
    raise PointError(f"not a polylog point: {text!r}")


def serialize_li_point(pt: LiPoint) -> str:
    if pt.ang_num == 0:
        return f"ReLi0({pt.degree}, {pt.scale_exp})"
    head = "ReLi" if pt.part == "re" else "ImLi"
    return f"{head}({pt.degree}, {pt.scale_exp}, {pt.ang_num}/{pt.ang_den})"


def period(pt: LiPoint) -> int:
    """Smallest L with exp(i*L*x) = 1 and q*L even, so p^L is a power of two."""
    if pt.ang_num == 0:
        base = 1
    else:
        base = 2 * pt.ang_den // gcd(pt.ang_num, 2 * pt.ang_den)
    return base if (pt.scale_exp * base) % 2 == 0 else 2 * base


def li_series_header(pt: LiPoint) -> PHeader:
    """Header of the minimal formula generate() produces for this point."""
    length = period(pt)
    return PHeader(pt.degree, pt.scale_exp * length // 2, length)


def generate(pt: LiPoint, target_len: int, self_check: bool = True) -> PFormula:
    """Exact formula of length target_len for the point, derived from periodicity.

    target_len must be a multiple of period(pt).  Coefficient j is fixed by
    pre * a_j = 2^(-q*j/2) * trig(j*x); surviving sqrt(2) parts raise
    IrrationalCarryError, a uniform sqrt(3) factor moves to the root3 flag.
    """
    length = int(target_len)
    per = period(pt)
    if length < 1 or length % per != 0:
        raise PointError(f"target length {length} is not a multiple of the period {per}")
    q = pt.scale_exp
    base_exp = q * length // 2

    rats: list[Fraction] = []
    root3_parts: list[Fraction] = []
    for j in range(1, length + 1):
        tv = pt.trig(j)
        qj = q * j
        if qj % 2 == 0:
            scale = Fraction(1, 1 << (qj // 2))
            rat, r2, r3 = tv.rat * scale, tv.root2 * scale, tv.root3 * scale
        else:
            # 2^(-qj/2) = sqrt(2) * 2^(-(qj+1)/2); sqrt(2)*sqrt(3) never occurs
            # for supported points, so reject it outright.
            if tv.root3 != 0:
                raise IrrationalCarryError(f"sqrt(6) factor at index {j} of {pt}")
            scale = Fraction(1, 1 << ((qj + 1) // 2))
            rat, r2, r3 = 2 * tv.root2 * scale, tv.rat * scale, _ZERO
        if r2 != 0:
            raise IrrationalCarryError(f"sqrt(2) factor does not cancel at index {j} of {pt}")
        rats.append(rat)
        root3_parts.append(r3)

    if any(root3_parts):
        if any(rats):
            raise IrrationalCarryError(f"mixed rational and sqrt(3) coefficients for {pt}")
        values = root3_parts
        root3 = True
    else:
        values = rats
        root3 = False

    if not any(values):
        from .pformula import zero_formula

        return zero_formula(pt.degree)

    den = 1
    for v in values:
        den = den * v.denominator // gcd(den, v.denominator)
    coeffs = tuple(int(v * den) for v in values)
    formula = canonicalize(
        PFormula(pt.degree, base_exp, length, coeffs, Fraction(1, den), root3)
    )
    if self_check:
        _assert_matches_reference(pt, formula)
    return formula


def _assert_matches_reference(pt: LiPoint, formula: PFormula, bits: int = 80) -> None:
    # cheap numerical confirmation that the derived coefficients reproduce the
    # point value; import deferred to avoid a module cycle
    from . import reference

    lhs = evaluate(formula, bits)
    rhs = reference.li_point_value(pt, bits)
    diff = lhs - rhs
    tolerance = diff.error_fraction() + Fraction(1, 1 << (bits - 8))
    if abs(diff.value_fraction()) > tolerance:
        raise AssertionError(f"generated formula disagrees with direct summation for {pt}")
