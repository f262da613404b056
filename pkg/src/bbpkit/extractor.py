"""Position-addressable digit extraction.

Hex digits of a formula value starting at an arbitrary bit position after the
binary point, without computing the preceding digits.  Head terms (those with
a positive power of two left over) go through modular exponentiation and are
accumulated modulo one in fixed point; tail terms are summed directly until
they drop below the working resolution.  Everything is done in bits
internally; hex is only the presentation layer.

Only formulas whose prefactor denominator is a power of two are extractable.
For a combination whose canonical prefactor kept an odd denominator,
``to_extractable`` stretches the formula by that odd factor first, which
moves it into the coefficient indices at unchanged value.
"""
from __future__ import annotations

from dataclasses import dataclass

from .bigmath import powmod
from .pformula import FormulaError, PFormula, evaluate, stretch

__all__ = [
    "ExtractRequest",
    "ExtractResult",
    "ExtractionError",
    "ConfidenceError",
    "extract",
    "digit_window",
    "to_extractable",
]


class ExtractionError(ValueError):
    pass


class ConfidenceError(ExtractionError):
    """Result too close to a carry boundary; retry with a larger guard."""


@dataclass(frozen=True, slots=True)
class ExtractRequest:
    formula: PFormula
    bit_pos: int
    hex_digits: int
    guard_hex: int = 8

    def __post_init__(self) -> None:
        if self.bit_pos < 0:
            raise ExtractionError("bit position must be non-negative")
        if self.hex_digits < 1:
            raise ExtractionError("at least one hex digit must be requested")
        if self.guard_hex < 1:
            raise ExtractionError("guard must be at least one hex digit")


@dataclass(frozen=True, slots=True)
class ExtractResult:
    digits: str
    confidence_bits: int


def to_extractable(p: PFormula) -> PFormula:
    """Equal-value formula whose prefactor denominator is a power of two.

    Stretching by the odd part of the denominator multiplies the prefactor by
    odd^degree, clearing the denominator while spreading the coefficients.
    """
    if p.root3:
        raise ExtractionError("sqrt(3)-carrying formulas are evaluate-only")
    den = p.pre.denominator
    odd = den // (den & -den)
    if odd == 1:
        return p
    return stretch(p, odd)


def extract(req: ExtractRequest) -> ExtractResult:
    """Hex digits of frac(2^bit_pos * |value|), with a carry-distance certificate.

    The sign of the value is determined by a low-precision evaluation and
    reported separately (the digits always describe the magnitude).  Raises
    ExtractionError for prefactors with an odd denominator and
    ConfidenceError when the accumulator lands within the certified error of
    a carry boundary.
    """
    p = req.formula
    if p.root3:
        raise ExtractionError("sqrt(3)-carrying formulas are evaluate-only")
    if p.is_zero():
        return ExtractResult("0" * req.hex_digits, 4 * req.guard_hex)
    den = p.pre.denominator
    if den & (den - 1):
        raise ExtractionError(
            f"prefactor denominator {den} is not a power of two; evaluate-only formula"
        )
    work = 4 * (req.hex_digits + req.guard_hex)
    mod_mask = (1 << work) - 1
    num = p.pre.numerator  # signed: the accumulator tracks frac(2^pos * value)
    pos = req.bit_pos - (den.bit_length() - 1)

    entries = [(j, a) for j, a in enumerate(p.coeffs, start=1) if a]
    coeff_sum = abs(num) * sum(abs(a) for _, a in entries)
    acc = 0
    err = 0
    k = 0
    while True:
        e = pos - p.base_exp * k
        if e < 0 and coeff_sum.bit_length() + work + e + 2 <= 0:  # tail below half ulp
            break
        base = k * p.length
        for j, a in entries:
            d = (base + j) ** p.degree
            if e >= 0:
                r = (num * a * powmod(2, e, d)) % d
                acc = (acc + ((r << work) // d)) & mod_mask
            else:
                wpe = work + e
                if wpe >= 0:
                    t = (num * a << wpe) // d
                else:
                    t = (num * a) // (d << -wpe)
                acc = (acc + t) & mod_mask
            err += 1
        k += 1
    err += 2  # dropped tail, plus slack for the sign flip below

    sign_probe = evaluate(p, 64)
    if sign_probe.certified_sign() < 0:
        acc = (-acc) & mod_mask

    tail_bits = 4 * req.guard_hex
    low = acc & ((1 << tail_bits) - 1)
    dist = min(low, (1 << tail_bits) - low)
    margin = dist - err
    if margin <= 0:
        raise ConfidenceError(
            f"accumulator within {err} ulps of a carry boundary; "
            f"retry with guard_hex > {req.guard_hex}"
        )
    digits = f"{acc >> tail_bits:0{req.hex_digits}X}"
    return ExtractResult(digits, margin.bit_length())


def digit_window(formula: PFormula, bit_pos: int, count: int, prec_bits: int) -> str:
    """Evaluator-backed oracle: hex digits of the value in [bit_pos, bit_pos+4*count).

    Requires prec_bits >= bit_pos + 4*count + 64 so the window is meaningful.
    """
    if prec_bits < bit_pos + 4 * count + 64:
        raise FormulaError("insufficient precision for the requested window")
    value = evaluate(formula, prec_bits)
    # the 64-bit evaluation guard must dominate the certified error by a wide margin
    slack = value.frac_bits - (bit_pos + 4 * count)
    if value.err_ulp >> max(slack - 8, 0):
        raise FormulaError("evaluation error too large for the requested window")
    return value.hex_frac_window(bit_pos, count)
