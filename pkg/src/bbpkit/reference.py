"""Independent high-precision oracles.

Everything a formula can be checked against lives here: base constants
(pi by a Machin arctangent pair, log 2 by its geometric series, zeta(3),
zeta(5), Catalan's constant and the fourth-order beta value through
accelerated alternating sums, Cl2(pi/3) through Hurwitz zeta values),
Hurwitz zeta by Euler-Maclaurin summation, Chebyshev-style acceleration of
alternating series, direct summation of polylogarithm points, and constant
monomials built from the cached bases.

All routines return certified FixReal values; precision is always an
explicit bit count.  Constant caches are write-once per precision level and
guarded by a lock, so concurrent readers are safe.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Union

from .bigmath import FixReal, ceil_div, fix_sqrt_int, tdiv
from .generator import LiPoint

__all__ = [
    "ConstMonomial",
    "ATOMS",
    "bernoulli",
    "hurwitz_zeta",
    "alt_sum",
    "constant",
    "const_value",
    "li_point_value",
    "pi_machin",
    "pi_alt",
]

_GUARD = 64

# atom name -> degree as a polylogarithm constant
ATOMS = {
    "one": 0,
    "zeta3": 3,
    "zeta5": 5,
    "catalan": 2,
    "cl2_pi3": 2,
    "cl4_pi2": 4,
}


@dataclass(frozen=True, slots=True)
class ConstMonomial:
    """pi^pi_pow * log(2)^log2_pow * atom."""

    pi_pow: int = 0
    log2_pow: int = 0
    atom: str = "one"

    def __post_init__(self) -> None:
        if self.pi_pow < 0 or self.log2_pow < 0:
            raise ValueError("powers must be non-negative")
        if self.atom not in ATOMS:
            raise ValueError(f"unknown atom {self.atom!r}")

    @property
    def total_degree(self) -> int:
        return self.pi_pow + self.log2_pow + ATOMS[self.atom]

    def __str__(self) -> str:
        names = {"one": "1", "zeta3": "zeta3", "zeta5": "zeta5", "catalan": "G",
                 "cl2_pi3": "Cl2pi3", "cl4_pi2": "Cl4pi2"}
        parts = []
        if self.pi_pow:
            parts.append("pi" if self.pi_pow == 1 else f"pi^{self.pi_pow}")
        if self.log2_pow:
            parts.append("log2" if self.log2_pow == 1 else f"log2^{self.log2_pow}")
        if self.atom != "one" or not parts:
            parts.append(names[self.atom])
        return " * ".join(parts)


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------

_bern: list[Fraction] = [Fraction(1), Fraction(-1, 2)]
_bern_lock = threading.Lock()


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2 convention)."""
    if n < 0:
        raise ValueError("index must be non-negative")
    with _bern_lock:
        while len(_bern) <= n:
            m = len(_bern)
            acc = Fraction(0)
            for j, bj in enumerate(_bern):
                acc += comb(m + 1, j) * bj
            _bern.append(-acc / (m + 1))
        return _bern[n]


# ---------------------------------------------------------------------------
# Euler-Maclaurin Hurwitz zeta
# ---------------------------------------------------------------------------

def hurwitz_zeta(s: int, a: Fraction, prec_bits: int) -> FixReal:
    """sum_{k>=0} (k+a)^(-s) for integer s >= 2 and rational a in (0, 1]."""
    if s < 2:
        raise ValueError("degree must be at least 2")
    a = Fraction(a)
    if not 0 < a <= 1:
        raise ValueError("offset must lie in (0, 1]")
    work = prec_bits + _GUARD
    u, v = a.numerator, a.denominator
    # head length: the correction terms bottom out near exp(-2*pi*cut), and the
    # term count needed to pass one working ulp stays safely below cut
    cut = work // 5 + 2 * s + 8

    acc = 0
    err = 0
    vs = v**s
    for k in range(cut):
        acc += (vs << work) // (k * v + u) ** s
        err += 1

    edge = cut * v + u  # (cut + a) * v
    # integral tail: (cut+a)^(1-s) / (s-1)
    tail = Fraction(v ** (s - 1), (s - 1) * edge ** (s - 1))
    # half-weight boundary term: (cut+a)^(-s) / 2
    tail += Fraction(vs, 2 * edge**s)
    acc += tdiv(tail.numerator << work, tail.denominator)
    err += 1

    # correction terms with even Bernoulli weights; the summand is completely
    # monotone, so the first omitted term bounds the remainder
    rising = Fraction(s)  # s*(s+1)*...*(s+2r-2)
    fact = Fraction(2)  # (2r)!
    threshold = Fraction(1, 1 << (work + 1))
    r = 1
    while True:
        power = Fraction(v ** (s + 2 * r - 1), edge ** (s + 2 * r - 1))
        term = bernoulli(2 * r) / fact * rising * power
        if abs(term) < threshold:
            err += 1
            break
        acc += tdiv(term.numerator << work, term.denominator)
        err += 1
        rising *= (s + 2 * r - 1) * (s + 2 * r)
        fact *= (2 * r + 1) * (2 * r + 2)
        r += 1
        if r > cut:
            raise ArithmeticError("correction terms failed to decay; cut too small")

    return FixReal(acc, work, err)


# ---------------------------------------------------------------------------
# accelerated alternating sums
# ---------------------------------------------------------------------------

Coefficient = Union[Fraction, FixReal]


def alt_sum(f: Callable[[int], Coefficient], prec_bits: int) -> FixReal:
    """Accelerated sum of (-1)^k f(k) for totally monotone decreasing f.

    Chebyshev-weight acceleration: about 1.31 terms per decimal digit, with
    the certified method error charged through the (3+sqrt(8))^(-n) bound.
    """
    work = prec_bits + _GUARD
    n = (work + 6) * 10000 // 25431 + 3  # log2(3+sqrt8) = 2.5431...

    d_prev, d = 1, 3  # ((3+sqrt8)^k + (3-sqrt8)^k) / 2
    for _ in range(n - 1):
        d_prev, d = d, 6 * d - d_prev

    b = Fraction(-1)
    c = -d
    acc = 0
    acc_err = 0  # ulps at scale 2^-work, before the final division by d
    a0: Fraction | None = None
    for k in range(n):
        assert b.denominator == 1
        c = int(b) - c
        fk = f(k)
        if isinstance(fk, FixReal):
            acc_err += ceil_div(abs(c) * fk.err_ulp << work, 1 << fk.frac_bits)
            fk = fk.value_fraction()
        if a0 is None:
            a0 = fk
        acc += tdiv(c * fk.numerator << work, fk.denominator)
        acc_err += 1
        b = b * (2 * (k + n) * (k - n)) / ((2 * k + 1) * (k + 1))

    assert a0 is not None
    result = tdiv(acc, d)
    method_err = ceil_div(8 * abs(a0.numerator) << work, a0.denominator * d) + 1
    err = ceil_div(acc_err, d) + 1 + method_err
    return FixReal(result, work, err)


# ---------------------------------------------------------------------------
# base constants
# ---------------------------------------------------------------------------

def _atan_inv(m: int, work: int) -> tuple[int, int]:
    """(mantissa, err_ulp) for arctan(1/m) at scale 2^-work."""
    t = (1 << work) // m
    m2 = m * m
    acc = 0
    k = 0
    while t:
        term = t // (2 * k + 1)
        acc += -term if k & 1 else term
        t //= m2
        k += 1
    return acc, 3 * k + 2


def pi_machin(bits: int) -> FixReal:
    """pi = 16 atan(1/5) - 4 atan(1/239)."""
    work = bits + 32
    a5, e5 = _atan_inv(5, work)
    a239, e239 = _atan_inv(239, work)
    return FixReal(16 * a5 - 4 * a239, work, 16 * e5 + 4 * e239)


def pi_alt(bits: int) -> FixReal:
    """pi = 8 atan(1/3) + 4 atan(1/7); used to cross-check the Machin value."""
    work = bits + 32
    a3, e3 = _atan_inv(3, work)
    a7, e7 = _atan_inv(7, work)
    return FixReal(8 * a3 + 4 * a7, work, 8 * e3 + 4 * e7)


def _log2_series(bits: int) -> FixReal:
    # log 2 = sum_{k>=1} 1 / (k * 2^k)
    work = bits + 32
    acc = 0
    for k in range(1, work + 1):
        acc += (1 << (work - k)) // k
    return FixReal(acc, work, work + 2)


def _zeta_odd(s: int, bits: int) -> FixReal:
    # zeta(s) = eta(s) / (1 - 2^(1-s)) with eta from the accelerated sum
    eta = alt_sum(lambda k: Fraction(1, (k + 1) ** s), bits + 8)
    scale = Fraction(1 << (s - 1), (1 << (s - 1)) - 1)
    return eta.scale_rat(scale, bits + 32)


def _beta_even(s: int, bits: int) -> FixReal:
    # beta(s) = sum (-1)^k / (2k+1)^s
    return alt_sum(lambda k: Fraction(1, (2 * k + 1) ** s), bits + 8)


def _cl2_pi3(bits: int) -> FixReal:
    # residues of sin(k*pi/3) modulo 6 reduce the Clausen value to four
    # Hurwitz zetas with a sqrt(3)/72 prefactor
    work = bits + 32
    z = (
        hurwitz_zeta(2, Fraction(1, 6), work)
        + hurwitz_zeta(2, Fraction(1, 3), work)
        - hurwitz_zeta(2, Fraction(2, 3), work)
        - hurwitz_zeta(2, Fraction(5, 6), work)
    )
    root3 = fix_sqrt_int(3, work)
    return z.mul(root3, work).scale_rat(Fraction(1, 72), work)


_const_cache: dict[str, FixReal] = {}
_const_lock = threading.Lock()

_BUILDERS: dict[str, Callable[[int], FixReal]] = {
    "pi": pi_machin,
    "log2": _log2_series,
    "zeta3": lambda bits: _zeta_odd(3, bits),
    "zeta5": lambda bits: _zeta_odd(5, bits),
    "catalan": lambda bits: _beta_even(2, bits),
    "cl4_pi2": lambda bits: _beta_even(4, bits),
    "cl2_pi3": _cl2_pi3,
    "one": lambda bits: FixReal.from_int(1, bits),
}


def constant(name: str, prec_bits: int) -> FixReal:
    """Cached base constant at (at least) the requested precision."""
    if name not in _BUILDERS:
        raise ValueError(f"unknown constant {name!r}")
    with _const_lock:
        cur = _const_cache.get(name)
        if cur is None or cur.frac_bits < prec_bits:
            cur = _BUILDERS[name](prec_bits)
            _const_cache[name] = cur
    return cur.rescale(prec_bits)


def const_value(mono: ConstMonomial, prec_bits: int) -> FixReal:
    """Certified value of a constant monomial."""
    work = prec_bits + 48
    result = FixReal.from_int(1, work)
    for _ in range(mono.pi_pow):
        result = result.mul(constant("pi", work), work)
    for _ in range(mono.log2_pow):
        result = result.mul(constant("log2", work), work)
    if mono.atom != "one":
        result = result.mul(constant(mono.atom, work), work)
    return result


# ---------------------------------------------------------------------------
# direct polylogarithm point summation
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def li_point_value(pt: LiPoint, prec_bits: int) -> FixReal:
    """Direct summation of sum_k p^k trig(k x) / k^s with exact trig patterns.

    Scale factors keep |z| <= 1/sqrt(2), so the series terminates after about
    2*prec/q terms.  Rational, sqrt(2) and sqrt(3) contributions accumulate
    separately and are recombined at the end.
    """
    work = prec_bits + _GUARD
    q = pt.scale_exp
    s = pt.degree
    rat_acc = 0
    r2_acc = 0
    r3_acc = 0
    err_terms = 0

    k = 1
    while q * k <= 2 * (work + 2):
        tv = pt.trig(k)
        qk = q * k
        ks = k**s
        if qk % 2 == 0:
            shift = qk // 2
            for value, bucket in ((tv.rat, 0), (tv.root2, 1), (tv.root3, 2)):
                if value:
                    t = _scaled_term(value, shift, ks, work)
                    err_terms += 1
                    if bucket == 0:
                        rat_acc += t
                    elif bucket == 1:
                        r2_acc += t
                    else:
                        r3_acc += t
        else:
            # p^k = sqrt(2) * 2^(-(qk+1)/2): rational part moves to the sqrt(2)
            # bucket, the sqrt(2) part doubles back to rational
            shift = (qk + 1) // 2
            if tv.root3:
                raise ArithmeticError(f"sqrt(6) term while summing {pt}")
            if tv.rat:
                r2_acc += _scaled_term(tv.rat, shift, ks, work)
                err_terms += 1
            if tv.root2:
                rat_acc += _scaled_term(2 * tv.root2, shift, ks, work)
                err_terms += 1
        k += 1

    total = FixReal(rat_acc, work, err_terms + 1)
    if r2_acc:
        total = total + FixReal(r2_acc, work, 1).mul(fix_sqrt_int(2, work), work)
    if r3_acc:
        total = total + FixReal(r3_acc, work, 1).mul(fix_sqrt_int(3, work), work)
    return total


def _scaled_term(value: Fraction, shift: int, ks: int, work: int) -> int:
    num = value.numerator
    den = value.denominator * ks
    e = work - shift
    if e >= 0:
        return tdiv(num << e, den)
    return tdiv(num, den << -e)
