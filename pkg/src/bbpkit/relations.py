"""Zero-relation certification and PSLQ integer-relation search.

The PSLQ implementation is the standard single-level algorithm (weighted
diagonal row selection with gamma = 2/sqrt(3), corner Givens rotation,
Hermite-style size reduction) run over fixed-point big integers.  Candidate
relations coming out of the reduced basis are always confirmed by an exact
certified re-evaluation against the input values before being returned, so
internal rounding can delay but never corrupt a result.  When the search
stops without a relation, the standard smallest-diagonal bound certifies
that no relation with coefficients below the reported norm exists at the
working precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt

from .bigmath import FixReal
from .catalog import LinearExpr, evaluate_expr, bits_for_digits

__all__ = [
    "RelationResult",
    "PslqReport",
    "PrecisionExhausted",
    "certify_zero",
    "pslq",
]


class PrecisionExhausted(ArithmeticError):
    """Working precision ran out before a relation could be confirmed or excluded."""


@dataclass(frozen=True, slots=True)
class RelationResult:
    coeffs: tuple[int, ...]
    residual: FixReal
    norm_bound: int

    def __post_init__(self) -> None:
        if not any(self.coeffs):
            raise ValueError("relation coefficients must not all be zero")


@dataclass(frozen=True, slots=True)
class PslqReport:
    relation: RelationResult | None
    exclusion_bound: int
    iterations: int
    status: str  # "found" | "excluded"


def certify_zero(expr: LinearExpr, decimal_digits: int = 200) -> FixReal:
    """Certified residual of the expression; small residual = certified zero.

    Certification at d digits means |residual| < 10^-d is guaranteed by the
    returned value's error bound; a large residual is a finding, not an error.
    """
    return evaluate_expr(expr, bits_for_digits(decimal_digits))


def _nint_div(a: int, b: int) -> int:
    if b < 0:
        a, b = -a, -b
    return (2 * a + b) // (2 * b)


def _normalize_relation(coeffs: list[int]) -> tuple[int, ...]:
    g = reduce(gcd, (abs(c) for c in coeffs if c), 0)
    first = next(c for c in coeffs if c)
    sign = -1 if first < 0 else 1
    return tuple(c // (sign * g) for c in coeffs)


def _confirm(coeffs: tuple[int, ...], values: list[FixReal], prec_bits: int) -> FixReal | None:
    total = FixReal.zero(prec_bits)
    for c, v in zip(coeffs, values):
        if c:
            total = total + v.scale_rat(Fraction(c), prec_bits)
    if total.certified_below(Fraction(1, 1 << (prec_bits // 2))):
        return total
    return None


def pslq(values: list[FixReal], max_norm: int, prec_bits: int) -> PslqReport:
    """Search for integers c (not all zero) with sum c_i * values_i = 0.

    Returns a found relation (gcd-normalized, first nonzero coefficient
    positive, residual certified below 2^(-prec_bits/2)) or an exclusion
    bound showing no relation with |coefficients| <= max_norm exists at this
    precision.  Raises PrecisionExhausted when the y-vector reaches the noise
    floor without either outcome.
    """
    n = len(values)
    if n < 2:
        raise ValueError("need at least two values")
    if max_norm < 1:
        raise ValueError("max_norm must be positive")
    f = prec_bits
    one = 1 << f
    xs = [v.rescale(f).mantissa for v in values]
    if any(x == 0 for x in xs):
        raise PrecisionExhausted("an input value is indistinguishable from zero")

    # scale to a unit vector
    norm = isqrt(sum(x * x for x in xs))
    y = [(x << f) // norm for x in xs]

    # lower trapezoidal H from the partial-sum frame
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + y[i] * y[i]
    s = [isqrt(v) for v in suffix[:n]]
    H = [[0] * (n - 1) for _ in range(n)]
    for i in range(n):
        if i < n - 1:
            if s[i] == 0:
                raise PrecisionExhausted("degenerate partial sums")
            H[i][i] = (s[i + 1] << f) // s[i]
        for j in range(i):
            d = s[j] * s[j + 1]
            if d == 0:
                raise PrecisionExhausted("degenerate partial sums")
            H[i][j] = (-(y[i] * y[j]) << f) // d

    A = [[int(i == j) for j in range(n)] for i in range(n)]
    B = [[int(i == j) for j in range(n)] for i in range(n)]

    def reduce_row(i: int, j_start: int) -> None:
        for j in range(j_start, -1, -1):
            if H[j][j] == 0:
                raise PrecisionExhausted("vanishing diagonal during reduction")
            t = _nint_div(H[i][j], H[j][j])
            if t == 0:
                continue
            y[j] += t * y[i]
            for k in range(j + 1):
                H[i][k] -= t * H[j][k]
            for k in range(n):
                A[i][k] -= t * A[j][k]
                B[k][j] += t * B[k][i]

    for i in range(1, n):
        reduce_row(i, i - 1)

    # gamma^2 = 4/3; compare 4^i 3^(n-i) H_ii^2 exactly
    weights = [4**i * 3 ** (n - 1 - i) for i in range(n - 1)]
    noise_floor = 1 << 32
    detect = 1 << 80  # y mantissa below 2^(80-f): try the candidate column

    max_iter = 64 * n * n * max(max_norm.bit_length(), 8)
    for iteration in range(1, max_iter + 1):
        m = 0
        best = -1
        for i in range(n - 1):
            w = weights[i] * H[i][i] * H[i][i]
            if w > best:
                best = w
                m = i
        y[m], y[m + 1] = y[m + 1], y[m]
        H[m], H[m + 1] = H[m + 1], H[m]
        A[m], A[m + 1] = A[m + 1], A[m]
        for row in B:
            row[m], row[m + 1] = row[m + 1], row[m]

        if m < n - 2:
            t0_sq = H[m][m] * H[m][m] + H[m][m + 1] * H[m][m + 1]
            t0 = isqrt(t0_sq)
            if t0 == 0:
                raise PrecisionExhausted("vanishing corner during rotation")
            hmm, hmm1 = H[m][m], H[m][m + 1]
            for i in range(m, n):
                a_, b_ = H[i][m], H[i][m + 1]
                H[i][m] = (a_ * hmm + b_ * hmm1) // t0
                H[i][m + 1] = (b_ * hmm - a_ * hmm1) // t0

        for i in range(m + 1, n):
            reduce_row(i, min(i - 1, m + 1))

        # detection: some y entry collapsed to the working resolution
        min_abs = min(abs(v) for v in y)
        if min_abs < detect:
            idx = min(range(n), key=lambda i: abs(y[i]))
            candidate = [B[k][idx] for k in range(n)]
            if any(candidate):
                coeffs = _normalize_relation(candidate)
                residual = _confirm(coeffs, values, prec_bits)
                if residual is not None:
                    bound = _diag_bound(H, n, f)
                    return PslqReport(
                        RelationResult(coeffs, residual, max_norm),
                        bound,
                        iteration,
                        "found",
                    )
            if min_abs < noise_floor:
                raise PrecisionExhausted(
                    "y-vector reached the noise floor without a confirmable relation"
                )

        bound = _diag_bound(H, n, f)
        if bound > max_norm:
            return PslqReport(None, bound, iteration, "excluded")

    raise PrecisionExhausted(f"no decision after {max_iter} iterations")


def _diag_bound(H: list[list[int]], n: int, f: int) -> int:
    # any relation has euclidean norm at least 1 / max_j |H_jj|
    biggest = max(abs(H[j][j]) for j in range(n - 1))
    if biggest == 0:
        return 0
    return (1 << f) // biggest
