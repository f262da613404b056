"""Evaluate a binary BBP-type formula and pull hex digits from deep inside it.

The running example is the simplest nontrivial formula,

    P(1, 2^1, 1, [1]) = sum_{k>=0} 2^-k / (k+1) = 2 log 2,

evaluated to 50 certified decimal digits, followed by hexadecimal digit
extraction at bit positions nowhere near the binary point -- without
computing any of the digits in between.
"""
from bbpkit import ExtractRequest, digit_window, evaluate, extract, parse_p

formula = parse_p("P(1, 2^1, 1, [1])")
print("formula      :", formula)

value = evaluate(formula, 200)
print("value        :", value.decimal(50))
print("error bound  :", value.err_ulp, "ulps at 2^-%d" % value.frac_bits)

print()
print("hex digits of the fractional part, extracted position by position:")
for pos in (0, 100, 10_000, 100_000):
    result = extract(ExtractRequest(formula, pos, 12))
    print(f"  bits {pos:>7} onward: {result.digits}   (confidence {result.confidence_bits} bits)")

# the first window is easy to confirm against a plain high-precision evaluation
check = digit_window(formula, 100, 12, 300)
print()
print("evaluator window at bit 100 agrees:", check == extract(ExtractRequest(formula, 100, 12)).digits)
