"""Build the classic base-2^12, length-24 formula for log^2 2 from scratch.

Starting point is the identity

    log^2 2 = 2 Li_2[-1/4] - 4 Re Li_2[(1/sqrt2)   e^{3 pi i/4}]
                           - 4 Re Li_2[(1/sqrt2^3) e^{pi i/4}],

a consequence of Kummer's two-variable dilogarithm equation at x=1/2, y=i.
Each point on the right admits an exact binary series; aligning them onto a
common header and folding the rational weights produces a single canonical
integer-coefficient formula, digit-extraction ready.
"""
from fractions import Fraction

from bbpkit import LiPoint, combine, evaluate, generate, period, serialize_p
from bbpkit.reference import ConstMonomial, const_value

points = [
    (Fraction(2), LiPoint(2, 4, 1, 1, "re")),   # Li_2[-1/4]
    (Fraction(-4), LiPoint(2, 1, 3, 4, "re")),  # scale 1/sqrt2, angle 3pi/4
    (Fraction(-4), LiPoint(2, 3, 1, 4, "re")),  # scale 1/sqrt8, angle pi/4
]

print("the three constituent series:")
parts = []
for weight, pt in points:
    p = generate(pt, period(pt))
    parts.append((weight, p))
    print(f"  {str(weight):>3} * [{pt}]  ->  {serialize_p(p)}")

combined = combine(parts)
print()
print("combined, canonical:")
print(" ", serialize_p(combined))

got = evaluate(combined, 400)
want = const_value(ConstMonomial(log2_pow=2), 400)
diff = got - want
print()
print("value check: |combination - log^2 2| <", float(diff.magnitude_bound()))
