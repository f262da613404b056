"""Rediscover the degree-2 base-2^12 zero relations by integer-relation search.

The 24 component series

    v_j = sum_{k>=0} 2^-12k / (24k + j)^2,    j = 1..24

satisfy nontrivial integer relations: certain combinations telescope to
exactly zero.  Knowing these is essential when hunting BBP formulas with an
integer-relation program, since an unconstrained search happily returns a
zero relation instead of the constant you wanted.

PSLQ below finds the shortest relation first; dropping a unit-pivot
coordinate and searching the section yields a second, and the two generate
the full rank-2 relation lattice, which contains both classically printed
vectors at small integer coordinates.
"""
from bbpkit import PFormula, canonicalize, default_catalog, evaluate, pslq
from bbpkit.catalog import bits_for_digits

DIGITS = 120
bits = bits_for_digits(DIGITS)

basis = [
    evaluate(PFormula(2, 12, 24, tuple(int(i == j) for i in range(24))), bits)
    for j in range(24)
]

report = pslq(basis, max_norm=1 << 16, prec_bits=bits)
r1 = report.relation.coeffs
print(f"first relation  ({report.iterations} iterations):")
print(" ", r1)
print("  residual bound:", float(report.relation.residual.magnitude_bound()))

pivot = next(i for i, c in enumerate(r1) if abs(c) == 1)
section = [basis[j] for j in range(24) if j != pivot]
report2 = pslq(section, max_norm=1 << 16, prec_bits=bits)
c2 = report2.relation.coeffs
r2 = tuple(list(c2[:pivot]) + [0] + list(c2[pivot:]))
print()
print(f"second relation ({report2.iterations} iterations, coordinate {pivot} pinned):")
print(" ", r2)

print()
print("printed zero-relation vectors as integer combinations a*r1 + b*r2:")
catalog = default_catalog()
for rid in ("zero-deg2-2e12-a-table", "zero-deg2-2e12-b-table"):
    vec = canonicalize(catalog.get(rid).rhs.terms[0][1]).coeffs
    # solve the 2x2 system from the first two independent coordinates
    import itertools

    for i, j in itertools.combinations(range(24), 2):
        det = r1[i] * r2[j] - r1[j] * r2[i]
        if det:
            a = (vec[i] * r2[j] - vec[j] * r2[i]) // det
            b = (r1[i] * vec[j] - r1[j] * vec[i]) // det
            break
    exact = all(a * r1[k] + b * r2[k] == vec[k] for k in range(24))
    print(f"  {rid}: a={a}, b={b}, exact={exact}")
