"""The Gauss map: its invariant measure, how fast small intervals spread, and pairs of orbits."""

from fractions import Fraction

from xiongsets.gauss import exactness_probe, gauss_measure, gauss_step, invariance_defect, scrambled_stats

x = Fraction(2, 5)
while x:
    a, x = gauss_step(x)
    print("digit", a, "-> next", x)

for a, b in [(0, Fraction(1, 2)), (Fraction(1, 3), Fraction(1, 2)), (Fraction(9, 10), 1)]:
    rep = invariance_defect(a, b, 10 ** 6)
    print(f"mu[{a}, {b}) = {rep.measure:.8f}; preimage sum misses {rep.defect:.2e} (tail {rep.tail:.2e})")

# forward images of a short interval fill [0, 1) in measure within a few steps
for lo, hi in [(Fraction(9, 10), Fraction(19, 20)), (Fraction(61, 100), Fraction(62, 100))]:
    tr = exactness_probe([(lo, hi)], 10)
    print(f"({lo}, {hi}):", " ".join(f"{m:.3f}" for m in tr.measures), "| pieces", tr.counts[-1])

print("mu of a radius-1/10 ball at 1/2:", float(gauss_measure(Fraction(2, 5), Fraction(3, 5))))

# random pairs come close and move far apart again
rep = scrambled_stats(seed=2024, pairs=20, horizon=5000, k=4)
d = rep.details
print(f"{d['fraction_max_ge']:.0%} of pairs reach distance >= 0.9, {d['fraction_min_le']:.0%} come within 1e-3")
print(f"joint box visits {rep.value:.4f} vs product of measures {rep.reference:.4f}")
