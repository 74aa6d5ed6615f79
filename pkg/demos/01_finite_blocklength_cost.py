"""
How much rate does a short block cost?

At blocklength n the normal approximation trims C(gamma) by
sqrt(V/n) * Q^-1(eps) * log2(e).  This script prints that loss for a
5 dB link at a few blocklengths and reliability targets, and shows the
1/sqrt(n) law: quadrupling n halves the loss.
"""

from rsma_fbl import db_to_linear, dispersion_penalty, fbl_rate, shannon_capacity

gamma = float(db_to_linear(5.0))
print(f"SINR 5 dB: capacity {shannon_capacity(gamma):.4f} bit/use\n")
print(f"{'n':>6} {'eps':>8} {'rate':>8} {'loss':>8}")
for eps in (1e-3, 1e-6, 1e-9):
    for n in (100, 400, 1600):
        r = fbl_rate(n, gamma, eps)
        print(f"{n:>6} {eps:>8.0e} {r:>8.4f} {dispersion_penalty(n, gamma, eps):>8.4f}")
    print()

d100, d400 = dispersion_penalty(100, gamma, 1e-6), dispersion_penalty(400, gamma, 1e-6)
print(f"loss at n=100 / loss at n=400 = {d100 / d400:.12f}")
