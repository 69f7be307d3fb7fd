"""How much entanglement the protocol extracts per block of n pairs.

Projecting n identical pairs onto a Hamming-weight subspace k yields a
maximally entangled state of log2 C(n,k) ebits with probability
C(n,k) cos^{2(n-k)} sin^{2k}.  Averaging over k gives the expected yield
of a finite block; as n grows it approaches the entropy of entanglement
of the input, n * h(sin^2 t), which is the asymptotic optimum.

The library caps block simulation at n = 6 (the joint state is a dense
4^n vector), so beyond that this script evaluates the closed-form sum
directly.
"""

import math

import numpy as np

from spdistill import (
    MAX_PAIRS,
    expected_yield_asymptotic,
    expected_yield_finite,
    theta_grid,
)


def yield_formula(theta_deg, n):
    # same binomial average the library uses, valid for any n
    t = math.radians(theta_deg)
    c2, s2 = math.cos(t) ** 2, math.sin(t) ** 2
    return sum(
        math.comb(n, k) * c2 ** (n - k) * s2 ** k * math.log2(math.comb(n, k))
        for k in range(n + 1)
    )


def main():
    thetas = np.asarray(theta_grid())
    print(f"{'n':>4} {'yield at 45 deg':>16} {'fraction of optimum':>20}")
    for n in (1, 2, 3, 5, 6, 10, 20, 50, 200):
        fin = yield_formula(45.0, n)
        if n <= MAX_PAIRS:
            assert abs(fin - expected_yield_finite(45.0, n)) < 1e-12
            assert abs(n * expected_yield_asymptotic(45.0, 1)
                       - expected_yield_asymptotic(45.0, n)) < 1e-12
        asym = n * expected_yield_asymptotic(45.0, 1)
        print(f"{n:4d} {fin:16.6f} {fin / asym:20.6f}")
    print("\nthe finite-block yield climbs toward the asymptotic limit as n grows")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed, skipping plot")
        return

    fig, ax = plt.subplots(figsize=(6.5, 4))
    for n in (2, 3, 6, 20):
        per_pair = [yield_formula(t, n) / n for t in thetas]
        ax.plot(thetas, per_pair, label=f"n = {n}")
    optimum = [expected_yield_asymptotic(t, 1) for t in thetas]
    ax.plot(thetas, optimum, "k--", label="asymptotic limit h(sin^2 t)")
    ax.set_xlabel("source angle theta (degrees)")
    ax.set_ylabel("expected ebits per input pair")
    ax.legend()
    fig.tight_layout()
    fig.savefig("demos/05_efficiency_curves.png", dpi=120)
    print("wrote demos/05_efficiency_curves.png")


if __name__ == "__main__":
    main()
