"""Partially entangled photon pairs straight out of the source.

The source emits pairs entangled in two degrees of freedom at once:
polarization (cos t_p |VV> + e^{i phi} sin t_p |HH>) and transverse
momentum (cos t_m |LL> + sin t_m |RR>).  This script looks at a single
polarization pair: how much entanglement does it carry as a function of
the pump angle, and what do the four lab angles give?
"""

import math

import numpy as np

from spdistill import (
    EXPERIMENTAL_ANGLES,
    entropy_of_entanglement,
    concurrence,
    pair_state,
    theta_grid,
)


def main():
    print("single pair  cos t |00> + sin t |11>")
    print(f"{'theta':>7} {'tan^2':>10} {'entropy (ebits)':>16} {'concurrence':>12}")
    for theta in EXPERIMENTAL_ANGLES:
        st = pair_state(theta, 1)
        alice = (st.register.labels[0],)
        e = float(entropy_of_entanglement(st, alice))
        c = float(concurrence(st.to_density()))
        t = math.radians(theta)
        print(f"{theta:7.1f} {math.tan(t) ** 2:10.4f} {e:16.6f} {c:12.6f}")

    thetas = theta_grid()
    entropies = []
    concs = []
    for theta in thetas:
        st = pair_state(theta, 1)
        entropies.append(float(entropy_of_entanglement(st, (st.register.labels[0],))))
        concs.append(float(concurrence(st.to_density())))

    peak = thetas[int(np.argmax(entropies))]
    print(f"\nentropy peaks at theta = {peak:.1f} degrees (maximally entangled pair)")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed, skipping plot")
        return

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(thetas, entropies, label="entropy of entanglement")
    ax.plot(thetas, concs, "--", label="concurrence (= sin 2t)")
    for theta in EXPERIMENTAL_ANGLES:
        ax.axvline(theta, color="gray", alpha=0.3, lw=0.8)
    ax.set_xlabel("source angle theta (degrees)")
    ax.set_ylabel("entanglement")
    ax.legend()
    fig.tight_layout()
    fig.savefig("demos/01_source_states.png", dpi=120)
    print("wrote demos/01_source_states.png")


if __name__ == "__main__":
    main()
