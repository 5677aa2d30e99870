#! python3

"""Near-normal incidence: the notch survives down to one degree.

At exactly normal incidence the even/odd merge cannot be steered (the shift
does not break the right symmetry for a normally incident wave), but one
degree away it still works.  This script evaluates the tuned one-degree
geometry: the notch floor drops below 1e-5 while the flanking split peaks
top out just under 0.9 — the envelope never recovers full transmission this
close to normal.
"""

import math

import numpy as np

from pinstacks.scattering import PinStack, transmittance
from pinstacks.steering import feature_scan, q_factor, resonance_beta

THETA = math.radians(1.0)
ETA, XI = 0.705679367, 0.165868


def main():
    stack = PinStack.triplet(ETA, XI)
    needle = resonance_beta("odd", ETA, XI, (4.40, 4.50), theta_i=THETA)
    print(f"tuned geometry: eta = {ETA}, xi = {XI}")
    print(f"odd (dark) resonance at beta = {needle:.12f}\n")

    notch_scan = feature_scan(stack, needle, 5e-6, "notch", theta_i=THETA)
    notch = q_factor(notch_scan, "notch")
    print(f"notch: FWHM {notch.fwhm:.2e}, Q = {notch.q:.2e}, "
          f"floor T = {min(r.T for r in notch_scan):.2e}")

    betas = np.linspace(needle - 1e-5, needle + 1e-5, 4000)
    t = np.array([transmittance(stack, float(b),
                                alpha0=float(b) * math.sin(THETA))
                  for b in betas])
    left, right = betas < needle, betas > needle
    print("split peaks around the notch:")
    print(f"  left  flank: max T = {t[left].max():.5f} at "
          f"beta = {betas[left][np.argmax(t[left])]:.9f}")
    print(f"  right flank: max T = {t[right].max():.5f} at "
          f"beta = {betas[right][np.argmax(t[right])]:.9f}")
    print("\n(the flanks stay below 0.9 at one degree: this is the best")
    print(" near-normal contrast the triplet geometry reaches)")


if __name__ == "__main__":
    main()
