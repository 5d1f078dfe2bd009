"""Gaussian transposition: the least added noise that makes it physical, and why it is then EB.

Run: python3 demos/gaussian_transposition.py
"""

import numpy as np

from spacert import gaussian

for n in range(1, 6):
    suite = gaussian.transposition_suite(n)
    print(f"n={n}: p*={suite.p_star}, EB with A=B=1: {suite.eb_certified}, "
          f"CP margin at p*-0.01: {suite.cp_margin_below:+.15f}")

# the CP condition matrix is p 1 + 2iJ, so its spectrum is p +- 2 per mode
n = 2
for p in (1.5, 2.0, 2.5):
    cond = gaussian.cp_condition_matrix(gaussian.transposition_matrix(n), p * np.eye(2 * n), n)
    print(f"p={p}: spectrum {np.round(np.linalg.eigvalsh(cond), 12)}")

# at threshold a two-mode squeezed input loses its entanglement
r = 1.0
c, s = np.cosh(2 * r), np.sinh(2 * r)
tms = np.array([[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])
x = np.eye(4)
x[2:, 2:] = gaussian.transposition_matrix(1)
y = np.zeros((4, 4))
y[2:, 2:] = 2.0 * np.eye(2)
out = gaussian.apply_gaussian(gaussian.GaussianChannelCM(2, x, y), gaussian.CovState(2, tms, None))
print(f"output valid: {out.is_valid}")
