"""Replacing white noise by a tailored separable noise state.

For a decomposable witness whose standard approximation is still entangled,
mix in product states orthogonal to the most negative eigenvector until the
result is PPT (and hence separable in 2x2 and 2x3).

Run: python3 demos/tailored_noise.py
"""

import numpy as np

from spacert import spa, witnesses
from spacert.linalg import min_eig, partial_transpose

rng = np.random.default_rng(42)
for dims in [(2, 2), (2, 3)]:
    print(f"dims {dims}")
    for _ in range(5):
        w = witnesses.random_decomposable_witness(dims, rng, entangled_spa=True)
        std = spa.spa_standard(w)
        out = spa.nonstandard_spa(w, rng=rng)
        print(f"  lambda={out.lambda_min:.4f}  standard PT min {min_eig(partial_transpose(std.approx.op, dims)):+.4f}"
              f"  q*={out.q_star:.4f}  r*={out.r_star:.4f}  result {out.verdict.status}"
              f"  identity residual {out.identity_residual:.1e}")
