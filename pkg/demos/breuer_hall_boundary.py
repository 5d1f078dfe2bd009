"""Where the Breuer-Hall approximation stops being NPT.

The sufficient bound (m-1)(m-2)/(2(m^2-2)) guarantees NPT below it, but it is
not where the partial transpose turns positive. Scanning mu shows the flip at
(m-1)/(2m) instead.

Run: python3 demos/breuer_hall_boundary.py
"""

import numpy as np

from spacert import claims, maps, spa
from spacert.linalg import min_eig, partial_transpose

for m in (4, 6):
    bound = claims.breuer_hall_sufficient_bound(m)
    edge = claims.breuer_hall_npt_boundary(m)
    print(f"m={m}: sufficient bound {bound:.6f}, exact PPT boundary {edge:.6f}")
    for mu in np.linspace(0.05, 0.5, 10):
        res = spa.spa_with_channel(maps.breuer_hall(m), maps.werner_channel(m, mu))
        lam = min_eig(partial_transpose(res.approx.choi, m))
        marker = "<- bound" if abs(mu - bound) < 0.025 else ("<- edge" if abs(mu - edge) < 0.025 else "")
        print(f"  mu={mu:.3f}  p*={res.p_star:.6f}  PT min eig {lam:+.6f}  {marker}")
    print()

rec = claims.run_claim("breuer-hall-window")
print(f"window claim at m=4 (bound +- 0.01): passed={rec.passed}, measured={rec.measured}")
