"""Approximating three positive maps by mixing with the Werner channel instead of full depolarization.

Run: python3 demos/werner_channel_thresholds.py
"""

from spacert import maps, separability, spa

print("threshold p* by closed form and by bisection on the Choi spectrum, with the EB verdict at p*\n")
print(f"{'map':<14s}{'m':>3s}{'mu':>7s}{'closed form':>16s}{'bisection':>16s}   verdict")
cases = [("transposition", maps.transposition), ("reduction", lambda m: maps.reduction_minus(m, normalized=True)),
         ("breuer_hall", maps.breuer_hall)]
for name, build in cases:
    for m in ((3, 5) if name != "breuer_hall" else (4, 6)):
        for mu in (0.1, 0.3, 0.5):
            res = spa.spa_with_channel(build(m), maps.werner_channel(m, mu))
            cf = spa.closed_form_threshold(name, m=m, mu=mu)
            verdict = separability.eb_verdict(res.approx).status
            print(f"{name:<14s}{m:>3d}{mu:>7.2f}{cf:>16.12f}{res.p_star:>16.12f}   {verdict}")

print("\nthe transposition result is always the normalized symmetric projector, a separable Werner state;")
print("the reduction result lies in span{1, V, P+} and is PPT, so the OO-invariant class certifies it.")
