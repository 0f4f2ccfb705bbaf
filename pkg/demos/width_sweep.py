"""Memory is not a monotone function of how structured the bath is.

A peaked spectral density tuned to the system frequency is swept from
very narrow to very broad at fixed coupling.  Very narrow means slow
bath relaxation, but also weak effective damping; very broad approaches
the Ohmic (memoryless) limit.  The divisibility quantifier therefore
peaks at an intermediate width instead of decreasing monotonically.
"""
from __future__ import annotations

import numpy as np

from nonmarkov import ModelParams, PeakedSD, divisibility_quantifier


def main() -> None:
    p = ModelParams(omega0=1.0, beta=1.0)
    widths = np.geomspace(0.01, 5.0, 13)

    print("Peaked bath on resonance: Ω = ω₀, D = 0.75 ω₀²")
    print(f"{'Γ/ω₀':>9} {'n1_qq':>9}  ")
    qq = []
    for gam in widths:
        sd = PeakedSD(coupling=0.75, width=float(gam), resonance=1.0)
        matrix, _ = divisibility_quantifier(p, sd)
        qq.append(matrix[0, 0])
        bar = "#" * int(round(40 * qq[-1]))
        print(f"{gam:9.3g} {qq[-1]:9.5f}  {bar}")

    best = int(np.argmax(qq))
    print()
    print(f"maximum n1_qq = {qq[best]:.5f} at Γ = {widths[best]:.3g} ω₀ "
          f"(an interior point of the sweep)")


if __name__ == "__main__":
    main()
