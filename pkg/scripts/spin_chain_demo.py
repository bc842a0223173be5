#!/usr/bin/env python3
"""Photon-mediated spin chain of stub-lattice giants: Bessel-function check.

Giants coupled to neighbouring CLSs of the stub lattice realize a spin chain
with nearest-neighbour coupling kappa_1 and a weaker next-nearest coupling
kappa_2 = kappa_1/(4 + Delta).  With kappa_2 dropped, a single flipped spin
spreads as c_n(t) = i^n J_n(-2 kappa_1 t)."""

import numpy as np

from flatqed.interactions import (bessel_chain_amplitudes, kappa_couplings,
                                  spin_dynamics)


def main() -> None:
    g, delta_fb, Delta = 1e-3, 0.05, 4.0
    kappa1, kappa2 = kappa_couplings(g, delta_fb, Delta)
    print(f"kappa_1 = {kappa1:.3e}, kappa_2 = kappa_1/{4 + Delta:.0f} "
          f"= {kappa2:.3e}")

    N = 64
    H = np.zeros((N, N))
    for n in range(N):
        H[n, (n + 1) % N] += kappa1
        H[(n + 1) % N, n] += kappa1
    t_grid = np.linspace(0.0, 5.0 / kappa1, 6)
    trace = spin_dynamics(H, 0, t_grid)
    n_idx = np.arange(N)
    dist = np.minimum(n_idx, N - n_idx)
    print(f"{'t*kappa1':>9} {'max |c_n - i^n J_n(-2 kappa1 t)|':>34}")
    for i, t in enumerate(t_grid):
        exact = bessel_chain_amplitudes(dist, float(t), kappa1)
        err = float(np.max(np.abs(trace.amplitudes[i] - exact)))
        print(f"{t * kappa1:9.2f} {err:34.3e}")


if __name__ == "__main__":
    main()
