"""Distance between the minimized d_A and the best point of a dense (theta, phi, psi) grid.

The minima of D_A over bases sit on cusps (a commutator norm hits zero), so a
grid approaches them only linearly in its spacing. Each doubling of the grid
roughly halves the gap.
"""
import argparse

import numpy as np

from qcorr import measures, states


def grid_min(rho, n):
    T, P, S = measures.angle_grid(n)
    return float(measures.D_on_angles(rho, T, P, S).min())


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--states", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64, 128])
    args = parser.parse_args()
    rng = states.make_rng(args.seed)
    gaps = {n: [] for n in args.sizes}
    for _ in range(args.states):
        rho = states.random_mixed_state(2, 2, seed=rng)
        d = measures.minimize_d(rho).d_value
        for n in args.sizes:
            gaps[n].append(grid_min(rho, n) - d)
    print(f"{'n':>5s} {'median gap':>12s} {'max gap':>12s} {'share > 1e-4':>13s}")
    for n, g in gaps.items():
        g = np.array(g)
        print(f"{n:5d} {np.median(g):12.3e} {g.max():12.3e} {np.mean(g > 1e-4):13.2f}")


if __name__ == "__main__":
    main()
