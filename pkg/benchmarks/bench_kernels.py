"""Timing comparison of the numba and numpy kernel families.

Every hot field-update kernel exists in two semantically identical
implementations (see ``ferrocav._kernels``): explicit loops compiled
with numba, and vectorized numpy.  This script times both families on
one grid and prints a per-kernel table plus the composed time step of
the active backend.

Run from the repository root::

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --nx 40 --ny 40 --nz 16

The numba column includes a warm-up call, so JIT compilation is not
timed.  Set ``FERROCAV_DISABLE_NUMBA=1`` to check what the package
falls back to without numba (the table then has one column).
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from ferrocav._kernels import BACKEND, NUMBA_KERNELS, NUMPY_KERNELS
from ferrocav.cavity import Probe, RunConfig, Simulation, SourceSpec
from ferrocav.constants import CONSTANTS
from ferrocav.grid import GridSpec
from ferrocav.medium import MaterialMap
from ferrocav.point_model import DEFAULT_FERROELECTRIC

CELL_M = 0.2725          # node spacing reproducing the reference lattice [m]


# ---------------------------------------------------------------------------
# workload construction
# ---------------------------------------------------------------------------

def build_workloads(grid: GridSpec, seed: int = 42) -> dict:
    """Argument tuples for every kernel, random fields of sane scale."""
    rng = np.random.default_rng(seed)

    def arr(component):
        return rng.standard_normal(grid.shape_of(component))

    ex, ey, ez = arr("ex"), arr("ey"), arr("ez")
    hx, hy, hz = arr("hx"), arr("hy"), arr("hz")
    cx, cy, cz = (np.zeros(grid.shape_of(c)) for c in ("hx", "hy", "hz"))
    gx, gy, gz = (np.zeros(grid.shape_of(c)) for c in ("ex", "ey", "ez"))
    jhx, jhy, jhz = arr("ex"), arr("ey"), arr("ez")
    # conductivities at their physical scale: the explicit sigma term
    # is only stable for sigma << eps0/dt, and the in-place kernels are
    # re-applied thousands of times while timing
    sigma = 2.6e-4   # S/m
    sgx = sigma * np.abs(rng.standard_normal((grid.nx, grid.ny + 1)))
    sgy = sigma * np.abs(rng.standard_normal((grid.nx + 1, grid.ny)))
    sgz = sigma * np.abs(rng.standard_normal((grid.nx + 1, grid.ny + 1)))
    inv = 1.0 / CONSTANTS.eps0
    iex = np.full((grid.nx, grid.ny + 1), inv)
    iey = np.full((grid.nx + 1, grid.ny), inv)
    iez = np.full((grid.nx + 1, grid.ny + 1), inv)
    idx, idy, idz = 1.0 / grid.dx, 1.0 / grid.dy, 1.0 / grid.dz
    dt = grid.dt

    # central box standing in for the material bounding box
    i0, i1 = grid.nx // 4, grid.nx - grid.nx // 4 + 1
    j0, j1 = grid.ny // 4, grid.ny - grid.ny // 4 + 1
    zshape = grid.shape_of("ez")
    pz = rng.standard_normal(zshape) * 1e-1
    adv_pw = rng.standard_normal(zshape) * 1e3
    karr = rng.standard_normal(zshape) * 1e3
    psi_w = rng.standard_normal(zshape) * 1e-7   # ~eps0*alpha scale
    edot_prev = rng.standard_normal(zshape) * 1e3
    edot = np.zeros(zshape)
    s_e = np.zeros(zshape)
    p = DEFAULT_FERROELECTRIC

    return {
        "curl_e": (ex, ey, ez, idx, idy, idz, cx, cy, cz),
        "curl_h": (hx, hy, hz, idx, idy, idz, gx, gy, gz),
        "update_h": (hx, hy, hz, cx, cy, cz, dt / CONSTANTS.mu0),
        "update_e_transverse": (ex, ey, gx, gy, jhx, jhy, 0.7,
                                sgx, sgy, iex, iey, dt),
        "update_ez_outside": (ez, gz, jhz, 0.7, sgz, iez, dt,
                              i0, i1, j0, j1),
        "solve_ez_medium": (ez, pz, gz, adv_pw, karr, psi_w, sgz, dt,
                            CONSTANTS.eps0, p.kappa, p.theta,
                            i0, i1, j0, j1, edot, s_e),
        "lagged_ez_medium": (ez, pz, gz, adv_pw, karr, psi_w, sgz,
                             edot_prev, dt, CONSTANTS.eps0,
                             p.kappa, p.theta, i0, i1, j0, j1, edot, s_e),
    }


# ---------------------------------------------------------------------------
# timing
# ---------------------------------------------------------------------------

def best_of(fn, args, number: int, repeats: int) -> float:
    """Best per-call time [s] over ``repeats`` batches of ``number``."""
    fn(*args)  # warm-up (JIT compilation for the numba family)
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def bench_step(grid: GridSpec, number: int, repeats: int) -> float:
    """Best full-step time [s] of the active backend on a loaded cavity."""
    material = MaterialMap(grid=grid, radius=0.25 * grid.lx,
                           center=(0.5 * grid.lx, 0.5 * grid.ly),
                           transition_width=grid.dx, sigma=2.6e-4,
                           omega=0.0, model="hysteretic",
                           params=DEFAULT_FERROELECTRIC)
    config = RunConfig(grid=grid, material=material,
                       source=SourceSpec(frequency=2.5e6, ez_target=2.0e6),
                       probes=(Probe("center", 0.45 * grid.lx,
                                     0.45 * grid.ly, 0.5 * grid.lz),))
    sim = Simulation(config)
    return best_of(lambda: sim.step(), (), number, repeats)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Benchmark the numba kernels against the numpy "
                    "fallbacks.")
    parser.add_argument("--nx", type=int, default=20, help="cells along x")
    parser.add_argument("--ny", type=int, default=20, help="cells along y")
    parser.add_argument("--nz", type=int, default=8, help="cells along z")
    parser.add_argument("--number", type=int, default=200,
                        help="calls per timing batch (default 200)")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing batches, best is kept (default 5)")
    args = parser.parse_args(argv)

    grid = GridSpec(nx=args.nx, ny=args.ny, nz=args.nz,
                    lx=CELL_M * args.nx, ly=CELL_M * args.ny,
                    lz=CELL_M * args.nz)
    print(f"grid {args.nx} x {args.ny} x {args.nz}, active backend: "
          f"{BACKEND}")

    families = [("numpy", NUMPY_KERNELS)]
    if NUMBA_KERNELS is not None:
        families.append(("numba", NUMBA_KERNELS))

    header = f"{'kernel':<22}" + "".join(
        f"{name + ' [us]':>14}" for name, _ in families)
    if len(families) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for kernel in NUMPY_KERNELS:
        times = []
        for name, family in families:
            work = build_workloads(grid)  # fresh state per family
            times.append(best_of(family[kernel], work[kernel],
                                 args.number, args.repeats))
        row = f"{kernel:<22}" + "".join(f"{t * 1e6:>14.2f}" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)

    step = bench_step(grid, max(1, args.number // 4), args.repeats)
    print(f"\ncomposed step ({BACKEND}): {step * 1e6:.1f} us "
          f"({1.0 / step:.0f} steps/s)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
