"""Built-in physics health checks with pass/fail reporting.

Each check exercises one exactly-known property of the scheme -- the
closed-form branch solution, rate independence of the hysteresis law,
the analytic cavity spectrum, the discrete divergence and energy
invariants, and the classical dielectric-cylinder response -- and
returns a :class:`CheckResult` with the measured value, its target and
the verdict.  ``run_all`` executes the whole battery; the command-line
``validate`` subcommand prints its table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cavity import (RunConfig, Simulation, resonance_scan,
                     static_dielectric_check)
from .constants import CONSTANTS, PhysicalConstants
from .grid import GridSpec, apply_pec
from .point_model import (ChannelSet, DEFAULT_FERROELECTRIC, RampDrive,
                          SineDrive, branch_solution, run_drive)

__all__ = ["CheckResult", "check_point_closed_form",
           "check_rate_independence", "check_resonance",
           "check_divergence_energy", "check_dielectric", "run_all",
           "format_results"]

#: the reference cavity discretization used by the battery
_GRID = dict(nx=20, ny=20, nz=8, lx=5.45, ly=5.45, lz=2.18)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one health check."""

    name: str
    passed: bool
    value: float        # measured quantity (see detail for meaning)
    threshold: float    # pass bound on ``value``
    detail: str


# ---------------------------------------------------------------------------
# point-model checks
# ---------------------------------------------------------------------------

def check_point_closed_form(tol: float = 1.0e-6,
                            consts: PhysicalConstants = CONSTANTS
                            ) -> CheckResult:
    """RK4 integration against the closed-form branch solution.

    Ramps the drive field monotonically from the virgin state, where a
    single (+, +) branch is exact, and compares the final polarization.
    """
    params = DEFAULT_FERROELECTRIC
    e1 = 2.0e6          # V/m
    duration = 1.0e-3   # s (rate independent; value is arbitrary)
    trace = run_drive(RampDrive(slope=e1 / duration), duration,
                      dt=duration / 4000.0,
                      channels=ChannelSet.single(params), consts=consts)
    p_num = float(trace.trace["P"][-1])
    p_ref = branch_solution(e1, 0.0, 0.0, +1, +1, params, consts)
    err = abs(p_num - p_ref) / abs(p_ref)
    return CheckResult("point closed form", err <= tol, err, tol,
                       f"relative |P_rk4 - P_branch| at E = {e1:g} V/m")


def check_rate_independence(tol: float = 1.0e-6,
                            consts: PhysicalConstants = CONSTANTS
                            ) -> CheckResult:
    """The same loop traversed 100x faster must give the same P(E)."""
    channels = ChannelSet.single(DEFAULT_FERROELECTRIC)
    traces = []
    for f in (50.0, 5000.0):
        tr = run_drive(SineDrive(2.0e6, f), duration=3.0 / f,
                       channels=channels, consts=consts)
        traces.append(tr.trace["P"])
    scale = float(np.max(np.abs(traces[0])))
    err = float(np.max(np.abs(traces[0] - traces[1]))) / scale
    return CheckResult("rate independence", err <= tol, err, tol,
                       "relative max |P_50Hz - P_5kHz| at matching phase")


# ---------------------------------------------------------------------------
# cavity checks
# ---------------------------------------------------------------------------

def check_resonance(steps: int = 32768, tol: float = 0.02,
                    consts: PhysicalConstants = CONSTANTS) -> CheckResult:
    """Lowest noise-scan peak against the analytic lowest mode."""
    grid = GridSpec(**_GRID)
    scan = resonance_scan(grid, steps=steps, consts=consts)
    f_ref = scan["lowest_mode_analytic"]
    peaks = scan["peaks"]
    if peaks.size == 0:
        return CheckResult("resonance", False, float("nan"), tol,
                           "no spectral peaks found")
    f_meas = float(peaks[0])
    err = abs(f_meas - f_ref) / f_ref
    return CheckResult("resonance", err <= tol, err, tol,
                       f"lowest peak {f_meas:.4e} Hz vs analytic "
                       f"{f_ref:.4e} Hz")


def check_divergence_energy(steps: int = 100_000, seed: int = 7,
                            sample_stride: int = 1000,
                            div_tol_factor: float = 1.0e-12,
                            energy_tol: float = 1.0e-9,
                            consts: PhysicalConstants = CONSTANTS
                            ) -> tuple:
    """Source-free noise run: div B and the staggered energy invariant.

    Returns two results: max |div B| against
    ``div_tol_factor * max|B| / dx`` and the relative drift of the
    product-form energy between paired samples.
    """
    grid = GridSpec(**_GRID)
    sim = Simulation(RunConfig(grid=grid), consts)
    rng = np.random.default_rng(seed)
    sim.fields.ez[:] = rng.standard_normal(sim.fields.ez.shape)
    apply_pec(sim.fields)
    energies, divbs, max_b = [], [], 0.0
    for n in range(1, steps + 1):
        keep = (n % sample_stride == 0) or n == steps or n == 1
        sim.step(keep_e_prev=keep)
        if keep:
            _, energy, max_divb, _ = sim.diagnostics_row()
            energies.append(energy)
            divbs.append(max_divb)
            f = sim.fields
            max_b = max(max_b, consts.mu0 * max(
                np.max(np.abs(f.hx)), np.max(np.abs(f.hy)),
                np.max(np.abs(f.hz))))
    div_limit = div_tol_factor * max_b / min(grid.dx, grid.dy, grid.dz)
    div_value = max(divbs)
    energies = np.asarray(energies)
    drift = float(np.max(np.abs(energies - energies[0])) / energies[0])
    return (
        CheckResult("divergence", div_value <= div_limit, div_value,
                    div_limit,
                    f"max |div B| over {steps} source-free steps "
                    f"(limit = 1e-12 max|B|/dx)"),
        CheckResult("energy drift", drift <= energy_tol, drift, energy_tol,
                    f"relative drift of the paired-form energy over "
                    f"{steps} steps"),
    )


def check_dielectric(eps_r: float = 4.0, tol: float = 0.05,
                     consts: PhysicalConstants = CONSTANTS) -> CheckResult:
    """Static linear cylinder against the unbounded 2/(eps_r+1) law."""
    grid = GridSpec(**_GRID)
    ratio = static_dielectric_check(eps_r, grid, consts=consts)
    target = 2.0 / (eps_r + 1.0)
    err = abs(ratio - target) / target
    return CheckResult("dielectric", err <= tol, err, tol,
                       f"interior/applied = {ratio:.4f} vs "
                       f"{target:.4f} at eps_r = {eps_r:g}")


# ---------------------------------------------------------------------------
# battery
# ---------------------------------------------------------------------------

def run_all(fast: bool = False,
            consts: PhysicalConstants = CONSTANTS) -> list:
    """Run every check; ``fast`` shortens the long field runs."""
    results = [
        check_point_closed_form(consts=consts),
        check_rate_independence(consts=consts),
        check_resonance(steps=16384 if fast else 32768, consts=consts),
    ]
    results.extend(check_divergence_energy(
        steps=4096 if fast else 100_000,
        sample_stride=512 if fast else 1000, consts=consts))
    results.append(check_dielectric(consts=consts))
    return results


def format_results(results) -> str:
    """Fixed-width pass/fail table for terminal output."""
    lines = []
    width = max(len(r.name) for r in results)
    for r in results:
        verdict = "PASS" if r.passed else "FAIL"
        lines.append(f"{verdict}  {r.name:<{width}}  "
                     f"value = {r.value:.6e}  limit = {r.threshold:.6e}  "
                     f"({r.detail})")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
