"""Driven-cavity experiment: sources, probes, time loop and validations.

A rectangular perfectly conducting cavity is driven by a prescribed,
exactly divergence-free current confined to a few cells off the side
walls; a hysteretic cylinder (optionally rotating) sits at the center.
This module assembles the pieces from :mod:`ferrocav.grid` and
:mod:`ferrocav.medium` into the leapfrog time loop, records probe
traces and integrity diagnostics, and provides three self-contained
validation modes: an empty-cavity resonance scan, a static
linear-dielectric check against the classical cylinder solution, and a
pure-arithmetic consistency report of the derived run quantities.

Time alignment of recorded rows: a row written after step n carries
``t = n*dt`` with the E-type quantities (Ex, Ey, Ez, Pz) at that time
and the H-type quantities (Hx, Hy, Hz, Bx, By, Bz, Mx, My) at the
half-step ``t - dt/2``, as the staggered update produces them.  The
pairs that form loci (Pz against Ez, Mx against Hx) are therefore each
time-consistent.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .constants import CONSTANTS, PhysicalConstants
from .grid import (FieldArrays, GridSpec, apply_pec, div_B, div_D,
                   field_energy, save_snapshot)
from .medium import MaterialMap, MediumState, StepRates, update_medium
from .traces import Trace
from ._kernels import BACKEND, KERNELS

__all__ = [
    "CAVITY_TRACE_COLUMNS", "DIAGNOSTIC_COLUMNS", "SourceSpec", "Source",
    "build_source", "Probe", "RunConfig", "RunResult", "Simulation",
    "NumericalAbort", "run", "resonance_scan", "static_dielectric_check",
    "consistency_report",
]

CAVITY_TRACE_COLUMNS = ("t", "Ex", "Ey", "Ez", "Hx", "Hy", "Hz",
                        "Bx", "By", "Bz", "Pz", "Mx", "My")
DIAGNOSTIC_COLUMNS = ("t", "energy", "max_divB", "max_divD")


class NumericalAbort(RuntimeError):
    """The instability detector tripped; a snapshot was written."""


# ---------------------------------------------------------------------------
# source construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SourceSpec:
    """Divergence-free harmonic drive confined near the side walls.

    Parameters
    ----------
    frequency : float
        Drive frequency f [Hz].
    amplitude : float, optional
        Peak current density [A/m^2].  Exactly one of ``amplitude`` and
        ``ez_target`` must be given.
    ez_target : float, optional
        Desired quasistatic vertical-field plateau [V/m]; the amplitude
        is derived from the discrete calibration (see
        :class:`Source`).
    ramp_cycles : float
        Smooth-start length in drive periods (C^1 smoothstep envelope).
    wall_layers : int
        Number of cells off each side wall carrying current.
    profile : str
        ``"vertical"`` (drives a uniform vertical E plateau),
        ``"solenoid"`` (drives a uniform vertical B plateau), or
        ``"both"``.
    bz_fraction : float
        For ``profile="both"``: ratio c*|Bz| / |Ez| of the two plateau
        amplitudes.
    """

    frequency: float
    amplitude: float | None = None
    ez_target: float | None = None
    ramp_cycles: float = 2.0
    wall_layers: int = 2
    profile: str = "vertical"
    bz_fraction: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.frequency) and self.frequency > 0.0):
            raise ValueError(f"frequency must be positive, "
                             f"got {self.frequency!r}")
        if (self.amplitude is None) == (self.ez_target is None):
            raise ValueError("exactly one of amplitude and ez_target "
                             "must be set")
        for name in ("amplitude", "ez_target"):
            v = getattr(self, name)
            if v is not None and not (np.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be positive, got {v!r}")
        if self.ramp_cycles < 0.0:
            raise ValueError(f"ramp_cycles must be >= 0, "
                             f"got {self.ramp_cycles!r}")
        if not isinstance(self.wall_layers, int) or self.wall_layers < 1:
            raise ValueError(f"wall_layers must be a positive integer, "
                             f"got {self.wall_layers!r}")
        if self.profile not in ("vertical", "solenoid", "both"):
            raise ValueError(f"profile must be 'vertical', 'solenoid' or "
                             f"'both', got {self.profile!r}")
        if self.bz_fraction <= 0.0:
            raise ValueError(f"bz_fraction must be positive, "
                             f"got {self.bz_fraction!r}")


def _wall_profile(n: int, layers: int, half_sites: bool) -> np.ndarray:
    """C^1 smoothstep from 0 at the walls to 1 past ``layers`` cells."""
    pos = (np.arange(n) + 0.5) if half_sites else np.arange(n + 1.0)
    d = np.minimum(pos, n - pos) / layers
    s = np.clip(d, 0.0, 1.0)
    return s * s * (3.0 - 2.0 * s)


class Source:
    """Precomputed current pattern and its quasistatic calibration.

    The current is ``J(t) = a(t) * Jhat`` with ``Jhat`` the discrete
    curl of a static potential on the H sites (so its discrete
    divergence is exactly zero at every instant) normalized to unit
    peak, and ``a(t) = amplitude * env(t) * sin(2 pi f t)`` with a C^1
    smoothstep envelope over ``ramp_cycles`` periods.

    The vertical profile derives from a node potential
    ``phi(x, y) = s(x) s(y)`` that rises from the side walls to a flat
    top: its current reproduces, quasistatically, ``Ez(t) = mu0 *
    da/dt * phi / jmax`` exactly on the lattice, giving the plateau
    calibration ``ez_gain`` [V/m per A/m^2].  The solenoid profile
    places the same plateau potential on the vertical-face sites,
    giving ``Hz(t) = a(t) * phi / jmax`` and ``hz_gain``.
    """

    def __init__(self, spec: SourceSpec, grid: GridSpec,
                 consts: PhysicalConstants = CONSTANTS):
        self.spec = spec
        self.grid = grid
        self.consts = consts
        nx, ny = grid.nx, grid.ny
        om = 2.0 * math.pi * spec.frequency

        jx = np.zeros(grid.shape_of("ex"))
        jy = np.zeros(grid.shape_of("ey"))
        jz = np.zeros(grid.shape_of("ez"))
        hbuf = FieldArrays.zeros(grid)
        c_vert = 0.0
        c_sol = 0.0
        if spec.profile in ("vertical", "both"):
            c_vert = 1.0
            sx = _wall_profile(nx, spec.wall_layers, half_sites=False)
            sy = _wall_profile(ny, spec.wall_layers, half_sites=False)
            phi = sx[:, None] * sy[None, :]
            hbuf.hx[:] = (-(phi[:, 1:] - phi[:, :-1])
                          / grid.dy)[:, :, None]
            hbuf.hy[:] = ((phi[1:, :] - phi[:-1, :])
                          / grid.dx)[:, :, None]
        if spec.profile in ("solenoid", "both"):
            # amplitude chosen so c|Bz|/|Ez| = bz_fraction when combined
            c_sol = (spec.bz_fraction * om / consts.c
                     if spec.profile == "both" else 1.0)
            shx = _wall_profile(nx, spec.wall_layers, half_sites=True)
            shy = _wall_profile(ny, spec.wall_layers, half_sites=True)
            hbuf.hz[:] = c_sol * (shx[:, None] * shy[None, :])[:, :, None]
        KERNELS["curl_h"](hbuf.hx, hbuf.hy, hbuf.hz,
                          1.0 / grid.dx, 1.0 / grid.dy, 1.0 / grid.dz,
                          jx, jy, jz)
        jmax = max(np.max(np.abs(jx)), np.max(np.abs(jy)),
                   np.max(np.abs(jz)))
        if jmax == 0.0:
            raise ValueError("source pattern is identically zero; "
                             "check wall_layers against the grid size")
        self.jhat_x = jx / jmax
        self.jhat_y = jy / jmax
        self.jhat_z = jz / jmax
        self.ez_gain = consts.mu0 * om * c_vert / jmax
        self.hz_gain = c_sol / jmax
        if spec.amplitude is not None:
            self.amplitude = spec.amplitude
        else:
            if self.ez_gain == 0.0:
                raise ValueError("ez_target requires a profile with a "
                                 "vertical component")
            self.amplitude = spec.ez_target / self.ez_gain

    def envelope(self, t: float) -> float:
        """C^1 smoothstep ramp, 0 at t=0, 1 after ramp_cycles periods."""
        if self.spec.ramp_cycles == 0.0:
            return 1.0
        u = t * self.spec.frequency / self.spec.ramp_cycles
        if u <= 0.0:
            return 0.0
        if u >= 1.0:
            return 1.0
        return u * u * (3.0 - 2.0 * u)

    def coefficient(self, t: float) -> float:
        """Scalar multiplier of the unit pattern at time t [A/m^2]."""
        return self.amplitude * self.envelope(t) \
            * math.sin(2.0 * math.pi * self.spec.frequency * t)

    def ez_estimate(self) -> float:
        """Quasistatic vertical-field plateau amplitude [V/m]."""
        return self.ez_gain * self.amplitude

    def hz_estimate(self) -> float:
        """Quasistatic vertical-H plateau amplitude [A/m]."""
        return self.hz_gain * self.amplitude

    def validate_against(self, mmap: MaterialMap) -> None:
        """Reject overlap between the current and the material support.

        The drive must never touch cells the material weight (or its
        bounding box, for the vertical component, where the branched
        solve replaces the plain update) reaches.
        """
        i0, i1, j0, j1 = mmap.bbox
        jz2d = np.abs(self.jhat_z).max(axis=2) > 0.0
        if jz2d[i0:i1, j0:j1].any():
            raise ValueError(
                "vertical source current overlaps the material region; "
                "increase the margin between wall_layers and the cylinder")
        for jhat, lat in ((self.jhat_x, "ex"), (self.jhat_y, "ey")):
            mask = np.abs(jhat).max(axis=2) > 0.0
            if (mask & (mmap.weights(lat) > 0.0)).any():
                raise ValueError(
                    "transverse source current overlaps the material "
                    "support; increase the margin between wall_layers and "
                    "the cylinder")


def build_source(t: float, spec: SourceSpec, grid: GridSpec,
                 material: MaterialMap | None = None,
                 consts: PhysicalConstants = CONSTANTS) -> tuple:
    """Edge-centered current-density arrays at time ``t`` [A/m^2].

    Convenience wrapper constructing the static pattern and evaluating
    it at one instant; the time loop keeps the pattern cached instead.
    The discrete divergence of the result is exactly zero (it is a
    discrete curl), and overlap with the material support is rejected.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    src = Source(spec, grid, consts)
    if material is not None:
        src.validate_against(material)
    a = src.coefficient(t)
    return a * src.jhat_x, a * src.jhat_y, a * src.jhat_z


# ---------------------------------------------------------------------------
# probes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Probe:
    """A recording point, snapped to the nearest vertical-edge site."""

    name: str
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not self.name or not all(c.isalnum() or c in "_-"
                                    for c in self.name):
            raise ValueError(f"probe name must be alphanumeric/_/-, "
                             f"got {self.name!r}")

    def snap(self, grid: GridSpec) -> tuple:
        """Indices (i, j, k) of the nearest interior Ez site."""
        if not (0.0 < self.x < grid.lx and 0.0 < self.y < grid.ly
                and 0.0 < self.z < grid.lz):
            raise ValueError(f"probe {self.name!r} at ({self.x}, {self.y}, "
                             f"{self.z}) lies outside the cavity")
        i = int(np.clip(round(self.x / grid.dx), 1, grid.nx - 1))
        j = int(np.clip(round(self.y / grid.dy), 1, grid.ny - 1))
        k = int(np.clip(round(self.z / grid.dz - 0.5), 0, grid.nz - 1))
        return i, j, k


def _probe_row(fields: FieldArrays, medium: MediumState | None,
               ijk: tuple, mu0: float) -> tuple:
    """Companion components interpolated to one Ez site."""
    i, j, k = ijk
    ex = 0.25 * (fields.ex[i - 1, j, k] + fields.ex[i, j, k]
                 + fields.ex[i - 1, j, k + 1] + fields.ex[i, j, k + 1])
    ey = 0.25 * (fields.ey[i, j - 1, k] + fields.ey[i, j, k]
                 + fields.ey[i, j - 1, k + 1] + fields.ey[i, j, k + 1])
    ez = fields.ez[i, j, k]
    hx = 0.5 * (fields.hx[i, j - 1, k] + fields.hx[i, j, k])
    hy = 0.5 * (fields.hy[i - 1, j, k] + fields.hy[i, j, k])
    hz = 0.125 * (fields.hz[i - 1, j - 1, k] + fields.hz[i, j - 1, k]
                  + fields.hz[i - 1, j, k] + fields.hz[i, j, k]
                  + fields.hz[i - 1, j - 1, k + 1] + fields.hz[i, j - 1, k + 1]
                  + fields.hz[i - 1, j, k + 1] + fields.hz[i, j, k + 1])
    if medium is not None:
        mx = 0.5 * (medium.mx[i, j - 1, k] + medium.mx[i, j, k])
        my = 0.5 * (medium.my[i - 1, j, k] + medium.my[i, j, k])
        pz = medium.pz[i, j, k]
    else:
        mx = my = pz = 0.0
    bx = mu0 * (hx - mx)
    by = mu0 * (hy - my)
    bz = mu0 * hz
    return ex, ey, ez, hx, hy, hz, bx, by, bz, pz, mx, my


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    """Everything one deterministic cavity run needs.

    ``duration`` is in seconds (the configuration layer converts drive
    periods or revolutions).  ``resolved`` optionally carries the
    dotted-key form of this configuration for the metadata sidecar.
    """

    grid: GridSpec
    material: MaterialMap | None = None
    source: SourceSpec | None = None
    scheme: str = "semi_implicit"
    duration: float = 0.0
    trace_stride: int = 1
    diag_stride: int = 16
    probes: tuple = ()
    output_dir: str | None = None
    instability_factor: float = 1.0e9
    resolved: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.scheme not in ("semi_implicit", "lagged_explicit"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not (np.isfinite(self.duration) and self.duration >= 0.0):
            raise ValueError(f"duration must be >= 0, got {self.duration!r}")
        for name in ("trace_stride", "diag_stride"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, "
                                 f"got {v!r}")
        if self.instability_factor <= 1.0:
            raise ValueError(f"instability_factor must exceed 1, "
                             f"got {self.instability_factor!r}")
        names = [p.name for p in self.probes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate probe names in {names}")
        for p in self.probes:
            p.snap(self.grid)  # raises if outside the cavity
        if self.material is not None and self.material.grid is not self.grid:
            if self.material.grid != self.grid:
                raise ValueError("material map was built on a different "
                                 "grid")


@dataclass
class RunResult:
    """Traces, diagnostics and derived quantities from one run."""

    traces: dict
    diagnostics: Trace
    report: dict
    config: RunConfig
    written: tuple = ()


# ---------------------------------------------------------------------------
# the simulation proper
# ---------------------------------------------------------------------------

class Simulation:
    """Mutable state of one cavity run plus the composed time step."""

    def __init__(self, config: RunConfig,
                 consts: PhysicalConstants = CONSTANTS):
        self.config = config
        self.consts = consts
        g = config.grid
        self.grid = g
        self.fields = FieldArrays.zeros(g)
        self.t = 0.0
        self.n = 0
        self.mmap = config.material
        hysteretic = (self.mmap is not None
                      and self.mmap.model == "hysteretic")
        self.medium = MediumState.zeros(g) if hysteretic else None
        self._c = tuple(np.empty(g.shape_of(c)) for c in ("hx", "hy", "hz"))
        self._g = tuple(np.empty(g.shape_of(c)) for c in ("ex", "ey", "ez"))
        self._e_prev = None
        if self.mmap is not None:
            self._sgx = self.mmap.sigma_weights("ex")
            self._sgy = self.mmap.sigma_weights("ey")
            self._sgz = self.mmap.sigma_weights("ez")
            self._iex = self.mmap.inv_eps("ex")
            self._iey = self.mmap.inv_eps("ey")
            self._iez = self.mmap.inv_eps("ez")
        else:
            inv = 1.0 / consts.eps0
            self._sgx = np.zeros((g.nx, g.ny + 1))
            self._sgy = np.zeros((g.nx + 1, g.ny))
            self._sgz = np.zeros((g.nx + 1, g.ny + 1))
            self._iex = np.full((g.nx, g.ny + 1), inv)
            self._iey = np.full((g.nx + 1, g.ny), inv)
            self._iez = np.full((g.nx + 1, g.ny + 1), inv)
        self._bbox = self.mmap.bbox if hysteretic else (0, 0, 0, 0)
        if config.source is not None:
            self.source = Source(config.source, g, consts)
            if self.mmap is not None:
                self.source.validate_against(self.mmap)
        else:
            self.source = None
        zshape = g.shape_of
        self._jzero = (np.zeros(zshape("ex")), np.zeros(zshape("ey")),
                       np.zeros(zshape("ez")))
        self._vac_nodes = self._vacuum_node_mask()
        self._drive_scale = None  # set on first step / seed

    # -- integrity helpers ---------------------------------------------
    def _vacuum_node_mask(self) -> np.ndarray:
        """Interior nodes whose charge stencil sees no material at all."""
        g = self.grid
        mask = np.zeros((g.nx + 1, g.ny + 1), dtype=bool)
        mask[1:-1, 1:-1] = True
        if self.mmap is None:
            return mask
        wex = self.mmap.weights("ex") > 0.0
        wey = self.mmap.weights("ey") > 0.0
        wez = self.mmap.weights("ez") > 0.0
        touches = wez.copy()
        touches[1:-1, :] |= wex[1:, :] | wex[:-1, :]
        touches[:, 1:-1] |= wey[:, 1:] | wey[:, :-1]
        return mask & ~touches

    def _update_drive_scale(self) -> None:
        """Reference field scale for the instability detector [V/m]."""
        eta0 = self.consts.eta0
        scale = 0.0
        if self.source is not None:
            scale = max(scale, abs(self.source.ez_estimate()),
                        eta0 * abs(self.source.hz_estimate()))
        f = self.fields
        init = max(np.max(np.abs(f.ex)), np.max(np.abs(f.ey)),
                   np.max(np.abs(f.ez)),
                   eta0 * max(np.max(np.abs(f.hx)), np.max(np.abs(f.hy)),
                              np.max(np.abs(f.hz))))
        self._drive_scale = max(scale, init, 1e-300)

    def _check_stability(self) -> None:
        f = self.fields
        eta0 = self.consts.eta0
        peak = max(np.max(np.abs(f.ex)), np.max(np.abs(f.ey)),
                   np.max(np.abs(f.ez)),
                   eta0 * max(np.max(np.abs(f.hx)), np.max(np.abs(f.hy)),
                              np.max(np.abs(f.hz))))
        limit = self.config.instability_factor * self._drive_scale
        if not np.isfinite(peak) or peak > limit:
            path = self._abort_snapshot()
            raise NumericalAbort(
                f"field magnitude {peak:.3e} V/m exceeded "
                f"{self.config.instability_factor:.1e} x drive scale "
                f"{self._drive_scale:.3e} V/m at step {self.n} "
                f"(t = {self.t:.6e} s); state saved to {path}")

    def _abort_snapshot(self) -> str:
        arrays = dict(self.fields.components())
        if self.medium is not None:
            arrays.update(pz=self.medium.pz, mx=self.medium.mx,
                          my=self.medium.my)
        out = self.config.output_dir or "."
        os.makedirs(out, exist_ok=True)
        path = os.path.join(out, "abort_snapshot.bin")
        save_snapshot(path, arrays, meta={"t": self.t, "step": self.n,
                                          "version": __version__})
        return path

    # -- the leapfrog cycle ----------------------------------------------
    def step(self, keep_e_prev: bool = False) -> StepRates | None:
        """Advance all state by one time step.

        One cycle: curl E at time n; Faraday half-update of H; curl of
        the half-updated H; the medium block (branched vertical-field
        solve, polarization and magnetization updates, magnetization
        increments of Hx/Hy); the plain E updates with conductivity and
        external current everywhere else; the wall condition.
        ``keep_e_prev`` snapshots E before its update so the staggered
        energy diagnostic can pair the two levels around H.
        """
        if self._drive_scale is None:
            self._update_drive_scale()
        f = self.fields
        g = self.grid
        dt = g.dt
        idx, idy, idz = 1.0 / g.dx, 1.0 / g.dy, 1.0 / g.dz
        K = KERNELS
        K["curl_e"](f.ex, f.ey, f.ez, idx, idy, idz, *self._c)
        K["update_h"](f.hx, f.hy, f.hz, *self._c, dt / self.consts.mu0)
        K["curl_h"](f.hx, f.hy, f.hz, idx, idy, idz, *self._g)
        if keep_e_prev:
            self._e_prev = FieldArrays(f.ex.copy(), f.ey.copy(),
                                       f.ez.copy(), f.hx, f.hy, f.hz)
        rates = None
        if self.medium is not None:
            rates = StepRates(cx=self._c[0], cy=self._c[1], gz=self._g[2])
            update_medium(self.medium, f, rates, dt, self.mmap,
                          self.config.scheme)
        if self.source is not None:
            jcoef = self.source.coefficient(self.t + 0.5 * dt)
            jx, jy, jz = (self.source.jhat_x, self.source.jhat_y,
                          self.source.jhat_z)
        else:
            jcoef = 0.0
            jx, jy, jz = self._jzero
        K["update_e_transverse"](f.ex, f.ey, self._g[0], self._g[1],
                                 jx, jy, jcoef, self._sgx, self._sgy,
                                 self._iex, self._iey, dt)
        K["update_ez_outside"](f.ez, self._g[2], jz, jcoef, self._sgz,
                               self._iez, dt, *self._bbox)
        apply_pec(f)
        self.n += 1
        self.t = self.n * dt
        if self.n % 8 == 0 or self.medium is not None:
            self._check_stability()
        return rates

    # -- diagnostics -----------------------------------------------------
    def diagnostics_row(self) -> tuple:
        """(t, energy, max |div B|, max |div D| over vacuum nodes)."""
        f = self.fields
        g = self.grid
        c = self.consts
        energy = field_energy(f, g, e_prev=self._e_prev, consts=c)
        if self.medium is not None:
            bx = c.mu0 * (f.hx - self.medium.mx)
            by = c.mu0 * (f.hy - self.medium.my)
        else:
            bx = c.mu0 * f.hx
            by = c.mu0 * f.hy
        bz = c.mu0 * f.hz
        max_divb = float(np.max(np.abs(div_B(bx, by, bz, g))))
        dz_arr = c.eps0 * f.ez
        if self.medium is not None:
            dz_arr = dz_arr + self.medium.pz
        dd = div_D(c.eps0 * f.ex, c.eps0 * f.ey, dz_arr, g)
        masked = dd[self._vac_nodes, :]
        max_divd = float(np.max(np.abs(masked))) if masked.size else 0.0
        self._e_prev = None  # one-shot: must be re-captured by the stepper
        return self.t, energy, max_divb, max_divd


# ---------------------------------------------------------------------------
# the run driver
# ---------------------------------------------------------------------------

def run(config: RunConfig,
        consts: PhysicalConstants = CONSTANTS) -> RunResult:
    """Execute one deterministic cavity run and write its outputs.

    Writes, when ``config.output_dir`` is set: one CSV per probe
    (columns ``t,Ex,...,My``), ``diagnostics.csv``
    (``t,energy,max_divB,max_divD``) and a ``resolved.cfg`` metadata
    sidecar holding the full configuration plus the derived quantities
    of :func:`consistency_report` as comments.  Identical
    configurations produce bit-identical outputs on one platform.
    """
    sim = Simulation(config, consts)
    g = config.grid
    n_steps = max(0, int(round(config.duration / g.dt)))
    ijk = {p.name: p.snap(g) for p in config.probes}
    rows = {p.name: [] for p in config.probes}
    diag_rows = [sim.diagnostics_row()]
    for n in range(1, n_steps + 1):
        keep = (n % config.diag_stride == 0) or (n == n_steps)
        sim.step(keep_e_prev=keep)
        if n % config.trace_stride == 0 or n == n_steps:
            for p in config.probes:
                vals = _probe_row(sim.fields, sim.medium, ijk[p.name],
                                  consts.mu0)
                rows[p.name].append((sim.t,) + vals)
        if keep:
            diag_rows.append(sim.diagnostics_row())
    traces = {
        name: Trace(CAVITY_TRACE_COLUMNS,
                    np.array(rs, dtype=float).reshape(-1, 13).T)
        for name, rs in rows.items()
    }
    diagnostics = Trace(DIAGNOSTIC_COLUMNS,
                        np.array(diag_rows, dtype=float).reshape(-1, 4).T)
    report = consistency_report(config, consts)
    written = []
    if config.output_dir:
        os.makedirs(config.output_dir, exist_ok=True)
        for name, tr in traces.items():
            path = os.path.join(config.output_dir, f"{name}.csv")
            tr.to_csv(path)
            written.append(path)
        dpath = os.path.join(config.output_dir, "diagnostics.csv")
        diagnostics.to_csv(dpath)
        written.append(dpath)
        from .config import write_sidecar  # local import: config uses us
        spath = os.path.join(config.output_dir, "resolved.cfg")
        write_sidecar(spath, config, report)
        written.append(spath)
    return RunResult(traces=traces, diagnostics=diagnostics, report=report,
                     config=config, written=tuple(written))


# ---------------------------------------------------------------------------
# validation modes
# ---------------------------------------------------------------------------

def resonance_scan(grid: GridSpec, steps: int = 32768, seed: int = 1234,
                   consts: PhysicalConstants = CONSTANTS,
                   rel_threshold: float = 1.0e-4) -> dict:
    """Empty-cavity eigenfrequency scan from broadband noise.

    Seeds the vertical field with fixed-seed noise, runs the free
    cavity for ``steps`` steps, and peak-picks the periodogram of an
    off-symmetry probe.  Returns a dict with the sample frequencies,
    the power spectral density, the sorted peak frequencies [Hz] and
    the analytic lowest-mode frequency of the box for reference.

    Raises
    ------
    ValueError
        If ``steps`` is too short to resolve the lowest mode.
    """
    from scipy.signal import periodogram

    cfg = RunConfig(grid=grid, duration=0.0)
    sim = Simulation(cfg, consts)
    rng = np.random.default_rng(seed)
    sim.fields.ez[:] = rng.standard_normal(sim.fields.ez.shape)
    apply_pec(sim.fields)
    f_low = lowest_mode_frequency(grid, consts)
    df = 1.0 / (steps * grid.dt)
    if df > 0.05 * f_low:
        raise ValueError(
            f"{steps} steps give {df:.3e} Hz resolution, too coarse for "
            f"the lowest mode at {f_low:.3e} Hz")
    i, j, k = max(1, grid.nx // 3), max(1, grid.ny // 5), grid.nz // 2
    samples = np.empty(steps)
    for n in range(steps):
        sim.step()
        samples[n] = sim.fields.ez[i, j, k]
    freqs, psd = periodogram(samples, fs=1.0 / grid.dt, window="hann")
    floor = rel_threshold * psd.max()
    peaks = []
    for m in range(2, len(psd) - 1):
        if psd[m] > floor and psd[m] >= psd[m - 1] and psd[m] > psd[m + 1]:
            peaks.append(freqs[m])
    return {"freqs": freqs, "psd": psd, "peaks": np.array(peaks),
            "lowest_mode_analytic": f_low}


def lowest_mode_frequency(grid: GridSpec,
                          consts: PhysicalConstants = CONSTANTS) -> float:
    """Analytic lowest resonance of the rectangular cavity [Hz].

    Minimizes ``(c/2) sqrt((m/lx)^2 + (n/ly)^2 + (p/lz)^2)`` over the
    admissible index triples (at least two nonzero indices).
    """
    best = None
    for m in range(0, 3):
        for n in range(0, 3):
            for p in range(0, 3):
                if (m > 0) + (n > 0) + (p > 0) < 2:
                    continue
                f = 0.5 * consts.c * math.sqrt((m / grid.lx) ** 2
                                               + (n / grid.ly) ** 2
                                               + (p / grid.lz) ** 2)
                if best is None or f < best:
                    best = f
    return best


def static_dielectric_check(eps_r: float, grid: GridSpec,
                            material: MaterialMap | None = None,
                            extent_over_radius: float = 16.0,
                            consts: PhysicalConstants = CONSTANTS) -> float:
    """Uniform transverse field applied to the linear cylinder.

    Solves the static potential problem ``div(eps grad V) = 0`` with a
    uniform applied field, using the same in-plane spacing and the same
    smooth material weights as the dynamic lattice, and returns the
    mean interior field magnitude over the applied field.  The
    classical unbounded answer is ``2/(eps_r + 1)``; to compare against
    it the outer boundary is placed ``extent_over_radius`` radii out
    (the finite-boundary image correction scales as the inverse square
    of that distance), while the spacing stays that of ``grid`` -- the
    point of the check is the coarse-lattice fidelity of the material
    map, not the box.

    The sparse system is solved directly, so no iteration tolerance is
    involved; a singular factorization raises.
    """
    import scipy.sparse as sp
    import scipy.sparse.linalg as spla

    if eps_r < 1.0:
        raise ValueError(f"eps_r must be >= 1, got {eps_r!r}")
    if material is not None:
        radius = material.radius
        tw = material.transition_width
    else:
        radius = 1.36
        tw = min(grid.dx, grid.dy)
    dx, dy = grid.dx, grid.dy
    half_cells = int(math.ceil(extent_over_radius * radius / dx))
    nx = ny = 2 * half_cells
    xc = 0.5 * nx * dx
    yc = 0.5 * ny * dy
    xn = dx * np.arange(nx + 1) - xc
    yn = dy * np.arange(ny + 1) - yc
    xh = dx * (np.arange(nx) + 0.5) - xc
    yh = dy * (np.arange(ny) + 0.5) - yc

    from .medium import bump_weight
    w_x = bump_weight(np.hypot(xh[:, None], yn[None, :]), radius, tw)
    w_y = bump_weight(np.hypot(xn[:, None], yh[None, :]), radius, tw)
    eps_x = 1.0 + w_x * (eps_r - 1.0)          # on x-edges (nx, ny+1)
    eps_y = 1.0 + w_y * (eps_r - 1.0)          # on y-edges (nx+1, ny)

    npts = (nx + 1) * (ny + 1)

    def node(i, j):
        return i * (ny + 1) + j

    rows, cols, vals = [], [], []
    b = np.zeros(npts)
    e0 = 1.0
    cx = dy / dx
    cy = dx / dy
    for i in range(nx + 1):
        for j in range(ny + 1):
            k = node(i, j)
            if i in (0, nx) or j in (0, ny):
                rows.append(k)
                cols.append(k)
                vals.append(1.0)
                b[k] = -e0 * xn[i]
            else:
                ce = cx * eps_x[i, j]
                cw = cx * eps_x[i - 1, j]
                cn = cy * eps_y[i, j]
                cs = cy * eps_y[i, j - 1]
                rows += [k] * 5
                cols += [k, node(i + 1, j), node(i - 1, j),
                         node(i, j + 1), node(i, j - 1)]
                vals += [-(ce + cw + cn + cs), ce, cw, cn, cs]
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(npts, npts))
    v = spla.spsolve(mat, b).reshape(nx + 1, ny + 1)
    if not np.all(np.isfinite(v)):
        raise RuntimeError("static dielectric solve did not produce a "
                           "finite potential (singular system?)")
    e_x = -(v[1:, :] - v[:-1, :]) / dx
    core = w_x >= 1.0 - 1e-12
    if not core.any():
        raise ValueError("material core contains no x-edge sites at this "
                         "resolution")
    return float(np.mean(e_x[core]) / e0)


def consistency_report(config: RunConfig,
                       consts: PhysicalConstants = CONSTANTS) -> dict:
    """Derived run quantities (pure arithmetic, no simulation).

    Includes the rotation rate in rad/s and rpm, drive cycles per
    revolution, the time step and its stability bound, steps per drive
    period and per revolution, the analytic lowest cavity mode, the
    drive-to-mode frequency ratio, and the quasistatic drive plateau
    estimates.
    """
    g = config.grid
    rep = {
        "dt_s": g.dt,
        "dt_max_s": g.dt_max,
        "dx_m": g.dx, "dy_m": g.dy, "dz_m": g.dz,
        "lowest_mode_hz": lowest_mode_frequency(g, consts),
        "backend": BACKEND,
        "version": __version__,
    }
    if config.material is not None:
        om = config.material.omega
        rep["omega_rad_s"] = om
        rep["omega_rpm"] = om * 60.0 / (2.0 * math.pi)
        r_out = config.material.radius + config.material.transition_width
        rep["rim_speed_sq"] = (om * r_out / consts.c) ** 2
        if om != 0.0:
            rep["steps_per_revolution"] = 2.0 * math.pi / (abs(om) * g.dt)
    if config.source is not None:
        src = Source(config.source, g, consts)
        f = config.source.frequency
        rep["drive_frequency_hz"] = f
        rep["steps_per_drive_period"] = 1.0 / (f * g.dt)
        rep["drive_over_lowest_mode"] = f / rep["lowest_mode_hz"]
        rep["source_amplitude_a_m2"] = src.amplitude
        rep["ez_plateau_v_m"] = src.ez_estimate()
        rep["hz_plateau_a_m"] = src.hz_estimate()
        if (config.material is not None and config.material.omega != 0.0):
            rep["cycles_per_revolution"] = \
                f * 2.0 * math.pi / abs(config.material.omega)
    return rep
