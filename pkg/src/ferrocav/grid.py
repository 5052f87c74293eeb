"""Staggered-lattice geometry, field storage and discrete operators.

The cavity is a rectangular box with perfectly conducting walls,
discretized on the usual interleaved lattice: each E component lives on
the edges parallel to it, each H component on the faces normal to it
(see :mod:`ferrocav._kernels` for the exact shapes).  This module owns

* :class:`GridSpec` - geometry, spacing and the stability-limited time
  step,
* :class:`FieldArrays` - the six field arrays plus allocation helpers,
* the discrete ``curl``/``div`` operators, wall condition and
  site-transfer averages used by the time stepper and its diagnostics,
* binary snapshot dump/load for restarts and post-mortems.

All operators delegate their inner loops to :mod:`ferrocav._kernels`
where a compiled version exists; everything here is backend-agnostic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .constants import CONSTANTS, PhysicalConstants
from ._kernels import KERNELS

__all__ = [
    "GridSpec", "FieldArrays", "curl_E", "curl_H", "div_B", "div_D",
    "apply_pec", "avg_to_Ez_sites", "avg_Ez_to_Hx_sites",
    "avg_Ez_to_Hy_sites", "field_energy", "save_snapshot", "load_snapshot",
]

_SNAPSHOT_MAGIC = b"FCAVSNAP"


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Cavity geometry and time step.

    Parameters
    ----------
    nx, ny, nz : int
        Cell counts along each axis (>= 2).
    lx, ly, lz : float
        Cavity edge lengths [m].
    cfl_safety : float, optional
        Fraction of the stability-limited step actually taken,
        in (0, 1].

    Notes
    -----
    The explicit leapfrog update is stable for
    ``dt <= 1 / (c * sqrt(dx^-2 + dy^-2 + dz^-2))``; ``dt`` is that
    bound times ``cfl_safety``.
    """

    nx: int
    ny: int
    nz: int
    lx: float
    ly: float
    lz: float
    cfl_safety: float = 0.5
    constants: PhysicalConstants = field(default=CONSTANTS, repr=False)

    def __post_init__(self):
        for name in ("nx", "ny", "nz"):
            n = getattr(self, name)
            if not isinstance(n, (int, np.integer)) or n < 2:
                raise ValueError(f"{name} must be an integer >= 2, got {n!r}")
        for name in ("lx", "ly", "lz"):
            v = float(getattr(self, name))
            if not np.isfinite(v) or v <= 0.0:
                raise ValueError(f"{name} must be positive, got {v!r}")
        if not 0.0 < self.cfl_safety <= 1.0:
            raise ValueError(
                f"cfl_safety must lie in (0, 1], got {self.cfl_safety!r}")

    @property
    def dx(self) -> float:
        return self.lx / self.nx

    @property
    def dy(self) -> float:
        return self.ly / self.ny

    @property
    def dz(self) -> float:
        return self.lz / self.nz

    @property
    def cell_volume(self) -> float:
        return self.dx * self.dy * self.dz

    @property
    def dt_max(self) -> float:
        """Stability bound on the time step [s]."""
        inv = self.dx ** -2 + self.dy ** -2 + self.dz ** -2
        return 1.0 / (self.constants.c * np.sqrt(inv))

    @property
    def dt(self) -> float:
        """Time step actually used [s]."""
        return self.cfl_safety * self.dt_max

    # coordinates of the two site families along each axis -------------
    def nodes_x(self) -> np.ndarray:
        return self.dx * np.arange(self.nx + 1)

    def nodes_y(self) -> np.ndarray:
        return self.dy * np.arange(self.ny + 1)

    def nodes_z(self) -> np.ndarray:
        return self.dz * np.arange(self.nz + 1)

    def halves_x(self) -> np.ndarray:
        return self.dx * (np.arange(self.nx) + 0.5)

    def halves_y(self) -> np.ndarray:
        return self.dy * (np.arange(self.ny) + 0.5)

    def halves_z(self) -> np.ndarray:
        return self.dz * (np.arange(self.nz) + 0.5)

    def shape_of(self, component: str) -> tuple:
        """Array shape of one field component."""
        nx, ny, nz = self.nx, self.ny, self.nz
        shapes = {
            "ex": (nx, ny + 1, nz + 1),
            "ey": (nx + 1, ny, nz + 1),
            "ez": (nx + 1, ny + 1, nz),
            "hx": (nx + 1, ny, nz),
            "hy": (nx, ny + 1, nz),
            "hz": (nx, ny, nz + 1),
        }
        try:
            return shapes[component]
        except KeyError:
            raise ValueError(f"unknown field component {component!r}") \
                from None


# ---------------------------------------------------------------------------
# field storage
# ---------------------------------------------------------------------------

@dataclass
class FieldArrays:
    """The six field arrays on a given grid."""

    ex: np.ndarray
    ey: np.ndarray
    ez: np.ndarray
    hx: np.ndarray
    hy: np.ndarray
    hz: np.ndarray

    @classmethod
    def zeros(cls, grid: GridSpec) -> "FieldArrays":
        return cls(*(np.zeros(grid.shape_of(c))
                     for c in ("ex", "ey", "ez", "hx", "hy", "hz")))

    def copy(self) -> "FieldArrays":
        return FieldArrays(self.ex.copy(), self.ey.copy(), self.ez.copy(),
                           self.hx.copy(), self.hy.copy(), self.hz.copy())

    def components(self) -> dict:
        return {"ex": self.ex, "ey": self.ey, "ez": self.ez,
                "hx": self.hx, "hy": self.hy, "hz": self.hz}


# ---------------------------------------------------------------------------
# discrete operators
# ---------------------------------------------------------------------------

def curl_E(fields: FieldArrays, grid: GridSpec,
           out: tuple | None = None) -> tuple:
    """Discrete curl of E, evaluated at the H sites.

    Returns ``(cx, cy, cz)`` with the shapes of ``hx``, ``hy``, ``hz``.
    """
    if out is None:
        out = tuple(np.empty(grid.shape_of(c)) for c in ("hx", "hy", "hz"))
    KERNELS["curl_e"](fields.ex, fields.ey, fields.ez,
                      1.0 / grid.dx, 1.0 / grid.dy, 1.0 / grid.dz, *out)
    return out


def curl_H(fields: FieldArrays, grid: GridSpec,
           out: tuple | None = None) -> tuple:
    """Discrete curl of H, evaluated at the E sites.

    Wall entries (where the corresponding E component is tangential to
    a wall) are left zero; the wall condition overwrites them anyway.
    Returns ``(gx, gy, gz)`` with the shapes of ``ex``, ``ey``, ``ez``.
    """
    if out is None:
        out = tuple(np.empty(grid.shape_of(c)) for c in ("ex", "ey", "ez"))
    KERNELS["curl_h"](fields.hx, fields.hy, fields.hz,
                      1.0 / grid.dx, 1.0 / grid.dy, 1.0 / grid.dz, *out)
    return out


def div_B(bx: np.ndarray, by: np.ndarray, bz: np.ndarray,
          grid: GridSpec) -> np.ndarray:
    """Discrete divergence of a face-centered vector field.

    The natural output sites are the cell centers; the result has shape
    ``(nx, ny, nz)``.  For fields advanced by the leapfrog curl update
    this stays at its initial value to rounding, which makes it a sharp
    integrity diagnostic.
    """
    return (bx[1:, :, :] - bx[:-1, :, :]) / grid.dx \
        + (by[:, 1:, :] - by[:, :-1, :]) / grid.dy \
        + (bz[:, :, 1:] - bz[:, :, :-1]) / grid.dz


def div_D(dx_arr: np.ndarray, dy_arr: np.ndarray, dz_arr: np.ndarray,
          grid: GridSpec) -> np.ndarray:
    """Discrete divergence of an edge-centered vector field.

    The natural output sites are the lattice nodes; entries on the
    cavity walls (where the stencil is incomplete) are zero.  The result
    has shape ``(nx+1, ny+1, nz+1)``.
    """
    out = np.zeros((grid.nx + 1, grid.ny + 1, grid.nz + 1))
    out[1:-1, 1:-1, 1:-1] = (
        (dx_arr[1:, 1:-1, 1:-1] - dx_arr[:-1, 1:-1, 1:-1]) / grid.dx
        + (dy_arr[1:-1, 1:, 1:-1] - dy_arr[1:-1, :-1, 1:-1]) / grid.dy
        + (dz_arr[1:-1, 1:-1, 1:] - dz_arr[1:-1, 1:-1, :-1]) / grid.dz)
    return out


def apply_pec(fields: FieldArrays) -> None:
    """Zero the tangential E components on all six walls (in place).

    Applying it twice is a no-op, and it commutes with itself across
    components.
    """
    fields.ex[:, 0, :] = 0.0
    fields.ex[:, -1, :] = 0.0
    fields.ex[:, :, 0] = 0.0
    fields.ex[:, :, -1] = 0.0
    fields.ey[0, :, :] = 0.0
    fields.ey[-1, :, :] = 0.0
    fields.ey[:, :, 0] = 0.0
    fields.ey[:, :, -1] = 0.0
    fields.ez[0, :, :] = 0.0
    fields.ez[-1, :, :] = 0.0
    fields.ez[:, 0, :] = 0.0
    fields.ez[:, -1, :] = 0.0


# ---------------------------------------------------------------------------
# site-transfer averages
# ---------------------------------------------------------------------------

def avg_to_Ez_sites(arr: np.ndarray, grid: GridSpec,
                    from_lattice: str) -> np.ndarray:
    """Average an x- or y-face quantity onto the vertical-edge sites.

    ``from_lattice`` is ``"hx"`` (shape of ``hx``; averaged along y) or
    ``"hy"`` (shape of ``hy``; averaged along x).  Interior sites take
    the mean of the two straddling faces; the outermost rows use the
    matching two-point linear extrapolation, so the transfer reproduces
    fields with linear spatial variation exactly everywhere.
    """
    out = np.empty((grid.nx + 1, grid.ny + 1, grid.nz))
    if from_lattice == "hx":
        if arr.shape != grid.shape_of("hx"):
            raise ValueError(
                f"expected shape {grid.shape_of('hx')}, got {arr.shape}")
        out[:, 1:-1, :] = 0.5 * (arr[:, :-1, :] + arr[:, 1:, :])
        out[:, 0, :] = 1.5 * arr[:, 0, :] - 0.5 * arr[:, 1, :]
        out[:, -1, :] = 1.5 * arr[:, -1, :] - 0.5 * arr[:, -2, :]
    elif from_lattice == "hy":
        if arr.shape != grid.shape_of("hy"):
            raise ValueError(
                f"expected shape {grid.shape_of('hy')}, got {arr.shape}")
        out[1:-1, :, :] = 0.5 * (arr[:-1, :, :] + arr[1:, :, :])
        out[0, :, :] = 1.5 * arr[0, :, :] - 0.5 * arr[1, :, :]
        out[-1, :, :] = 1.5 * arr[-1, :, :] - 0.5 * arr[-2, :, :]
    else:
        raise ValueError(f"from_lattice must be 'hx' or 'hy', "
                         f"got {from_lattice!r}")
    return out


def avg_Ez_to_Hx_sites(arr: np.ndarray) -> np.ndarray:
    """Average a vertical-edge quantity onto the x-face sites (along y)."""
    return 0.5 * (arr[:, :-1, :] + arr[:, 1:, :])


def avg_Ez_to_Hy_sites(arr: np.ndarray) -> np.ndarray:
    """Average a vertical-edge quantity onto the y-face sites (along x)."""
    return 0.5 * (arr[:-1, :, :] + arr[1:, :, :])


# ---------------------------------------------------------------------------
# energy
# ---------------------------------------------------------------------------

def field_energy(fields: FieldArrays, grid: GridSpec,
                 e_prev: FieldArrays | None = None,
                 consts: PhysicalConstants = CONSTANTS) -> float:
    """Total field energy [J] on the staggered time levels.

    With ``e_prev`` (the E arrays from one step earlier) the electric
    part uses the product form ``(eps0/2) <E_prev, E_now>``, which pairs
    the two E levels bracketing the current H level.  That combination
    is an exact invariant of the source-free leapfrog update in vacuum,
    so its drift measures accumulated rounding rather than the harmless
    O(dt^2) oscillation the plain quadratic form shows.  Without
    ``e_prev`` the plain quadratic form is used.
    """
    if e_prev is None:
        we = sum(float(np.sum(c * c)) for c in
                 (fields.ex, fields.ey, fields.ez))
    else:
        we = float(np.sum(fields.ex * e_prev.ex)
                   + np.sum(fields.ey * e_prev.ey)
                   + np.sum(fields.ez * e_prev.ez))
    wh = sum(float(np.sum(c * c)) for c in (fields.hx, fields.hy, fields.hz))
    return 0.5 * grid.cell_volume * (consts.eps0 * we + consts.mu0 * wh)


# ---------------------------------------------------------------------------
# snapshots
# ---------------------------------------------------------------------------

def save_snapshot(path, arrays: dict, meta: dict | None = None) -> None:
    """Write named float64 arrays to a binary snapshot file.

    Layout: an 8-byte magic, a newline-terminated JSON manifest
    (array names, shapes and metadata), then the raw little-endian
    float64 payloads concatenated in manifest order.
    """
    manifest = {
        "meta": dict(meta or {}),
        "arrays": [{"name": str(k), "shape": list(np.shape(v))}
                   for k, v in arrays.items()],
    }
    header = json.dumps(manifest, sort_keys=True).encode("ascii")
    with open(path, "wb") as fh:
        fh.write(_SNAPSHOT_MAGIC)
        fh.write(header)
        fh.write(b"\n")
        for v in arrays.values():
            fh.write(np.ascontiguousarray(v, dtype="<f8").tobytes())


def load_snapshot(path) -> tuple:
    """Read a snapshot written by :func:`save_snapshot`.

    Returns ``(arrays, meta)`` where ``arrays`` maps names to float64
    arrays with their original shapes.
    """
    with open(path, "rb") as fh:
        magic = fh.read(len(_SNAPSHOT_MAGIC))
        if magic != _SNAPSHOT_MAGIC:
            raise ValueError(f"{path}: not a snapshot file")
        header = bytearray()
        while True:
            b = fh.read(1)
            if not b:
                raise ValueError(f"{path}: truncated snapshot header")
            if b == b"\n":
                break
            header.extend(b)
        manifest = json.loads(header.decode("ascii"))
        arrays = {}
        for entry in manifest["arrays"]:
            shape = tuple(entry["shape"])
            count = int(np.prod(shape)) if shape else 1
            buf = fh.read(8 * count)
            if len(buf) != 8 * count:
                raise ValueError(f"{path}: truncated snapshot payload")
            arrays[entry["name"]] = np.frombuffer(
                buf, dtype="<f8").reshape(shape).copy()
    return arrays, manifest.get("meta", {})
