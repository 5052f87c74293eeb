"""Rotating hysteretic cylinder: material map and constitutive updates.

A rigid cylinder of hysteretic material (soft axis along z) spins at a
fixed rate ``omega`` about the vertical axis through ``center``.  Its
cross-section enters the field equations through a smooth radial weight
(:func:`bump_weight`) that modulates the constitutive constants: the
weight multiplies the hysteretic source terms and the conductivity, so
cells outside the support behave exactly like vacuum.

Rotation enters in three first-order-in-velocity ways:

* rigid advection ``Omega (y d/dx - x d/dy)`` of the stored
  polarization and magnetization (:func:`advect_phi`),
* the co-moving ("hatted") field combinations that the hysteresis law
  actually responds to (:func:`hat_fields`),
* a motion-induced magnetization sourced by the polarization response
  (the ``x Omega`` / ``y Omega`` terms in :func:`update_medium`).

Because the polarization rate depends on the sign of the co-moving
drive rate, the vertical-field update is a per-cell piecewise-linear
scalar solve (:func:`solve_Ez_rate`): monotone, with exactly one
consistent sign branch.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import CONSTANTS, PhysicalConstants
from .grid import (FieldArrays, GridSpec, avg_Ez_to_Hx_sites,
                   avg_Ez_to_Hy_sites, avg_to_Ez_sites)
from .point_model import ChannelParams
from ._kernels import KERNELS

__all__ = [
    "MaterialMap", "MediumState", "StepRates", "bump_weight", "advect_phi",
    "hat_fields", "solve_Ez_rate", "update_medium", "BranchSolveError",
    "RIM_SPEED_LIMIT",
]

# Largest admitted (omega * r_outer / c)^2: beyond this the neglected
# second-order-in-velocity terms are no longer demonstrably negligible.
RIM_SPEED_LIMIT = 1.0e-3  # dimensionless


class BranchSolveError(RuntimeError):
    """The per-cell branch solve lost monotonicity (negative chi)."""


# ---------------------------------------------------------------------------
# radial weight
# ---------------------------------------------------------------------------

def bump_weight(r, radius: float, transition_width: float):
    """Smooth cross-section weight of the cylinder at radius ``r``.

    Equals 1 for ``r <= radius - transition_width``, 0 for
    ``r >= radius + transition_width``, and follows the cubic smoothstep
    in between (value 1/2 exactly at ``r = radius``); monotone
    non-increasing in ``r``.
    """
    if transition_width <= 0.0:
        raise ValueError(
            f"transition_width must be positive, got {transition_width!r}")
    s = np.clip((radius + transition_width - np.asarray(r, dtype=float))
                / (2.0 * transition_width), 0.0, 1.0)
    return s * s * (3.0 - 2.0 * s)


# ---------------------------------------------------------------------------
# material map
# ---------------------------------------------------------------------------

@dataclass
class MaterialMap:
    """Geometry, motion and constitutive constants of the cylinder.

    Parameters
    ----------
    grid : GridSpec
        The lattice the weights are evaluated on.
    radius : float
        Cylinder radius R [m].
    center : tuple of float
        Axis position (x_c, y_c) [m].
    transition_width : float
        Bump smoothing width [m]; the support ends at
        ``radius + transition_width``.
    sigma : float
        Conductivity of the material [S/m] (weighted by the bump).
    omega : float
        Rotation rate about +z [rad/s].
    model : str
        ``"hysteretic"`` (requires ``params``) or ``"linear"``
        (requires ``eps_r``; static/validation use, no rotation).
    params : ChannelParams, optional
        Electric-channel hysteresis constants for the hysteretic model.
    eps_r : float, optional
        Relative permittivity for the linear model.

    Notes
    -----
    The soft axis is fixed to z (the polarization the cylinder carries
    is P_z; the motional magnetization lives in M_x, M_y).  Weights are
    two-dimensional (the cylinder is z-uniform) and are evaluated per
    sub-lattice so every field component sees the cross-section at its
    own sites.
    """

    grid: GridSpec
    radius: float
    center: tuple
    transition_width: float
    sigma: float = 0.0
    omega: float = 0.0
    model: str = "hysteretic"
    params: ChannelParams | None = None
    eps_r: float = 1.0
    constants: PhysicalConstants = field(default=CONSTANTS, repr=False)

    def __post_init__(self):
        g = self.grid
        if self.model not in ("hysteretic", "linear"):
            raise ValueError(
                f"model must be 'hysteretic' or 'linear', got {self.model!r}")
        if not (np.isfinite(self.radius) and self.radius > 0.0):
            raise ValueError(f"radius must be positive, got {self.radius!r}")
        if not (np.isfinite(self.transition_width)
                and self.transition_width > 0.0):
            raise ValueError(f"transition_width must be positive, "
                             f"got {self.transition_width!r}")
        if not (np.isfinite(self.sigma) and self.sigma >= 0.0):
            raise ValueError(f"sigma must be >= 0, got {self.sigma!r}")
        if not np.isfinite(self.omega):
            raise ValueError(f"omega must be finite, got {self.omega!r}")
        xc, yc = float(self.center[0]), float(self.center[1])
        self.center = (xc, yc)
        r_out = self.radius + self.transition_width
        margin = min(xc, yc, g.lx - xc, g.ly - yc)
        if r_out > margin - min(g.dx, g.dy):
            raise ValueError(
                "material support must stay at least one cell away from the "
                f"side walls (outer radius {r_out:.4g} m, margin "
                f"{margin:.4g} m)")
        c = self.constants.c
        rim = (self.omega * r_out / c) ** 2
        if rim > RIM_SPEED_LIMIT:
            raise ValueError(
                f"(omega*r/c)^2 = {rim:.3e} at the support edge exceeds "
                f"{RIM_SPEED_LIMIT:.0e}; the first-order-in-velocity medium "
                "model does not apply")
        if self.model == "hysteretic":
            if self.params is None:
                raise ValueError("hysteretic model requires params")
            if self.params.kappa < abs(self.params.theta):
                raise ValueError(
                    "kappa >= |theta| is required on the grid: otherwise the "
                    "branch susceptibility can turn negative and the "
                    "vertical-field solve loses monotonicity")
        else:
            if not (np.isfinite(self.eps_r) and self.eps_r >= 1.0):
                raise ValueError(f"eps_r must be >= 1, got {self.eps_r!r}")
            if self.omega != 0.0:
                raise ValueError("the linear validation material does not "
                                 "support rotation")
        self._build_caches()

    # cached per-lattice geometry ---------------------------------------
    def _build_caches(self):
        g = self.grid
        xc, yc = self.center
        xn = g.nodes_x() - xc
        yn = g.nodes_y() - yc
        xh = g.halves_x() - xc
        yh = g.halves_y() - yc
        self._coords = {
            "ez": (xn, yn), "ex": (xh, yn), "ey": (xn, yh),
            "hx": (xn, yh), "hy": (xh, yn),
        }
        self._weights = {}
        for lat, (xs, ys) in self._coords.items():
            r = np.hypot(xs[:, None], ys[None, :])
            self._weights[lat] = bump_weight(r, self.radius,
                                             self.transition_width)
        w = self._weights["ez"]
        ii = np.nonzero(w.any(axis=1))[0]
        jj = np.nonzero(w.any(axis=0))[0]
        if ii.size == 0:
            raise ValueError("material support covers no vertical-edge "
                             "sites; refine the grid or enlarge the radius")
        self.bbox = (int(ii[0]), int(ii[-1]) + 1, int(jj[0]), int(jj[-1]) + 1)

    def weights(self, lattice: str) -> np.ndarray:
        """Bump weight (2-D, x by y) on one sub-lattice."""
        try:
            return self._weights[lattice]
        except KeyError:
            raise ValueError(f"unknown sub-lattice {lattice!r}") from None

    def coords(self, lattice: str) -> tuple:
        """In-plane site coordinates relative to the axis (1-D x, 1-D y)."""
        try:
            return self._coords[lattice]
        except KeyError:
            raise ValueError(f"unknown sub-lattice {lattice!r}") from None

    def sigma_weights(self, lattice: str) -> np.ndarray:
        """Weighted conductivity sigma*w on one sub-lattice [S/m]."""
        return self.sigma * self.weights(lattice)

    def inv_eps(self, lattice: str) -> np.ndarray:
        """Inverse effective permittivity on one sub-lattice [m/F].

        For the hysteretic model the background permittivity is eps0
        everywhere (the hysteretic response enters through P_z, not
        through a permittivity); the linear model blends eps0*eps_r
        into the support with the same weight.
        """
        eps0 = self.constants.eps0
        if self.model == "linear":
            eps = eps0 * (1.0 + self.weights(lattice) * (self.eps_r - 1.0))
        else:
            eps = eps0 * np.ones_like(self.weights(lattice))
        return 1.0 / eps


# ---------------------------------------------------------------------------
# medium state
# ---------------------------------------------------------------------------

@dataclass
class MediumState:
    """Stored material response on the lattice.

    ``pz`` lives on the vertical-edge (Ez) sites, ``mx``/``my`` on the
    x-/y-face (Hx/Hy) sites.  ``last_edot_z`` keeps the previous step's
    vertical-field rate for the lagged-explicit scheme.
    """

    pz: np.ndarray
    mx: np.ndarray
    my: np.ndarray
    last_edot_z: np.ndarray

    @classmethod
    def zeros(cls, grid: GridSpec) -> "MediumState":
        return cls(np.zeros(grid.shape_of("ez")),
                   np.zeros(grid.shape_of("hx")),
                   np.zeros(grid.shape_of("hy")),
                   np.zeros(grid.shape_of("ez")))


@dataclass
class StepRates:
    """Per-step rate arrays exchanged between the stepper and the medium.

    ``cx``/``cy`` are the x/y components of curl E at time n (so
    -cx/-cy are the Bx/By rates); ``gz`` is the z component of curl H
    after the Faraday half-update.  The medium update fills ``edot_z``
    (everywhere; vacuum rate outside the solve box) and ``s_e`` (the
    consistent drive-rate sign, zero outside the support).
    """

    cx: np.ndarray
    cy: np.ndarray
    gz: np.ndarray
    edot_z: np.ndarray | None = None
    s_e: np.ndarray | None = None


# ---------------------------------------------------------------------------
# rotation operators
# ---------------------------------------------------------------------------

def advect_phi(arr: np.ndarray, mmap: MaterialMap,
               lattice: str) -> np.ndarray:
    """Rigid-rotation advection ``Omega (y d/dx - x d/dy)`` of ``arr``.

    ``arr`` lives on ``lattice``; x and y are measured from the
    cylinder axis.  Centered second-order differences inside the
    material support, one-sided at the support edge, and exactly zero
    wherever the bump weight vanishes (the advected quantities have no
    support there).
    """
    w = mmap.weights(lattice)
    xs, ys = mmap.coords(lattice)
    if arr.shape[:2] != w.shape:
        raise ValueError(f"array shape {arr.shape} does not match "
                         f"sub-lattice {lattice!r} {w.shape}")
    idx = 1.0 / mmap.grid.dx
    idy = 1.0 / mmap.grid.dy
    fp = np.pad(arr, ((1, 1), (1, 1)) + ((0, 0),) * (arr.ndim - 2))
    wp = np.pad(w, 1)
    has_l = (wp[:-2, 1:-1] > 0.0)
    has_r = (wp[2:, 1:-1] > 0.0)
    has_d = (wp[1:-1, :-2] > 0.0)
    has_u = (wp[1:-1, 2:] > 0.0)
    if arr.ndim == 3:
        expand = (slice(None), slice(None), None)
    else:
        expand = (slice(None), slice(None))
    has_l = has_l[expand]
    has_r = has_r[expand]
    has_d = has_d[expand]
    has_u = has_u[expand]
    c = fp[1:-1, 1:-1]
    dfdx = np.where(
        has_l & has_r, 0.5 * idx * (fp[2:, 1:-1] - fp[:-2, 1:-1]),
        np.where(has_r, idx * (fp[2:, 1:-1] - c),
                 np.where(has_l, idx * (c - fp[:-2, 1:-1]), 0.0)))
    dfdy = np.where(
        has_d & has_u, 0.5 * idy * (fp[1:-1, 2:] - fp[1:-1, :-2]),
        np.where(has_u, idy * (fp[1:-1, 2:] - c),
                 np.where(has_d, idy * (c - fp[1:-1, :-2]), 0.0)))
    out = mmap.omega * (ys[None, :] if arr.ndim == 2 else
                        ys[None, :, None]) * dfdx
    out -= mmap.omega * (xs[:, None] if arr.ndim == 2 else
                         xs[:, None, None]) * dfdy
    mask = (w > 0.0)[expand]
    return np.where(mask, out, 0.0)


def hat_fields(ez: np.ndarray, bx: np.ndarray, by: np.ndarray,
               pz: np.ndarray, mx: np.ndarray, my: np.ndarray,
               mmap: MaterialMap) -> tuple:
    """Co-moving field combinations at the vertical-edge sites.

    All inputs must already be averaged to the Ez sites.  Returns
    ``(e3_hat, p3_hat)`` with::

        e3_hat = Ez - Omega (x Bx + y By)
        p3_hat = Pz - (Omega/c^2) (x Mx + y My)

    At ``Omega = 0`` and on the rotation axis these reduce to the
    laboratory values exactly.
    """
    xs, ys = mmap.coords("ez")
    om = mmap.omega
    c2 = mmap.constants.c ** 2
    arm = xs[:, None, None] * bx + ys[None, :, None] * by
    e3_hat = ez - om * arm
    armm = xs[:, None, None] * mx + ys[None, :, None] * my
    p3_hat = pz - (om / c2) * armm
    return e3_hat, p3_hat


# ---------------------------------------------------------------------------
# per-cell branch solve
# ---------------------------------------------------------------------------

def solve_Ez_rate(curlh_z, ez, pz_advect, k_rate, psi_hat, sigma,
                  params: ChannelParams,
                  consts: PhysicalConstants = CONSTANTS) -> tuple:
    """Solve the coupled vertical-field / polarization rate per cell.

    The vertical Ampere law and the branched polarization law form, per
    cell, one scalar piecewise-linear equation for the co-moving drive
    rate Ê3 = Ė_z + K::

        eps0 (Ê3 - K) = RHS - chi_b(sgn Ê3) Ê3,
        RHS = (curl H)_z - sigma Ez - [advection of Pz],
        chi_b(S_E) = kappa |psi_hat| + theta S_E psi_hat.

    For ``kappa >= |theta|`` the map Ê3 -> eps0 Ê3 + chi_b(sgn Ê3) Ê3
    is continuous, strictly increasing and zero at zero, so exactly one
    sign branch is consistent: ``S_E = sgn(RHS + eps0 K)``.

    Parameters are arrays (or scalars) on matching shapes; ``psi_hat``,
    ``pz_advect`` and ``sigma`` are expected pre-scaled by the material
    weight, ``k_rate`` is the known kinematic part K of Ê3.  Returns
    ``(edot_z, e3_hat_rate, branch)`` with ``branch`` in {-1, 0, +1}.

    Raises
    ------
    BranchSolveError
        If a negative branch susceptibility is encountered (parameter
        regimes with ``kappa < |theta|`` are rejected at configuration
        time, so this indicates corrupted inputs).
    """
    eps0 = consts.eps0
    rhs = curlh_z - sigma * ez - pz_advect
    a = rhs + eps0 * k_rate
    branch = np.sign(a)
    chi = params.kappa * np.abs(psi_hat) + params.theta * branch * psi_hat
    if np.any(chi < 0.0):
        raise BranchSolveError(
            "negative branch susceptibility in the vertical-field solve")
    e3_hat_rate = a / (eps0 + chi)
    edot_z = e3_hat_rate - k_rate
    return edot_z, e3_hat_rate, branch


# ---------------------------------------------------------------------------
# medium update (one time step)
# ---------------------------------------------------------------------------

def update_medium(medium: MediumState, fields: FieldArrays,
                  rates: StepRates, dt: float, mmap: MaterialMap,
                  scheme: str = "semi_implicit") -> MediumState:
    """Advance Pz, Mx, My (and Ez inside the solve box) by one step.

    Must be called after the Faraday half-update of H (so ``fields.hx``
    etc. hold H*) and with ``rates.gz`` the curl of H*.  Updates, in
    place:

    * ``fields.ez`` and ``medium.pz`` on the bounding box of the
      material support, via the per-cell branch solve with the drive
      sign taken from the solved rate (``scheme="semi_implicit"``) or
      with the sign lagged one step, from the previous step's rate
      (``scheme="lagged_explicit"``),
    * ``medium.mx``/``medium.my`` from the advection and the
      motion-induced source terms (un-hatted arguments, with the
      vertical-field rate just computed),
    * ``fields.hx``/``fields.hy`` by the corresponding dt*Mdot (the
      magnetization enters H directly; Hz carries no magnetization).

    Fills ``rates.edot_z`` (vacuum rate outside the box) and
    ``rates.s_e`` and returns ``medium``.
    """
    if scheme not in ("semi_implicit", "lagged_explicit"):
        raise ValueError(f"unknown scheme {scheme!r}")
    g = mmap.grid
    consts = mmap.constants
    eps0 = consts.eps0
    mu0 = consts.mu0
    p = mmap.params
    om = mmap.omega
    i0, i1, j0, j1 = mmap.bbox
    w_ez = mmap.weights("ez")
    xs, ys = mmap.coords("ez")

    # B at time n (average of the two adjacent half-step levels) and its
    # rate, both averaged to the vertical-edge sites.  With H* already
    # past the Faraday update, B(n+1/2) = mu0 (H* - M(n-1/2)) because the
    # upcoming dt*Mdot increments of H and M cancel in their difference,
    # and B(n) = B(n+1/2) + (dt/2) curl E.
    bxn = mu0 * (fields.hx - medium.mx) + 0.5 * dt * rates.cx
    byn = mu0 * (fields.hy - medium.my) + 0.5 * dt * rates.cy
    bx_e = avg_to_Ez_sites(bxn, g, "hx")
    by_e = avg_to_Ez_sites(byn, g, "hy")
    bdx_e = avg_to_Ez_sites(-rates.cx, g, "hx")
    bdy_e = avg_to_Ez_sites(-rates.cy, g, "hy")
    mx_e = avg_to_Ez_sites(medium.mx, g, "hx")
    my_e = avg_to_Ez_sites(medium.my, g, "hy")

    e3h, p3h = hat_fields(fields.ez, bx_e, by_e, medium.pz, mx_e, my_e, mmap)
    psi_hat = eps0 * (p.alpha * np.tanh(p.beta * e3h) - p.xi * p3h)
    psi_w = w_ez[:, :, None] * psi_hat

    adv_pw = w_ez[:, :, None] * advect_phi(medium.pz, mmap, "ez")
    arm_dot = xs[:, None, None] * bdx_e + ys[None, :, None] * bdy_e
    karr = np.where((w_ez > 0.0)[:, :, None],
                    -om * arm_dot - advect_phi(fields.ez, mmap, "ez"), 0.0)
    sgz = mmap.sigma_weights("ez")

    # inputs to the magnetization update are taken at time n (un-hatted,
    # pre-solve), so average Ez and Pz out before the solve mutates them
    ez_hx = avg_Ez_to_Hx_sites(fields.ez)
    ez_hy = avg_Ez_to_Hy_sites(fields.ez)
    pz_hx = avg_Ez_to_Hx_sites(medium.pz)
    pz_hy = avg_Ez_to_Hy_sites(medium.pz)

    edot = rates.gz / eps0  # vacuum rate; the solve box is overwritten
    s_e = np.zeros_like(edot)
    if scheme == "semi_implicit":
        KERNELS["solve_ez_medium"](
            fields.ez, medium.pz, rates.gz, adv_pw, karr, psi_w, sgz,
            dt, eps0, p.kappa, p.theta, i0, i1, j0, j1, edot, s_e)
    else:
        KERNELS["lagged_ez_medium"](
            fields.ez, medium.pz, rates.gz, adv_pw, karr, psi_w, sgz,
            medium.last_edot_z, dt, eps0, p.kappa, p.theta,
            i0, i1, j0, j1, edot, s_e)
    medium.last_edot_z[:] = edot
    rates.edot_z = edot
    rates.s_e = s_e

    # magnetization: advection plus the motion-induced source with
    # un-hatted arguments and the vertical-field rate just computed
    ed_hx = avg_Ez_to_Hx_sites(edot)
    ed_hy = avg_Ez_to_Hy_sites(edot)
    for m_arr, h_arr, lat, ez_m, pz_m, ed_m, use_x in (
            (medium.mx, fields.hx, "hx", ez_hx, pz_hx, ed_hx, True),
            (medium.my, fields.hy, "hy", ez_hy, pz_hy, ed_hy, False)):
        w_m = mmap.weights(lat)
        xm, ym = mmap.coords(lat)
        arm = xm[:, None, None] if use_x else ym[None, :, None]
        psi_u = p.alpha * np.tanh(p.beta * ez_m) - p.xi * pz_m
        source = om * arm * eps0 * (p.kappa * np.abs(psi_u) * ed_m
                                    + p.theta * psi_u * np.abs(ed_m))
        mdot = w_m[:, :, None] * (advect_phi(m_arr, mmap, lat) + source)
        m_arr += dt * mdot
        h_arr += dt * mdot
    return medium
