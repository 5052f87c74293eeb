"""Hot field-update kernels with numba and pure-numpy implementations.

Every kernel exists twice: a numba ``@njit`` loop version and a
vectorized numpy version with identical per-element arithmetic.  The
module binds one family at import time: numba when it is importable and
the environment variable ``FERROCAV_DISABLE_NUMBA`` is unset or empty,
numpy otherwise.  ``BACKEND`` names the active family and both families
remain importable (``NUMPY_KERNELS`` / ``NUMBA_KERNELS``) so they can be
benchmarked and cross-checked against each other.

Array conventions (staggered lattice, node spacing dx, dy, dz):

    Ex (nx,   ny+1, nz+1)  at (i+1/2, j,     k)
    Ey (nx+1, ny,   nz+1)  at (i,     j+1/2, k)
    Ez (nx+1, ny+1, nz)    at (i,     j,     k+1/2)
    Hx (nx+1, ny,   nz)    at (i,     j+1/2, k+1/2)
    Hy (nx,   ny+1, nz)    at (i+1/2, j,     k+1/2)
    Hz (nx,   ny,   nz+1)  at (i+1/2, j+1/2, k)

curl_e writes at H sites; curl_h writes at E sites and leaves the
entries on the cavity walls zero (tangential E there is forced by the
PEC condition anyway).
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["BACKEND", "HAS_NUMBA", "KERNELS", "NUMPY_KERNELS",
           "NUMBA_KERNELS", "active_kernels"]

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag instead
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap if not (args and callable(args[0])) else args[0]

_DISABLED = bool(os.environ.get("FERROCAV_DISABLE_NUMBA", ""))


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def _np_curl_e(ex, ey, ez, idx, idy, idz, cx, cy, cz):
    cx[:] = (ez[:, 1:, :] - ez[:, :-1, :]) * idy \
        - (ey[:, :, 1:] - ey[:, :, :-1]) * idz
    cy[:] = (ex[:, :, 1:] - ex[:, :, :-1]) * idz \
        - (ez[1:, :, :] - ez[:-1, :, :]) * idx
    cz[:] = (ey[1:, :, :] - ey[:-1, :, :]) * idx \
        - (ex[:, 1:, :] - ex[:, :-1, :]) * idy


def _np_curl_h(hx, hy, hz, idx, idy, idz, gx, gy, gz):
    gx[:] = 0.0
    gy[:] = 0.0
    gz[:] = 0.0
    gx[:, 1:-1, 1:-1] = (hz[:, 1:, 1:-1] - hz[:, :-1, 1:-1]) * idy \
        - (hy[:, 1:-1, 1:] - hy[:, 1:-1, :-1]) * idz
    gy[1:-1, :, 1:-1] = (hx[1:-1, :, 1:] - hx[1:-1, :, :-1]) * idz \
        - (hz[1:, :, 1:-1] - hz[:-1, :, 1:-1]) * idx
    gz[1:-1, 1:-1, :] = (hy[1:, 1:-1, :] - hy[:-1, 1:-1, :]) * idx \
        - (hx[1:-1, 1:, :] - hx[1:-1, :-1, :]) * idy


def _np_update_h(hx, hy, hz, cx, cy, cz, dt_over_mu0):
    hx -= dt_over_mu0 * cx
    hy -= dt_over_mu0 * cy
    hz -= dt_over_mu0 * cz


def _np_update_e_transverse(ex, ey, gx, gy, jhx, jhy, jcoef,
                            sgx, sgy, iex, iey, dt):
    ex += dt * iex[:, :, None] * (gx - sgx[:, :, None] * ex - jcoef * jhx)
    ey += dt * iey[:, :, None] * (gy - sgy[:, :, None] * ey - jcoef * jhy)


def _np_update_ez_outside(ez, gz, jhz, jcoef, sgz, iez, dt, i0, i1, j0, j1):
    new = ez + dt * iez[:, :, None] * (gz - sgz[:, :, None] * ez - jcoef * jhz)
    if i1 > i0 and j1 > j0:
        new[i0:i1, j0:j1, :] = ez[i0:i1, j0:j1, :]
    ez[:] = new


def _np_solve_ez_medium(ez, pz, gz, adv_pw, karr, psi_w, sgz, dt,
                        eps0, kappa, theta, i0, i1, j0, j1, edot, s_e):
    sl = (slice(i0, i1), slice(j0, j1), slice(None))
    a = gz[sl] - sgz[i0:i1, j0:j1, None] * ez[sl] - adv_pw[sl] \
        + eps0 * karr[sl]
    se = np.sign(a)
    ps = psi_w[sl]
    chi = kappa * np.abs(ps) + theta * se * ps
    e3 = a / (eps0 + chi)
    ed = e3 - karr[sl]
    pd = adv_pw[sl] + chi * e3
    ez[sl] += dt * ed
    pz[sl] += dt * pd
    edot[sl] = ed
    s_e[sl] = se


def _np_lagged_ez_medium(ez, pz, gz, adv_pw, karr, psi_w, sgz, edot_prev,
                         dt, eps0, kappa, theta, i0, i1, j0, j1, edot, s_e):
    sl = (slice(i0, i1), slice(j0, j1), slice(None))
    se = np.sign(edot_prev[sl] + karr[sl])
    ps = psi_w[sl]
    chi = kappa * np.abs(ps) + theta * se * ps
    a = gz[sl] - sgz[i0:i1, j0:j1, None] * ez[sl] - adv_pw[sl] \
        + eps0 * karr[sl]
    e3 = a / (eps0 + chi)
    ed = e3 - karr[sl]
    pd = adv_pw[sl] + chi * e3
    ez[sl] += dt * ed
    pz[sl] += dt * pd
    edot[sl] = ed
    s_e[sl] = se


# ---------------------------------------------------------------------------
# numba implementations (same arithmetic, explicit loops)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _nb_curl_e(ex, ey, ez, idx, idy, idz, cx, cy, cz):
    nxp, nyp, nz = ez.shape
    nx = nxp - 1
    ny = nyp - 1
    nzp = nz + 1
    for i in range(nx + 1):
        for j in range(ny):
            for k in range(nz):
                cx[i, j, k] = (ez[i, j + 1, k] - ez[i, j, k]) * idy \
                    - (ey[i, j, k + 1] - ey[i, j, k]) * idz
    for i in range(nx):
        for j in range(ny + 1):
            for k in range(nz):
                cy[i, j, k] = (ex[i, j, k + 1] - ex[i, j, k]) * idz \
                    - (ez[i + 1, j, k] - ez[i, j, k]) * idx
    for i in range(nx):
        for j in range(ny):
            for k in range(nzp):
                cz[i, j, k] = (ey[i + 1, j, k] - ey[i, j, k]) * idx \
                    - (ex[i, j + 1, k] - ex[i, j, k]) * idy


@njit(cache=True)
def _nb_curl_h(hx, hy, hz, idx, idy, idz, gx, gy, gz):
    nxp, nyp, nz = gz.shape
    nx = nxp - 1
    ny = nyp - 1
    nzp = nz + 1
    gx[:] = 0.0
    gy[:] = 0.0
    gz[:] = 0.0
    for i in range(nx):
        for j in range(1, ny):
            for k in range(1, nz):
                gx[i, j, k] = (hz[i, j, k] - hz[i, j - 1, k]) * idy \
                    - (hy[i, j, k] - hy[i, j, k - 1]) * idz
    for i in range(1, nx):
        for j in range(ny):
            for k in range(1, nz):
                gy[i, j, k] = (hx[i, j, k] - hx[i, j, k - 1]) * idz \
                    - (hz[i, j, k] - hz[i - 1, j, k]) * idx
    for i in range(1, nx):
        for j in range(1, ny):
            for k in range(nz):
                gz[i, j, k] = (hy[i, j, k] - hy[i - 1, j, k]) * idx \
                    - (hx[i, j, k] - hx[i, j - 1, k]) * idy


@njit(cache=True)
def _nb_update_h(hx, hy, hz, cx, cy, cz, dt_over_mu0):
    ni, nj, nk = hx.shape
    for i in range(ni):
        for j in range(nj):
            for k in range(nk):
                hx[i, j, k] -= dt_over_mu0 * cx[i, j, k]
    ni, nj, nk = hy.shape
    for i in range(ni):
        for j in range(nj):
            for k in range(nk):
                hy[i, j, k] -= dt_over_mu0 * cy[i, j, k]
    ni, nj, nk = hz.shape
    for i in range(ni):
        for j in range(nj):
            for k in range(nk):
                hz[i, j, k] -= dt_over_mu0 * cz[i, j, k]


@njit(cache=True)
def _nb_update_e_transverse(ex, ey, gx, gy, jhx, jhy, jcoef,
                            sgx, sgy, iex, iey, dt):
    ni, nj, nk = ex.shape
    for i in range(ni):
        for j in range(nj):
            for k in range(nk):
                ex[i, j, k] += dt * iex[i, j] * (
                    gx[i, j, k] - sgx[i, j] * ex[i, j, k]
                    - jcoef * jhx[i, j, k])
    ni, nj, nk = ey.shape
    for i in range(ni):
        for j in range(nj):
            for k in range(nk):
                ey[i, j, k] += dt * iey[i, j] * (
                    gy[i, j, k] - sgy[i, j] * ey[i, j, k]
                    - jcoef * jhy[i, j, k])


@njit(cache=True)
def _nb_update_ez_outside(ez, gz, jhz, jcoef, sgz, iez, dt, i0, i1, j0, j1):
    ni, nj, nk = ez.shape
    for i in range(ni):
        for j in range(nj):
            if i0 <= i < i1 and j0 <= j < j1:
                continue
            for k in range(nk):
                ez[i, j, k] += dt * iez[i, j] * (
                    gz[i, j, k] - sgz[i, j] * ez[i, j, k]
                    - jcoef * jhz[i, j, k])


@njit(cache=True)
def _nb_solve_ez_medium(ez, pz, gz, adv_pw, karr, psi_w, sgz, dt,
                        eps0, kappa, theta, i0, i1, j0, j1, edot, s_e):
    nk = ez.shape[2]
    for i in range(i0, i1):
        for j in range(j0, j1):
            for k in range(nk):
                a = gz[i, j, k] - sgz[i, j] * ez[i, j, k] \
                    - adv_pw[i, j, k] + eps0 * karr[i, j, k]
                if a > 0.0:
                    se = 1.0
                elif a < 0.0:
                    se = -1.0
                else:
                    se = 0.0
                ps = psi_w[i, j, k]
                chi = kappa * abs(ps) + theta * se * ps
                e3 = a / (eps0 + chi)
                ed = e3 - karr[i, j, k]
                pd = adv_pw[i, j, k] + chi * e3
                ez[i, j, k] += dt * ed
                pz[i, j, k] += dt * pd
                edot[i, j, k] = ed
                s_e[i, j, k] = se


@njit(cache=True)
def _nb_lagged_ez_medium(ez, pz, gz, adv_pw, karr, psi_w, sgz, edot_prev,
                         dt, eps0, kappa, theta, i0, i1, j0, j1, edot, s_e):
    nk = ez.shape[2]
    for i in range(i0, i1):
        for j in range(j0, j1):
            for k in range(nk):
                e3g = edot_prev[i, j, k] + karr[i, j, k]
                if e3g > 0.0:
                    se = 1.0
                elif e3g < 0.0:
                    se = -1.0
                else:
                    se = 0.0
                ps = psi_w[i, j, k]
                chi = kappa * abs(ps) + theta * se * ps
                a = gz[i, j, k] - sgz[i, j] * ez[i, j, k] \
                    - adv_pw[i, j, k] + eps0 * karr[i, j, k]
                e3 = a / (eps0 + chi)
                ed = e3 - karr[i, j, k]
                pd = adv_pw[i, j, k] + chi * e3
                ez[i, j, k] += dt * ed
                pz[i, j, k] += dt * pd
                edot[i, j, k] = ed
                s_e[i, j, k] = se


_NAMES = ("curl_e", "curl_h", "update_h", "update_e_transverse",
          "update_ez_outside", "solve_ez_medium", "lagged_ez_medium")

NUMPY_KERNELS = {
    "curl_e": _np_curl_e,
    "curl_h": _np_curl_h,
    "update_h": _np_update_h,
    "update_e_transverse": _np_update_e_transverse,
    "update_ez_outside": _np_update_ez_outside,
    "solve_ez_medium": _np_solve_ez_medium,
    "lagged_ez_medium": _np_lagged_ez_medium,
}

NUMBA_KERNELS = {
    "curl_e": _nb_curl_e,
    "curl_h": _nb_curl_h,
    "update_h": _nb_update_h,
    "update_e_transverse": _nb_update_e_transverse,
    "update_ez_outside": _nb_update_ez_outside,
    "solve_ez_medium": _nb_solve_ez_medium,
    "lagged_ez_medium": _nb_lagged_ez_medium,
} if HAS_NUMBA else None

if HAS_NUMBA and not _DISABLED:
    BACKEND = "numba"
    KERNELS = NUMBA_KERNELS
else:
    BACKEND = "numpy"
    KERNELS = NUMPY_KERNELS


def active_kernels() -> dict:
    """The kernel family selected at import time."""
    return KERNELS
