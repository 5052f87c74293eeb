"""Zero-dimensional hysteresis point model.

A uniaxial medium stores a polarization P and a magnetization M along a
single soft direction.  Four coupling channels relate them to the drive
fields E and H through a branched, rate-independent law.  Each channel Q
carries a saturation shape function f(z) = tanh(beta*z), an affine
combination

    psi_pe =  eps0 * (alpha * f(E) - xi * P)
    psi_ph = -(alpha * f(H) - xi * P)
    psi_mh = -(alpha * f(H) + xi * M)
    psi_me =  eps0 * (alpha * f(E) + xi * M)

and a branched susceptibility

    X = psi * (kappa * sgn(psi) + theta * sgn(drive rate))

where sgn(0) = 0 exactly.  The coupled point system reads

    dP/dt = X_pe * dE/dt - (1/c) * X_ph * dH/dt
    dM/dt = X_mh * dH/dt -  c    * X_me * dE/dt

With only the pe channel active this reduces to the scalar law

    dP/dt = kappa * |psi| * dE/dt + theta * psi * |dE/dt|

whose trajectory depends on the field history only through its path:
reparameterizing time leaves the (E, P) locus unchanged.
While both sign factors are constant the law is a linear ODE in E with
the closed-form solution implemented by :func:`branch_solution`.  When
sgn(psi) * sgn(dE/dt) = -1 and kappa = theta the response freezes (dP = 0
exactly); saturation is the psi = 0 fixed point P = alpha * f(E) / xi.

The integrator holds all sign factors constant within a step (RK4 on the
smooth remainder) and locates their sign changes by sub-step bisection,
so branch transitions are resolved to a small fraction of the step.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .constants import CONSTANTS, PhysicalConstants
from .traces import Trace

__all__ = [
    "Channel",
    "ChannelParams",
    "ChannelSet",
    "PointState",
    "BranchState",
    "SineDrive",
    "RampDrive",
    "PiecewiseLinearDrive",
    "shape_fn",
    "psi",
    "susceptibility",
    "step_inertial",
    "branch_solution",
    "run_drive",
    "loop_metrics",
    "DEFAULT_FERROELECTRIC",
]

POINT_TRACE_COLUMNS = ("t", "E", "P", "H", "M", "s_psi", "s_drive")

# Relative sub-step tolerance used when bisecting a sign change.
EVENT_TOLERANCE = 1e-3


def _sgn(x: float) -> float:
    """Three-valued sign with sgn(0) = 0 exactly."""
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


class Channel(str, enum.Enum):
    """Coupling channel: response (P or M) paired with its drive (E or H)."""

    PE = "pe"  # polarization driven by E
    PH = "ph"  # polarization driven by H
    ME = "me"  # magnetization driven by E
    MH = "mh"  # magnetization driven by H


@dataclass(frozen=True)
class ChannelParams:
    """Material constants of one coupling channel.

    alpha is the dimensionless saturation scale, beta the inverse drive
    scale [m/V for E-driven channels, m/A for H-driven ones], xi the
    inverse response scale [m^2/C or (A/m)^-1], kappa and theta the
    branch weights.  alpha, beta, xi must be positive; kappa and theta
    finite.
    """

    channel: Channel
    alpha: float
    beta: float
    xi: float
    kappa: float
    theta: float

    def __post_init__(self) -> None:
        if not (self.alpha > 0.0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not (self.beta > 0.0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not (self.xi > 0.0 and math.isfinite(self.xi)):
            raise ValueError(f"xi must be positive, got {self.xi}")
        if not math.isfinite(self.kappa):
            raise ValueError(f"kappa must be finite, got {self.kappa}")
        if not math.isfinite(self.theta):
            raise ValueError(f"theta must be finite, got {self.theta}")

    @property
    def saturation(self) -> float:
        """Magnitude of the psi = 0 fixed point, alpha/xi."""
        return self.alpha / self.xi


# Parameter set used by the bundled example configurations: a soft
# ceramic ferroelectric with saturation polarization alpha/xi = 0.277
# C/m^2 and switching fields of order 1/beta = 5e5 V/m.
DEFAULT_FERROELECTRIC = ChannelParams(
    channel=Channel.PE,
    alpha=3.6e4,
    beta=2.0e-6,
    xi=1.3e5,
    kappa=0.5,
    theta=0.5,
)


@dataclass(frozen=True)
class ChannelSet:
    """Active channels of a point medium; None disables a channel."""

    pe: ChannelParams | None = None
    ph: ChannelParams | None = None
    me: ChannelParams | None = None
    mh: ChannelParams | None = None

    def __post_init__(self) -> None:
        for name in ("pe", "ph", "me", "mh"):
            params = getattr(self, name)
            if params is not None and params.channel.value != name:
                raise ValueError(
                    f"slot {name} holds params tagged {params.channel.value}"
                )

    @classmethod
    def single(cls, params: ChannelParams) -> "ChannelSet":
        return cls(**{params.channel.value: params})


@dataclass
class PointState:
    """Instantaneous state of the point medium."""

    t: float = 0.0
    E: float = 0.0
    H: float = 0.0
    P: float = 0.0
    M: float = 0.0

    def require_finite(self) -> None:
        for name in ("t", "E", "H", "P", "M"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"non-finite state component {name}")


@dataclass(frozen=True)
class BranchState:
    """Sign factors selecting the active branch of one channel."""

    s_psi: float
    s_drive: float

    @property
    def frozen(self) -> bool:
        return self.s_psi * self.s_drive == -1.0


def shape_fn(z: float, beta: float) -> float:
    """Saturating drive shape tanh(beta*z); odd, bounded by 1."""
    return math.tanh(beta * z)


def psi(params: ChannelParams, drive: float, response: float,
        consts: PhysicalConstants = CONSTANTS) -> float:
    """Branch argument of one channel.

    ``drive`` is E for pe/me and H for ph/mh; ``response`` is P for
    pe/ph and M for me/mh.  The sign pattern and eps0 factors follow the
    channel (see module docstring); psi/eps0 for the E-driven channels
    and psi itself for the H-driven ones are dimensionless.
    """
    f = shape_fn(drive, params.beta)
    ch = params.channel
    if ch is Channel.PE:
        return consts.eps0 * (params.alpha * f - params.xi * response)
    if ch is Channel.PH:
        return -(params.alpha * f - params.xi * response)
    if ch is Channel.MH:
        return -(params.alpha * f + params.xi * response)
    if ch is Channel.ME:
        return consts.eps0 * (params.alpha * f + params.xi * response)
    raise ValueError(f"unknown channel {ch}")


def susceptibility(params: ChannelParams, psi_value: float,
                   drive_rate_sign: float) -> float:
    """Branched susceptibility X = psi*(kappa*sgn(psi) + theta*s_drive).

    Equals kappa*|psi| + theta*s_drive*psi; vanishes when psi = 0 or
    when the branch is frozen (kappa = theta and opposing signs).
    """
    if drive_rate_sign not in (-1.0, 0.0, 1.0):
        raise ValueError(f"drive_rate_sign must be in {{-1,0,1}}, got {drive_rate_sign}")
    return psi_value * (params.kappa * _sgn(psi_value)
                        + params.theta * drive_rate_sign)


# ---------------------------------------------------------------------------
# drives
# ---------------------------------------------------------------------------

class SineDrive:
    """Sinusoidal drive value(t) = offset + amplitude*sin(2*pi*f*t + phase)."""

    def __init__(self, amplitude: float, frequency: float,
                 phase: float = 0.0, offset: float = 0.0) -> None:
        if frequency <= 0.0:
            raise ValueError("frequency must be positive")
        self.amplitude = amplitude
        self.frequency = frequency
        self.phase = phase
        self.offset = offset

    @property
    def period(self) -> float:
        return 1.0 / self.frequency

    def value(self, t: float) -> float:
        return self.offset + self.amplitude * math.sin(
            2.0 * math.pi * self.frequency * t + self.phase)

    def rate(self, t: float) -> float:
        w = 2.0 * math.pi * self.frequency
        return self.amplitude * w * math.cos(w * t + self.phase)


class RampDrive:
    """Linear drive value(t) = start + slope*t."""

    def __init__(self, slope: float, start: float = 0.0) -> None:
        self.slope = slope
        self.start = start

    def value(self, t: float) -> float:
        return self.start + self.slope * t

    def rate(self, t: float) -> float:
        return self.slope


class PiecewiseLinearDrive:
    """Drive interpolating tabulated samples; rate is the segment secant."""

    def __init__(self, times: np.ndarray, values: np.ndarray) -> None:
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape or times.size < 2:
            raise ValueError("times and values must be matching 1-D arrays")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("times must be strictly increasing")
        self.times = times
        self.values = values
        self._slopes = np.diff(values) / np.diff(times)

    def value(self, t: float) -> float:
        return float(np.interp(t, self.times, self.values))

    def rate(self, t: float) -> float:
        k = int(np.searchsorted(self.times, t, side="right") - 1)
        k = min(max(k, 0), self._slopes.size - 1)
        return float(self._slopes[k])


class ZeroDrive:
    """Identically zero drive."""

    def value(self, t: float) -> float:
        return 0.0

    def rate(self, t: float) -> float:
        return 0.0


# ---------------------------------------------------------------------------
# integration
# ---------------------------------------------------------------------------

_SLOTS = ("pe", "ph", "me", "mh")


def _channel_signs(channels: ChannelSet, E: float, H: float, P: float,
                   M: float, consts: PhysicalConstants) -> dict[str, float]:
    signs = {}
    for name in _SLOTS:
        params = getattr(channels, name)
        if params is None:
            continue
        drive = E if name in ("pe", "me") else H
        response = P if name in ("pe", "ph") else M
        signs[name] = _sgn(psi(params, drive, response, consts))
    return signs


def _pm_rates(channels: ChannelSet, E: float, H: float, P: float, M: float,
              dE: float, dH: float, s_psi: dict[str, float], s_e: float,
              s_h: float, consts: PhysicalConstants) -> tuple[float, float]:
    """(dP/dt, dM/dt) of the coupled pair with frozen sign factors."""
    pdot = 0.0
    mdot = 0.0
    if channels.pe is not None:
        pp = channels.pe
        x = psi(pp, E, P, consts) * (pp.kappa * s_psi["pe"] + pp.theta * s_e)
        pdot += x * dE
    if channels.ph is not None:
        pp = channels.ph
        x = psi(pp, H, P, consts) * (pp.kappa * s_psi["ph"] + pp.theta * s_h)
        pdot -= x * dH / consts.c
    if channels.mh is not None:
        pp = channels.mh
        x = psi(pp, H, M, consts) * (pp.kappa * s_psi["mh"] + pp.theta * s_h)
        mdot += x * dH
    if channels.me is not None:
        pp = channels.me
        x = psi(pp, E, M, consts) * (pp.kappa * s_psi["me"] + pp.theta * s_e)
        mdot -= consts.c * x * dE
    return pdot, mdot


def _rk4_segment(state: PointState, h: float, drive_e, drive_h,
                 channels: ChannelSet, s_psi: dict[str, float], s_e: float,
                 s_h: float, consts: PhysicalConstants) -> PointState:
    """One RK4 step of (P, M) over [t, t+h] with all sign factors frozen."""
    t0 = state.t

    def f(tau: float, p: float, m: float) -> tuple[float, float]:
        e = drive_e.value(t0 + tau)
        hh = drive_h.value(t0 + tau)
        de = drive_e.rate(t0 + tau)
        dh = drive_h.rate(t0 + tau)
        return _pm_rates(channels, e, hh, p, m, de, dh,
                         s_psi, s_e, s_h, consts)

    p0, m0 = state.P, state.M
    k1p, k1m = f(0.0, p0, m0)
    k2p, k2m = f(0.5 * h, p0 + 0.5 * h * k1p, m0 + 0.5 * h * k1m)
    k3p, k3m = f(0.5 * h, p0 + 0.5 * h * k2p, m0 + 0.5 * h * k2m)
    k4p, k4m = f(h, p0 + h * k3p, m0 + h * k3m)
    p1 = p0 + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
    m1 = m0 + (h / 6.0) * (k1m + 2.0 * k2m + 2.0 * k3m + k4m)
    t1 = t0 + h
    return PointState(t=t1, E=drive_e.value(t1), H=drive_h.value(t1),
                      P=p1, M=m1)


def _signs_at(state: PointState, drive_e, drive_h, channels: ChannelSet,
              consts: PhysicalConstants) -> tuple[dict[str, float], float, float]:
    s_psi = _channel_signs(channels, state.E, state.H, state.P, state.M, consts)
    return s_psi, _sgn(drive_e.rate(state.t)), _sgn(drive_h.rate(state.t))


def _signs_flip(before: tuple, after: tuple) -> bool:
    """True when any tracked sign strictly reverses (zero is a wildcard)."""
    sp0, se0, sh0 = before
    sp1, se1, sh1 = after
    for name, s0 in sp0.items():
        if s0 * sp1[name] == -1.0:
            return True
    return se0 * se1 == -1.0 or sh0 * sh1 == -1.0


def step_inertial(state: PointState, drive_rates: tuple[float, float],
                  dt: float, channels: ChannelSet,
                  consts: PhysicalConstants = CONSTANTS) -> PointState:
    """Advance the coupled (P, M) pair one explicit step.

    The drives advance linearly, E(t+s) = E + s*dE/dt and likewise for
    H; the sign factors are evaluated at the entry state and held for
    the whole step while psi is re-evaluated at every RK4 substage.
    Zero drive rates leave the state unchanged except for time.
    """
    state.require_finite()
    de, dh = drive_rates
    if not (math.isfinite(de) and math.isfinite(dh) and math.isfinite(dt)):
        raise ValueError("non-finite drive rate or step")
    if dt < 0.0:
        raise ValueError("dt must be non-negative")
    drive_e = RampDrive(de, state.E - de * state.t)
    drive_h = RampDrive(dh, state.H - dh * state.t)
    s_psi, s_e, s_h = _signs_at(state, drive_e, drive_h, channels, consts)
    return _rk4_segment(state, dt, drive_e, drive_h, channels,
                        s_psi, s_e, s_h, consts)


def branch_solution(e: float, e0: float, p0: float, s_psi: int, s_drive: int,
                    params: ChannelParams,
                    consts: PhysicalConstants = CONSTANTS) -> float:
    """Closed-form polarization along one branch of the pe channel.

    Valid while both sign factors stay constant between fields e0 and e:

        P(e) = p0*exp(-eta*xi*(e - e0))
               + eta*alpha * integral_{e0}^{e} tanh(beta*u)
                             * exp(-eta*xi*(e - u)) du

    with eta = eps0*(kappa*s_psi + theta*s_drive).  The integral is
    evaluated by adaptive Gauss-Kronrod quadrature to 1e-10 relative
    error or better.  eta = 0 (a frozen branch) returns p0 exactly.
    """
    if s_psi not in (-1, 1) or s_drive not in (-1, 1):
        raise ValueError("sign factors must be -1 or +1")
    if e != e0 and _sgn(e - e0) != float(s_drive):
        raise ValueError(
            f"drive sign {s_drive} contradicts field ordering e0={e0}, e={e}")
    eta = consts.eps0 * (params.kappa * s_psi + params.theta * s_drive)
    if eta == 0.0 or e == e0:
        return p0
    lam = eta * params.xi
    beta = params.beta

    def integrand(u: float) -> float:
        return math.tanh(beta * u) * math.exp(-lam * (e - u))

    # The kernel exp(-lam*(e-u)) forgets the far end of long sweeps;
    # clip it where its weight drops below double precision.
    lo = e0
    if lam * s_drive > 0.0 and abs(lam * (e - e0)) > 50.0:
        lo = e - 50.0 / lam
    scale = abs(params.alpha * eta * (e - lo)) + abs(p0) + 1e-300
    with warnings.catch_warnings():
        # near-saturated stretches are roundoff-limited at this epsabs;
        # the quadrature result itself is still well inside tolerance
        warnings.simplefilter("ignore", IntegrationWarning)
        integral, _ = quad(integrand, lo, e, epsabs=1e-12 * scale,
                           epsrel=1e-11, limit=400)
    return p0 * math.exp(-lam * (e - e0)) + eta * params.alpha * integral


@dataclass
class BranchTransition:
    """Logged sign change of psi or of a drive rate."""

    t: float
    quantity: str  # channel name for psi signs, "s_E" or "s_H" for rates
    before: float
    after: float


@dataclass
class PointTrace:
    """Uniform-cadence point-model trace with branch transition log."""

    trace: Trace
    transitions: list[BranchTransition] = field(default_factory=list)

    def __getattr__(self, name: str):
        return getattr(self.trace, name)


def _resolve_zeros(signs0: tuple, signs1: tuple) -> tuple:
    """Replace exact-zero entry signs with the sign emerging in the step."""
    sp0, se0, sh0 = signs0
    sp1, se1, sh1 = signs1
    sp = {n: (sp1[n] if s == 0.0 else s) for n, s in sp0.items()}
    return (sp, se1 if se0 == 0.0 else se0, sh1 if sh0 == 0.0 else sh0)


def _advance_with_events(state: PointState, h: float, h_min: float,
                         drive_e, drive_h, channels: ChannelSet,
                         consts: PhysicalConstants,
                         log: list[BranchTransition]) -> PointState:
    """Advance by h, bisecting around sign changes down to h_min."""
    signs0 = _signs_at(state, drive_e, drive_h, channels, consts)
    trial = _rk4_segment(state, h, drive_e, drive_h, channels,
                         signs0[0], signs0[1], signs0[2], consts)
    signs1 = _signs_at(trial, drive_e, drive_h, channels, consts)
    if (0.0 in signs0[0].values()) or signs0[1] == 0.0 or signs0[2] == 0.0:
        # A sign sitting exactly at zero adopts the value it takes during
        # the step (the instantaneous law still uses sgn(0) = 0).
        signs0 = _resolve_zeros(signs0, signs1)
        trial = _rk4_segment(state, h, drive_e, drive_h, channels,
                             signs0[0], signs0[1], signs0[2], consts)
        signs1 = _signs_at(trial, drive_e, drive_h, channels, consts)
    if h <= h_min or not _signs_flip(signs0, signs1):
        if h <= h_min and _signs_flip(signs0, signs1):
            sp0, se0, sh0 = signs0
            sp1, se1, sh1 = signs1
            for name, s0 in sp0.items():
                if s0 * sp1[name] == -1.0:
                    log.append(BranchTransition(trial.t, name, s0, sp1[name]))
            if se0 * se1 == -1.0:
                log.append(BranchTransition(trial.t, "s_E", se0, se1))
            if sh0 * sh1 == -1.0:
                log.append(BranchTransition(trial.t, "s_H", sh0, sh1))
        return trial
    half = 0.5 * h
    mid = _advance_with_events(state, half, h_min, drive_e, drive_h,
                               channels, consts, log)
    return _advance_with_events(mid, half, h_min, drive_e, drive_h,
                                channels, consts, log)


def run_drive(drive_e, duration: float, dt: float | None = None,
              channels: ChannelSet | None = None,
              consts: PhysicalConstants = CONSTANTS,
              drive_h=None, initial: PointState | None = None,
              min_steps_per_period: int = 1000) -> PointTrace:
    """Integrate the point model under prescribed drive waveforms.

    dt defaults to period/(2*min_steps_per_period) when the E drive
    exposes a period, and must resolve the waveform with at least
    ``min_steps_per_period`` steps per period otherwise.  Rows are
    emitted at every top-level step; branch transitions are located by
    sub-step bisection (to 1e-3*dt) and logged separately.
    """
    if channels is None:
        raise ValueError("channels must be provided")
    if drive_h is None:
        drive_h = ZeroDrive()
    if duration <= 0.0:
        raise ValueError("duration must be positive")
    period = getattr(drive_e, "period", None)
    if dt is None:
        if period is None:
            raise ValueError("dt is required for drives without a period")
        dt = period / (2 * min_steps_per_period)
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if period is not None and period / dt < min_steps_per_period:
        raise ValueError(
            f"dt={dt} gives {period / dt:.0f} steps per period; "
            f"at least {min_steps_per_period} required")

    n_steps = max(1, round(duration / dt))
    state = initial if initial is not None else PointState(
        t=0.0, E=drive_e.value(0.0), H=drive_h.value(0.0))
    state.require_finite()

    cols = {name: np.empty(n_steps + 1) for name in POINT_TRACE_COLUMNS}
    log: list[BranchTransition] = []
    h_min = EVENT_TOLERANCE * dt

    def record(i: int, st: PointState) -> None:
        sp, se, _sh = _signs_at(st, drive_e, drive_h, channels, consts)
        cols["t"][i] = st.t
        cols["E"][i] = st.E
        cols["P"][i] = st.P
        cols["H"][i] = st.H
        cols["M"][i] = st.M
        primary = next((sp[n] for n in _SLOTS if n in sp), 0.0)
        cols["s_psi"][i] = primary
        first = next((n for n in _SLOTS if n in sp), "pe")
        cols["s_drive"][i] = se if first in ("pe", "me") else _sh

    record(0, state)
    for i in range(n_steps):
        state = _advance_with_events(state, dt, h_min, drive_e, drive_h,
                                     channels, consts, log)
        record(i + 1, state)

    trace = Trace(POINT_TRACE_COLUMNS, [cols[n] for n in POINT_TRACE_COLUMNS])
    return PointTrace(trace=trace, transitions=log)


# ---------------------------------------------------------------------------
# loop metrics
# ---------------------------------------------------------------------------

class LoopDetectionError(ValueError):
    """Raised when no closed drive cycle can be located in a trace."""


def _zero_crossings(x: np.ndarray, upward_only: bool = False) -> np.ndarray:
    """Indices i where x crosses zero between samples i and i+1."""
    s = np.sign(x)
    flips = s[:-1] * s[1:] < 0
    if upward_only:
        flips &= s[:-1] < 0
    idx = np.nonzero(flips)[0]
    exact = np.nonzero((s[:-1] == 0) & (s[1:] != 0))[0]
    if upward_only:
        exact = exact[s[exact + 1] > 0]
    return np.union1d(idx, exact)


def _interp_at_zero(x: np.ndarray, y: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Linear interpolation of y at the zero crossings of x."""
    x0, x1 = x[idx], x[idx + 1]
    y0, y1 = y[idx], y[idx + 1]
    frac = np.where(x1 != x0, -x0 / np.where(x1 != x0, x1 - x0, 1.0), 0.0)
    return y0 + frac * (y1 - y0)


def loop_metrics(trace: Trace | PointTrace) -> dict[str, float]:
    """Hysteresis metrics of the final closed cycle of a point trace.

    Returns P_sat (max |P| over the cycle), P_remanent (|P| interpolated
    at the E = 0 crossings), E_coercive (|E| at the P = 0 crossings) and
    loop_area (the circulation integral of E dP, in J/m^3 per cycle).
    Zero drive yields all-zero metrics; a nonzero drive without a full
    cycle raises LoopDetectionError.
    """
    tr = trace.trace if isinstance(trace, PointTrace) else trace
    e = tr["E"]
    p = tr["P"]
    if np.max(np.abs(e)) == 0.0:
        return {"P_sat": 0.0, "P_remanent": 0.0, "E_coercive": 0.0,
                "loop_area": 0.0}
    ups = _zero_crossings(e, upward_only=True)
    if ups.size < 2:
        raise LoopDetectionError("no closed drive cycle found in trace")
    lo, hi = ups[-2], ups[-1] + 1
    ec = e[lo:hi + 1]
    pc = p[lo:hi + 1]

    p_sat = float(np.max(np.abs(pc)))
    e_zeros = _zero_crossings(ec)
    p_rem = (float(np.mean(np.abs(_interp_at_zero(ec, pc, e_zeros))))
             if e_zeros.size else 0.0)
    p_zeros = _zero_crossings(pc)
    e_coer = (float(np.mean(np.abs(_interp_at_zero(pc, ec, p_zeros))))
              if p_zeros.size else 0.0)
    area = float(abs(np.sum(0.5 * (ec[1:] + ec[:-1]) * np.diff(pc))))
    return {"P_sat": p_sat, "P_remanent": p_rem, "E_coercive": e_coer,
            "loop_area": area}
