"""Dotted ``key = value`` run configuration and the metadata sidecar.

One structured text file describes one cavity run.  Keys are dotted
(section.name), values are plain scalars; blank lines and lines whose
first non-space character is ``#`` are ignored.  Unknown keys are
errors, as are duplicate keys and unit-conflicting alternatives
(``material.omega_rad_s`` vs ``material.omega_rpm``; the three duration
forms; the two source amplitude forms).

Sections and keys (SI units)::

    grid.nx / ny / nz            cells per axis [-]
    grid.lx / ly / lz            cavity edge lengths [m]
    grid.cfl_safety              fraction of the stability-limit step [-]
    material.model               none | hysteretic | linear
    material.radius              cylinder radius [m]
    material.center_x / _y       cylinder axis position [m] (default: center)
    material.transition_width    bump smoothing width [m]
    material.sigma               conductivity [S/m]
    material.omega_rad_s         rotation rate [rad/s] (exclusive with rpm)
    material.omega_rpm           rotation rate [rpm]
    material.eps_r               relative permittivity (linear model) [-]
    hysteresis.alpha             saturation scale [V/m]
    hysteresis.beta              inverse drive-field scale [m/V]
    hysteresis.xi                inverse response scale [m^2/C]
    hysteresis.kappa             branch weight [-]
    hysteresis.theta             branch weight [-]
    source.frequency_hz          drive frequency [Hz]
    source.amplitude_a_m2        peak current density [A/m^2] (exclusive)
    source.ez_target_v_m         quasistatic vertical-field target [V/m]
    source.ramp_cycles           smooth-start length [drive periods]
    source.wall_layers           current-carrying cells per side wall [-]
    source.profile               vertical | solenoid | both
    source.bz_fraction           c|Bz|/|Ez| plateau ratio (profile=both) [-]
    run.duration_s               run length [s] (exclusive with the next two)
    run.drive_periods            run length [drive periods]
    run.revolutions              run length [revolutions]
    run.scheme                   semi_implicit | lagged_explicit
    run.trace_stride             steps between trace rows [-]
    run.diag_stride              steps between diagnostics rows [-]
    run.instability_factor       abort threshold over the drive scale [-]
    probes.<name>                probe position "x, y, z" [m]
    output.dir                   output directory for CSVs and the sidecar

The metadata sidecar written next to run outputs repeats the resolved
configuration in this same format, followed by ``# derived.<name>``
comment lines with the run's derived quantities; re-parsing a sidecar
reproduces an equivalent configuration.
"""

from __future__ import annotations

import math

import numpy as np

from .cavity import Probe, RunConfig, SourceSpec
from .grid import GridSpec
from .medium import MaterialMap
from .point_model import Channel, ChannelParams, DEFAULT_FERROELECTRIC

__all__ = ["ConfigError", "parse_text", "merge_overrides", "build_config",
           "loads", "load_config", "dump_config", "write_sidecar",
           "KNOWN_KEYS"]


class ConfigError(ValueError):
    """A configuration file or override could not be used."""


# ---------------------------------------------------------------------------
# raw parsing
# ---------------------------------------------------------------------------

#: every accepted fixed key (``probes.*`` names are free-form on top)
KNOWN_KEYS = (
    "grid.nx", "grid.ny", "grid.nz", "grid.lx", "grid.ly", "grid.lz",
    "grid.cfl_safety",
    "material.model", "material.radius", "material.center_x",
    "material.center_y", "material.transition_width", "material.sigma",
    "material.omega_rad_s", "material.omega_rpm", "material.eps_r",
    "hysteresis.alpha", "hysteresis.beta", "hysteresis.xi",
    "hysteresis.kappa", "hysteresis.theta",
    "source.frequency_hz", "source.amplitude_a_m2", "source.ez_target_v_m",
    "source.ramp_cycles", "source.wall_layers", "source.profile",
    "source.bz_fraction",
    "run.duration_s", "run.drive_periods", "run.revolutions", "run.scheme",
    "run.trace_stride", "run.diag_stride", "run.instability_factor",
    "output.dir",
)


def parse_text(text: str) -> dict:
    """Parse ``key = value`` lines into an ordered mapping of strings."""
    mapping: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', "
                              f"got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value in "
                              f"{raw!r}")
        if key in mapping:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        mapping[key] = value
    return mapping


def merge_overrides(mapping: dict, overrides) -> dict:
    """Apply ``key=value`` override strings on top of a parsed mapping."""
    merged = dict(mapping)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form "
                              f"key=value")
        key, _, value = item.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"override {item!r} has an empty key or "
                              f"value")
        merged[key] = value
    return merged


# ---------------------------------------------------------------------------
# typed extraction
# ---------------------------------------------------------------------------

def _check_known(mapping: dict) -> None:
    for key in mapping:
        if key in KNOWN_KEYS:
            continue
        if key.startswith("probes.") and len(key) > len("probes."):
            continue
        raise ConfigError(f"unknown configuration key {key!r}")


def _take_float(mapping: dict, key: str, default=None):
    if key not in mapping:
        return default
    try:
        value = float(mapping[key])
    except ValueError:
        raise ConfigError(f"{key}: {mapping[key]!r} is not a number") \
            from None
    if not np.isfinite(value):
        raise ConfigError(f"{key}: value must be finite, got {value!r}")
    return value


def _take_int(mapping: dict, key: str, default=None):
    if key not in mapping:
        return default
    text = mapping[key]
    try:
        value = int(text)
    except ValueError:
        raise ConfigError(f"{key}: {text!r} is not an integer") from None
    return value


def _take_choice(mapping: dict, key: str, choices, default=None):
    if key not in mapping:
        return default
    value = mapping[key]
    if value not in choices:
        raise ConfigError(f"{key}: expected one of {sorted(choices)}, "
                          f"got {value!r}")
    return value


def _exclusive(mapping: dict, keys) -> str | None:
    present = [k for k in keys if k in mapping]
    if len(present) > 1:
        raise ConfigError(f"keys {present} are mutually exclusive")
    return present[0] if present else None


# ---------------------------------------------------------------------------
# building the run configuration
# ---------------------------------------------------------------------------

def build_config(mapping: dict) -> RunConfig:
    """Turn a parsed mapping into a validated :class:`RunConfig`.

    The returned configuration carries the fully resolved mapping
    (defaults applied) on its ``resolved`` attribute for the sidecar.
    """
    _check_known(mapping)
    resolved: dict = {}

    def put(key, value):
        resolved[key] = value
        return value

    try:
        grid = GridSpec(
            nx=put("grid.nx", _take_int(mapping, "grid.nx", 20)),
            ny=put("grid.ny", _take_int(mapping, "grid.ny", 20)),
            nz=put("grid.nz", _take_int(mapping, "grid.nz", 8)),
            lx=put("grid.lx", _take_float(mapping, "grid.lx", 5.45)),
            ly=put("grid.ly", _take_float(mapping, "grid.ly", 5.45)),
            lz=put("grid.lz", _take_float(mapping, "grid.lz", 2.18)),
            cfl_safety=put("grid.cfl_safety",
                           _take_float(mapping, "grid.cfl_safety", 0.5)),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from None

    model = put("material.model",
                _take_choice(mapping, "material.model",
                             ("none", "hysteretic", "linear"),
                             "hysteretic" if any(
                                 k.startswith("material.")
                                 for k in mapping) else "none"))

    material = None
    if model == "none":
        stray = [k for k in mapping
                 if k.startswith(("material.", "hysteresis."))
                 and k != "material.model"]
        if stray:
            raise ConfigError(f"material.model = none does not take "
                              f"{stray}")
    else:
        omega_key = _exclusive(mapping, ("material.omega_rad_s",
                                         "material.omega_rpm"))
        if omega_key == "material.omega_rpm":
            omega = _take_float(mapping, omega_key) * 2.0 * math.pi / 60.0
        else:
            omega = _take_float(mapping, "material.omega_rad_s", 0.0)
        put("material.omega_rad_s", omega)
        params = None
        if model == "hysteretic":
            try:
                params = ChannelParams(
                    Channel.PE,
                    alpha=put("hysteresis.alpha",
                              _take_float(mapping, "hysteresis.alpha",
                                          DEFAULT_FERROELECTRIC.alpha)),
                    beta=put("hysteresis.beta",
                             _take_float(mapping, "hysteresis.beta",
                                         DEFAULT_FERROELECTRIC.beta)),
                    xi=put("hysteresis.xi",
                           _take_float(mapping, "hysteresis.xi",
                                       DEFAULT_FERROELECTRIC.xi)),
                    kappa=put("hysteresis.kappa",
                              _take_float(mapping, "hysteresis.kappa",
                                          DEFAULT_FERROELECTRIC.kappa)),
                    theta=put("hysteresis.theta",
                              _take_float(mapping, "hysteresis.theta",
                                          DEFAULT_FERROELECTRIC.theta)),
                )
            except ConfigError:
                raise
            except ValueError as exc:
                raise ConfigError(f"hysteresis: {exc}") from None
        else:
            stray = [k for k in mapping if k.startswith("hysteresis.")]
            if stray:
                raise ConfigError(f"material.model = linear does not take "
                                  f"{stray}")
        try:
            material = MaterialMap(
                grid=grid,
                radius=put("material.radius",
                           _take_float(mapping, "material.radius", 1.36)),
                center=(
                    put("material.center_x",
                        _take_float(mapping, "material.center_x",
                                    0.5 * grid.lx)),
                    put("material.center_y",
                        _take_float(mapping, "material.center_y",
                                    0.5 * grid.ly)),
                ),
                transition_width=put(
                    "material.transition_width",
                    _take_float(mapping, "material.transition_width",
                                min(grid.dx, grid.dy))),
                sigma=put("material.sigma",
                          _take_float(mapping, "material.sigma", 0.0)),
                omega=omega,
                model=model,
                params=params,
                eps_r=put("material.eps_r",
                          _take_float(mapping, "material.eps_r", 1.0)),
            )
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"material: {exc}") from None

    source = None
    if any(k.startswith("source.") for k in mapping):
        amp_key = _exclusive(mapping, ("source.amplitude_a_m2",
                                       "source.ez_target_v_m"))
        if amp_key is None:
            raise ConfigError("source: one of source.amplitude_a_m2 and "
                              "source.ez_target_v_m is required")
        if "source.frequency_hz" not in mapping:
            raise ConfigError("source.frequency_hz is required")
        try:
            source = SourceSpec(
                frequency=put("source.frequency_hz",
                              _take_float(mapping, "source.frequency_hz")),
                amplitude=_take_float(mapping, "source.amplitude_a_m2"),
                ez_target=_take_float(mapping, "source.ez_target_v_m"),
                ramp_cycles=put("source.ramp_cycles",
                                _take_float(mapping, "source.ramp_cycles",
                                            2.0)),
                wall_layers=put("source.wall_layers",
                                _take_int(mapping, "source.wall_layers",
                                          2)),
                profile=put("source.profile",
                            _take_choice(mapping, "source.profile",
                                         ("vertical", "solenoid", "both"),
                                         "vertical")),
                bz_fraction=put("source.bz_fraction",
                                _take_float(mapping, "source.bz_fraction",
                                            1.0)),
            )
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"source: {exc}") from None
        put(amp_key, _take_float(mapping, amp_key))

    duration_key = _exclusive(mapping, ("run.duration_s",
                                        "run.drive_periods",
                                        "run.revolutions"))
    if duration_key is None:
        duration = 0.0
    elif duration_key == "run.duration_s":
        duration = _take_float(mapping, duration_key)
    elif duration_key == "run.drive_periods":
        if source is None:
            raise ConfigError("run.drive_periods needs a source section "
                              "(the period is 1/source.frequency_hz)")
        duration = _take_float(mapping, duration_key) / source.frequency
    else:
        if material is None or material.omega == 0.0:
            raise ConfigError("run.revolutions needs a rotating material "
                              "(material.omega_rad_s or omega_rpm)")
        duration = (_take_float(mapping, duration_key)
                    * 2.0 * math.pi / abs(material.omega))
    put("run.duration_s", duration)

    probes = []
    for key, value in mapping.items():
        if not key.startswith("probes."):
            continue
        name = key[len("probes."):]
        parts = [p.strip() for p in value.split(",")]
        if len(parts) != 3:
            raise ConfigError(f"{key}: expected 'x, y, z', got {value!r}")
        try:
            x, y, z = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"{key}: {value!r} is not three numbers") \
                from None
        try:
            probes.append(Probe(name=name, x=x, y=y, z=z))
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from None
        put(key, value)

    output_dir = mapping.get("output.dir")
    if output_dir is not None:
        put("output.dir", output_dir)

    try:
        config = RunConfig(
            grid=grid,
            material=material,
            source=source,
            scheme=put("run.scheme",
                       _take_choice(mapping, "run.scheme",
                                    ("semi_implicit", "lagged_explicit"),
                                    "semi_implicit")),
            duration=duration,
            trace_stride=put("run.trace_stride",
                             _take_int(mapping, "run.trace_stride", 1)),
            diag_stride=put("run.diag_stride",
                            _take_int(mapping, "run.diag_stride", 16)),
            probes=tuple(probes),
            output_dir=output_dir,
            instability_factor=put(
                "run.instability_factor",
                _take_float(mapping, "run.instability_factor", 1.0e9)),
            resolved=resolved,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"run: {exc}") from None
    return config


def loads(text: str) -> RunConfig:
    """Parse configuration text into a validated :class:`RunConfig`."""
    return build_config(parse_text(text))


def load_config(path: str) -> RunConfig:
    """Read and validate a configuration file."""
    with open(path, "r", encoding="utf-8") as fh:
        return build_config(parse_text(fh.read()))


# ---------------------------------------------------------------------------
# writing
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def dump_config(config: RunConfig) -> dict:
    """The dotted-key mapping equivalent to ``config``.

    Uses the mapping captured at parse time when available (it already
    has the defaults applied); otherwise reconstructs one from the
    objects.
    """
    if config.resolved is not None:
        return dict(config.resolved)
    g = config.grid
    out = {
        "grid.nx": g.nx, "grid.ny": g.ny, "grid.nz": g.nz,
        "grid.lx": g.lx, "grid.ly": g.ly, "grid.lz": g.lz,
        "grid.cfl_safety": g.cfl_safety,
    }
    m = config.material
    out["material.model"] = "none" if m is None else m.model
    if m is not None:
        out.update({
            "material.radius": m.radius,
            "material.center_x": m.center[0],
            "material.center_y": m.center[1],
            "material.transition_width": m.transition_width,
            "material.sigma": m.sigma,
            "material.omega_rad_s": m.omega,
            "material.eps_r": m.eps_r,
        })
        if m.params is not None:
            out.update({
                "hysteresis.alpha": m.params.alpha,
                "hysteresis.beta": m.params.beta,
                "hysteresis.xi": m.params.xi,
                "hysteresis.kappa": m.params.kappa,
                "hysteresis.theta": m.params.theta,
            })
    s = config.source
    if s is not None:
        out["source.frequency_hz"] = s.frequency
        if s.amplitude is not None:
            out["source.amplitude_a_m2"] = s.amplitude
        else:
            out["source.ez_target_v_m"] = s.ez_target
        out.update({
            "source.ramp_cycles": s.ramp_cycles,
            "source.wall_layers": s.wall_layers,
            "source.profile": s.profile,
            "source.bz_fraction": s.bz_fraction,
        })
    out.update({
        "run.duration_s": config.duration,
        "run.scheme": config.scheme,
        "run.trace_stride": config.trace_stride,
        "run.diag_stride": config.diag_stride,
        "run.instability_factor": config.instability_factor,
    })
    for p in config.probes:
        out[f"probes.{p.name}"] = f"{p.x:.17g}, {p.y:.17g}, {p.z:.17g}"
    if config.output_dir is not None:
        out["output.dir"] = config.output_dir
    return out


def write_sidecar(path: str, config: RunConfig, report: dict) -> str:
    """Write the resolved configuration plus derived-quantity comments.

    The file re-parses into an equivalent configuration: the derived
    quantities ride along as ``# derived.<name> = value`` comments.
    """
    lines = ["# resolved run configuration (re-parseable)"]
    for key, value in dump_config(config).items():
        lines.append(f"{key} = {_fmt(value)}")
    lines.append("#")
    for key in sorted(report):
        lines.append(f"# derived.{key} = {_fmt(report[key])}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path
