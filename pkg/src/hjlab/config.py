"""Line-based run configuration.

A configuration file is a plain text file of ``section.key = value`` lines.
Blank lines and lines starting with ``#`` are ignored.  Every key must appear
in the registry below; unknown keys are hard errors so that typos cannot
silently fall back to defaults.  Values are parsed by the converter attached
to each key: scalars (``float``, ``int``, ``str``) or whitespace-separated
lists of floats or ints.  An empty value for an optional key means "unset".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import initial_data
from .errors import ConfigError
from .grid import Geometry
from .initial_data import InitialDatum
from .solver import ProblemSpec

__all__ = [
    "DEFAULTS",
    "Config",
    "default_config_text",
    "load_config",
    "parse_config_text",
    "problem_from_config",
    "datum_from_config",
]


def _float(raw: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"expected a number, got {raw!r}") from exc


def _int(raw: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"expected an integer, got {raw!r}") from exc


def _floats(raw: str) -> tuple[float, ...]:
    parts = raw.split()
    if not parts:
        raise ConfigError("expected at least one number")
    return tuple(_float(part) for part in parts)


def _ints(raw: str) -> tuple[int, ...]:
    parts = raw.split()
    if not parts:
        raise ConfigError("expected at least one integer")
    return tuple(_int(part) for part in parts)


def _choice(*allowed: str) -> Callable[[str], str]:
    def convert(raw: str) -> str:
        if raw not in allowed:
            raise ConfigError(f"expected one of {allowed}, got {raw!r}")
        return raw

    return convert


def _optional(converter: Callable[[str], object]) -> Callable[[str], object]:
    def convert(raw: str):
        if raw == "":
            return None
        return converter(raw)

    return convert


@dataclass(frozen=True)
class _Entry:
    default: str
    convert: Callable[[str], object]
    comment: str


# Registry of every recognised key.  The string defaults below are rendered
# verbatim into defaults.cfg, so they double as documentation of the file
# format.
DEFAULTS: dict[str, _Entry] = {
    # -- base problem -------------------------------------------------------
    "problem.q": _Entry("1.5", _float, "gradient exponent, must exceed 1"),
    "problem.nu": _Entry("1.0", _float, "diffusion coefficient in (0, 1]"),
    "problem.dim": _Entry("1", _int, "spatial dimension"),
    "problem.kind": _Entry(
        "radial", _choice("radial", "cartesian"), "grid kind"
    ),
    "problem.half_width": _Entry("4.0", _float, "domain radius / half width"),
    "problem.cells": _Entry("256", _int, "number of grid cells"),
    "problem.boundary": _Entry(
        "truncated_free",
        _choice("truncated_free", "dirichlet_zero"),
        "outer boundary treatment",
    ),
    "problem.final_time": _Entry("0.5", _float, "end of the time integration"),
    "problem.snapshots": _Entry(
        "0.02 0.05 0.1 0.2 0.5", _floats, "times at which fields are stored"
    ),
    "problem.cfl_safety": _Entry(
        "0.4", _float, "fraction of the stability step actually taken"
    ),
    # -- initial datum ------------------------------------------------------
    "datum.kind": _Entry(
        "bump",
        _choice("constant", "bump", "dirac", "power_singular", "power_growth"),
        "shape of the initial datum",
    ),
    "datum.coeff": _Entry("1.0", _float, "amplitude / coefficient"),
    "datum.width": _Entry("0.5", _float, "bump width"),
    "datum.gamma": _Entry("1.0", _float, "singular exponent |x|^(-gamma)"),
    "datum.beta": _Entry("0.5", _float, "growth exponent |x|^beta"),
    "datum.eps": _Entry("0.05", _float, "mollification radius of the spike"),
    "datum.cap": _Entry(
        "", _optional(_float), "optional truncation level, empty for none"
    ),
    # -- estimate checks ----------------------------------------------------
    "check.estimate": _Entry(
        "universal-gradient",
        _choice(
            "universal-gradient",
            "growth-bound",
            "local-mass",
            "first-smoothing",
            "second-smoothing",
            "local-sup",
        ),
        "which bound to audit",
    ),
    "check.eta": _Entry("1.0", _float, "ball radius for localised bounds"),
    "check.big_r": _Entry("1.0", _float, "Lebesgue exponent R"),
    "check.epsilon": _Entry("0.5", _float, "interpolation weight in (0, 1)"),
    "check.rho": _Entry("1.0", _float, "space radius of the sup estimate"),
    "check.theta": _Entry("0.1", _float, "time depth of the sup estimate"),
    "check.t_end": _Entry("0.4", _float, "anchor time of the sup estimate"),
    "check.stability": _Entry(
        "on", _choice("on", "off"), "re-run under refinement to test drift"
    ),
    # -- self-similar profiles ----------------------------------------------
    "profile.eta_max": _Entry(
        "", _optional(_float), "integration horizon, empty for the default"
    ),
    "profile.tol": _Entry("1e-10", _float, "bisection tolerance on f(0)"),
    "profile.c_target": _Entry(
        "", _optional(_float), "tail coefficient target, empty for the exact one"
    ),
    "profile.witness_time": _Entry(
        "1.0", _float, "time at which the nonzero solution is evaluated"
    ),
    # -- explicit barrier ----------------------------------------------------
    "barrier.sigma": _Entry(
        "", _optional(_float), "profile exponent, empty picks the regime value"
    ),
    "barrier.gamma": _Entry(
        "", _optional(_float), "profile amplitude, empty enables the search"
    ),
    "barrier.cells": _Entry("768", _int, "cells of the eigenfunction grid"),
    "barrier.radius": _Entry("3.0", _float, "radius of the eigenvalue domain"),
    "barrier.times": _Entry(
        "0.05 0.1 0.2 0.5 1.0 2.0 5.0", _floats, "certification times"
    ),
    # -- decay-rate experiment ----------------------------------------------
    "rates.big_r": _Entry("2.5", _float, "Lebesgue exponent of the datum"),
    "rates.delta": _Entry("0.2", _float, "supercriticality margin"),
    "rates.cells": _Entry("640", _int, "cells of the experiment grid"),
    "rates.half_width": _Entry("4.0", _float, "domain radius"),
    "rates.final_time": _Entry("0.2", _float, "end of the decay window"),
    # -- quadratic-case oracle ----------------------------------------------
    "oracle.amplitude": _Entry("8e-4", _float, "bump amplitude"),
    "oracle.width": _Entry("0.5", _float, "bump width"),
    "oracle.grids": _Entry("128 256 512", _ints, "cell counts to compare"),
    "oracle.half_width": _Entry("2.5", _float, "domain half width"),
    "oracle.final_time": _Entry("0.1", _float, "comparison time"),
    # -- monotone truncation experiment --------------------------------------
    "approx.levels": _Entry("2 4 8 16", _floats, "truncation levels"),
    # -- very singular limit -------------------------------------------------
    "limit.kappas": _Entry("1 2 4 8", _floats, "spike masses"),
    "limit.t_star": _Entry("0.25", _float, "comparison time"),
}

_SENTINEL = object()


@dataclass(frozen=True)
class Config:
    """Typed view of a fully resolved configuration."""

    values: dict

    def get(self, key: str, fallback=_SENTINEL):
        if key not in DEFAULTS:
            if fallback is _SENTINEL:
                raise ConfigError(f"unknown configuration key {key!r}")
            return fallback
        return self.values[key]


def default_config_text(
    overlay: dict[str, str] | None = None, command: str | None = None
) -> str:
    """Render the effective defaults in the accepted file format.

    `overlay` holds subcommand-specific defaults (regimes differ per task, so
    one global q cannot satisfy every command); the rendered file is exactly
    the base a run started from before --config and flag overrides.
    """

    lines = ["# Default configuration.  Override any line in a file passed"]
    lines.append("# via --config; unknown keys are rejected.")
    if command is not None:
        lines.append(f"# Includes the '{command}' subcommand defaults.")
    overlay = overlay or {}
    section = None
    for key, entry in DEFAULTS.items():
        head = key.split(".", 1)[0]
        if head != section:
            lines.append("")
            section = head
        lines.append(f"{key} = {overlay.get(key, entry.default)}  # {entry.comment}")
    lines.append("")
    return "\n".join(lines)


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """Parse ``section.key = value`` lines into a raw string mapping."""

    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(
                f"{source}:{lineno}: expected 'section.key = value', got {line!r}"
            )
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.split("#", 1)[0].strip()
        if key not in DEFAULTS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        raw[key] = value
    return raw


def load_config(
    path: str | None = None,
    overrides: dict[str, str] | None = None,
    overlay: dict[str, str] | None = None,
) -> Config:
    """Resolve defaults, an overlay, an optional file, then flag overrides."""

    merged = {key: entry.default for key, entry in DEFAULTS.items()}
    for key, value in (overlay or {}).items():
        if key not in DEFAULTS:
            raise ConfigError(f"unknown configuration key {key!r}")
        merged[key] = value
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
        merged.update(parse_config_text(text, source=path))
    for key, value in (overrides or {}).items():
        if key not in DEFAULTS:
            raise ConfigError(f"unknown configuration key {key!r}")
        merged[key] = value
    values: dict[str, object] = {}
    for key, raw in merged.items():
        try:
            values[key] = DEFAULTS[key].convert(raw)
        except ConfigError as exc:
            raise ConfigError(f"key {key!r}: {exc}") from exc
    return Config(values=values)


def datum_from_config(cfg: Config) -> InitialDatum:
    kind = cfg.get("datum.kind")
    cap = cfg.get("datum.cap")
    if kind == "constant":
        return initial_data.constant(cfg.get("datum.coeff"), cap=cap)
    if kind == "bump":
        return initial_data.bump(
            cfg.get("datum.coeff"), cfg.get("datum.width"), cap=cap
        )
    if kind == "dirac":
        return initial_data.dirac(
            cfg.get("datum.coeff"), cfg.get("datum.eps"), cap=cap
        )
    if kind == "power_singular":
        return initial_data.power_singular(
            cfg.get("datum.coeff"), cfg.get("datum.gamma"), cap=cap
        )
    return initial_data.power_growth(
        cfg.get("datum.coeff"), cfg.get("datum.beta"), cap=cap
    )


def problem_from_config(cfg: Config) -> ProblemSpec:
    geometry = Geometry(
        kind=cfg.get("problem.kind"),
        dim=cfg.get("problem.dim"),
        half_width=cfg.get("problem.half_width"),
        cells=cfg.get("problem.cells"),
    )
    return ProblemSpec(
        geometry=geometry,
        q=cfg.get("problem.q"),
        nu=cfg.get("problem.nu"),
        datum=datum_from_config(cfg),
        final_time=cfg.get("problem.final_time"),
        snapshots=tuple(cfg.get("problem.snapshots")),
        boundary=cfg.get("problem.boundary"),
        cfl_safety=cfg.get("problem.cfl_safety"),
    )
