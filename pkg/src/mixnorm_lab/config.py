"""Plain-text configuration for the command-line runner.

Files use INI syntax (``[section]`` headers, ``key = value`` lines, ``#``
comments).  Vectors are comma-separated; ``inf`` is accepted as an exponent.
Every key has a default, so an empty file (or no file) is valid.  See the
README for the full key reference.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field

__all__ = ["ConfigError", "ExperimentConfig", "load_config"]


class ConfigError(ValueError):
    """Unreadable or inconsistent configuration."""


def _floats(text: str) -> tuple:
    try:
        return tuple(float(v.strip()) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text: str) -> tuple:
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise ConfigError(f"expected integers, got {text!r}")
    return tuple(int(v) for v in vals)


@dataclass
class ExperimentConfig:
    """Parsed configuration with shipped defaults (one-dimensional setup)."""

    n: int = 1
    seed: int = 1234
    a: tuple = (1.0,)
    p: tuple = (2.0,)
    q: float = 2.0
    s: float = 0.0
    alpha: float = 0.0
    t: tuple = (2.0,)
    smoothness: int = 3
    kind: str = "triebel-lizorkin"
    dims: tuple = (256,)
    extents: tuple = (16.0,)
    J: int | None = None
    plateau: float = 1.0
    support: float = 2.0
    j_max: int = 6
    resolution: int = 128
    geometry: str = "punctured"
    refine: bool = True
    count: int = 8
    bumps: int = 3
    resolutions: tuple = ()
    equivalence: bool = True
    norm_input: str = ""
    norm_kinds: tuple = ("triebel-lizorkin", "besov")
    raw: dict = field(default_factory=dict)

    def validate(self) -> "ExperimentConfig":
        checks = [
            (len(self.a) == self.n, "anisotropy length must equal n"),
            (len(self.p) == self.n, "p length must equal n"),
            (len(self.t) == self.n, "t length must equal n"),
            (len(self.dims) == self.n, "grid dims length must equal n"),
            (len(self.extents) == self.n, "grid extents length must equal n"),
            (all(v >= 1 for v in self.a), "anisotropy entries must be >= 1"),
            (all(v > 0 for v in self.p), "p entries must be positive"),
            (self.q > 0, "q must be positive"),
            (all(d >= 2 for d in self.dims), "grid dims must be >= 2"),
            (all(e > 0 for e in self.extents), "grid extents must be positive"),
            (self.smoothness >= 1, "N must be a positive integer"),
            (self.j_max >= 0, "audit j_max must be >= 0"),
            (self.resolution >= 8 and self.resolution % 8 == 0,
             "audit resolution must be a multiple of 8"),
            (self.geometry in ("punctured", "paper", "enlarged"),
             "geometry must be punctured | paper | enlarged"),
            (self.count >= 1, "ensemble count must be >= 1"),
            (self.kind in ("triebel-lizorkin", "besov", "sobolev", "gen-sobolev"),
             "kind must be triebel-lizorkin | besov | sobolev | gen-sobolev"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ConfigError(msg)
        return self

    def as_dict(self) -> dict:
        def clean(v):
            if isinstance(v, tuple):
                return [clean(x) for x in v]
            if isinstance(v, float) and math.isinf(v):
                return "inf"
            return v

        skip = {"raw"}
        return {k: clean(v) for k, v in self.__dict__.items() if k not in skip}


def load_config(path: str | None, seed_override: int | None = None) -> ExperimentConfig:
    """Read an INI file into an ExperimentConfig (defaults when path is None)."""
    cfg = ExperimentConfig()
    if path is not None:
        parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse config {path!r}: {exc}") from exc

        def get(section, key, conv, default):
            if parser.has_option(section, key):
                text = parser.get(section, key).strip()
                if text == "":
                    return default
                try:
                    return conv(text)
                except ConfigError:
                    raise
                except ValueError as exc:
                    raise ConfigError(f"bad value for [{section}] {key}: {text!r}") from exc
            return default

        cfg.n = get("run", "n", int, cfg.n)
        cfg.seed = get("run", "seed", int, cfg.seed)
        # vector defaults track n when the file does not spell them out
        cfg.a = get("params", "a", _floats, (1.0,) * cfg.n)
        cfg.p = get("params", "p", _floats, (2.0,) * cfg.n)
        cfg.q = get("params", "q", float, cfg.q)
        cfg.s = get("params", "s", float, cfg.s)
        cfg.alpha = get("params", "alpha", float, cfg.alpha)
        cfg.t = get("params", "t", _floats, (2.0,) * cfg.n)
        cfg.smoothness = get("params", "N", int, cfg.smoothness)
        cfg.kind = get("params", "kind", str, cfg.kind)
        default_dims = {1: (256,), 2: (64, 64), 3: (32, 32, 32)}.get(cfg.n, (16,) * cfg.n)
        default_ext = (16.0,) if cfg.n == 1 else (8.0,) * cfg.n
        cfg.dims = get("grid", "dims", _ints, default_dims)
        cfg.extents = get("grid", "extents", _floats, default_ext)
        cfg.J = get("family", "J", int, cfg.J)
        cfg.plateau = get("family", "plateau", float, cfg.plateau)
        cfg.support = get("family", "support", float, cfg.support)
        cfg.j_max = get("audit", "j_max", int, cfg.j_max)
        cfg.resolution = get("audit", "resolution", int, cfg.resolution)
        cfg.geometry = get("audit", "geometry", str, cfg.geometry)
        cfg.refine = get("audit", "refine", lambda s: s.lower() in ("1", "true", "yes"),
                         cfg.refine)
        cfg.count = get("ensemble", "count", int, cfg.count)
        cfg.bumps = get("ensemble", "bumps", int, cfg.bumps)
        cfg.resolutions = get("experiment", "resolutions", _ints, cfg.resolutions)
        cfg.equivalence = get("experiment", "equivalence",
                              lambda s: s.lower() in ("1", "true", "yes"), cfg.equivalence)
        cfg.norm_input = get("norm", "input", str, cfg.norm_input)
        cfg.norm_kinds = get("norm", "kinds",
                             lambda s: tuple(v.strip() for v in s.split(",") if v.strip()),
                             cfg.norm_kinds)
        cfg.raw = {s: dict(parser.items(s)) for s in parser.sections()}
    else:
        # defaults for n > 1 never arise without a file; nothing else to do
        pass
    if seed_override is not None:
        cfg.seed = int(seed_override)
    return cfg.validate()
