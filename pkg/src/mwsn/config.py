"""Run configuration: defaults, ``key=value`` files and flag overrides."""
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import ConfigError
from .scattering import ScatteringConfig

# config-file spellings accepted besides the field names
ALIASES = {
    "scales": "J",
    "rate-u": "r_u",
    "rate_u": "r_u",
    "rate-s": "r_s",
    "rate_s": "r_s",
    "pca-k": "pca_k",
    "c-reg": "C",
    "c_reg": "C",
}


def default_workers():
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


@dataclass(frozen=True)
class RunConfig:
    J: int = 4
    r_u: int = 2
    r_s: int = 2
    crop: int = 200
    pca_k: int = 30
    folds: int = 2
    repeats: int = 10
    C: float = 1.0
    seed: int = 0
    workers: int = 0  # 0: use every available core

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "C":
                if not v > 0:
                    raise ConfigError(f"C must be positive, got {v!r}")
            elif f.name in ("seed", "workers"):
                if v < 0:
                    raise ConfigError(f"{f.name} must be >= 0, got {v!r}")
            elif v < 1:
                raise ConfigError(f"{f.name} must be >= 1, got {v!r}")

    @property
    def scattering(self):
        return ScatteringConfig(J=self.J, r_u=self.r_u, r_s=self.r_s)

    @property
    def n_workers(self):
        return self.workers or default_workers()

    def merged(self, **overrides):
        """Copy with every non-``None`` override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def _coerce(name, text):
    kind = {f.name: f.type for f in fields(RunConfig)}[name]
    try:
        return float(text) if kind in (float, "float") else int(text)
    except ValueError:
        raise ConfigError(f"bad value for {name}: {text!r}") from None


def parse_config_text(text, origin="<config>"):
    """Parse ``key=value`` lines into a dict of :class:`RunConfig` fields."""
    known = {f.name for f in fields(RunConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        key = ALIASES.get(key, ALIASES.get(key.lower(), key))
        if not sep or key not in known:
            raise ConfigError(f"{origin}:{lineno}: unknown or malformed entry {raw!r}")
        values[key] = _coerce(key, value)
    return values


def load_config(path=None, **overrides):
    """Defaults, then the file at ``path`` (if any), then ``overrides``."""
    base = RunConfig()
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        base = replace(base, **parse_config_text(text, str(path)))
    return base.merged(**overrides)
