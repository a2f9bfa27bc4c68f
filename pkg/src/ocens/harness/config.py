"""INI-style experiment configuration.

Example::

    [experiment]
    metric = OCF
    prior = 0.5
    seed = 7
    k_inner = 10
    output_dir = results

    [dataset:sep5]
    path = sep5.csv
    class_column = class

    [member:PGA]
    algorithm = PGA
    p_alpha = 0.01

    [meta]
    algorithm = DENSITY_AGG
    psi = harmonic
    s = 0.02

Without ``member:`` sections the default six-member pool is used; relative
paths resolve against the config file's directory.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from ..classifiers import ClassifierSpec, default_members
from ..combiners import RULES, default_meta_spec
from ..dataset_io import DEFAULT_MISSING
from ..estimation import DEFAULT_PRIOR, METRICS, OCF

ESBE = "ESBE"
TUPSO = "TUPSO"
RANDOM = "random_classifier"
ACTUAL_BEST = "actual_best"
ENSEMBLES = (RANDOM, ESBE) + RULES + (TUPSO, ACTUAL_BEST)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetConfig:
    name: str
    path: Path
    class_column: object = -1
    target: str | None = None
    delimiter: str = ","
    missing: tuple = DEFAULT_MISSING


@dataclass
class ExperimentConfig:
    datasets: list
    members: list = field(default_factory=default_members)
    ensembles: tuple = ENSEMBLES
    metric: str = OCF
    prior: float = DEFAULT_PRIOR
    seed: int = 0
    k_inner: int = 10
    meta_spec: ClassifierSpec = field(default_factory=default_meta_spec)
    output_dir: Path = Path("results")

    def __post_init__(self):
        if not self.datasets:
            raise ConfigError("at least one dataset is required")
        if not self.members:
            raise ConfigError("at least one member is required")
        if self.metric not in METRICS:
            raise ConfigError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if not 0.0 < self.prior <= 1.0:
            raise ConfigError(f"prior must lie in (0, 1], got {self.prior}")
        if self.k_inner < 2:
            raise ConfigError("k_inner must be >= 2")
        if self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")
        unknown = [e for e in self.ensembles if e not in ENSEMBLES]
        if unknown:
            raise ConfigError(f"unknown ensemble methods {unknown}")
        names = [m.name for m in self.members]
        if len(set(names)) != len(names):
            raise ConfigError(f"member names must be unique, got {names}")
        clash = set(names) & set(ENSEMBLES)
        if clash:
            raise ConfigError(f"member names clash with ensemble names: {sorted(clash)}")

    @property
    def methods(self):
        return [m.name for m in self.members] + list(self.ensembles)


def _coerce(text):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def _spec_from_section(name, section):
    params = {k: _coerce(v) for k, v in section.items() if k not in ("algorithm", "name")}
    try:
        return ClassifierSpec(section.get("algorithm", ""), params, section.get("name", name))
    except ValueError as exc:
        raise ConfigError(f"[{name}]: {exc}") from exc


def load_config(path):
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with path.open() as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    base = path.parent
    exp = parser["experiment"] if parser.has_section("experiment") else {}

    datasets, members = [], []
    meta_spec = default_meta_spec()
    for section in parser.sections():
        body = parser[section]
        if section.startswith("dataset:"):
            name = section.split(":", 1)[1].strip()
            if "path" not in body:
                raise ConfigError(f"[{section}] needs a path")
            p = Path(body["path"])
            class_column = _coerce(body.get("class_column", "-1"))
            missing = body.get("missing")
            datasets.append(DatasetConfig(
                name,
                p if p.is_absolute() else base / p,
                class_column,
                body.get("target") or None,
                body.get("delimiter", ","),
                tuple(m.strip() for m in missing.split("|")) if missing is not None else DEFAULT_MISSING,
            ))
        elif section.startswith("member:"):
            members.append(_spec_from_section(section.split(":", 1)[1].strip(), body))
        elif section == "meta":
            meta_spec = _spec_from_section("META", body)
        elif section != "experiment":
            raise ConfigError(f"unknown config section [{section}]")

    try:
        ensembles = exp.get("ensembles")
        out = Path(exp.get("output_dir", "results"))
        return ExperimentConfig(
            datasets=datasets,
            members=members or default_members(),
            ensembles=tuple(e.strip() for e in ensembles.split(",")) if ensembles else ENSEMBLES,
            metric=exp.get("metric", OCF),
            prior=float(exp.get("prior", DEFAULT_PRIOR)),
            seed=int(exp.get("seed", 0)),
            k_inner=int(exp.get("k_inner", 10)),
            meta_spec=meta_spec,
            output_dir=out if out.is_absolute() else base / out,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
