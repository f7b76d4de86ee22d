"""Experiment configuration: INI-style text files with sections.

A configuration file has an ``[experiment]`` section, one ensemble
section per ensemble (``[ensemble]``, or ``[ensemble.v]`` and
``[ensemble.w]`` for comparisons) and an optional ``[output]`` section::

    [experiment]
    kind = compare
    N = 100, 200, 400
    trials = 2000
    seed = 7
    region = edge
    vector_terms = 1:0:0

    [ensemble.v]
    name = wigner
    symmetry = real
    law = gaussian

    [ensemble.w]
    name = wigner
    symmetry = real
    law = rademacher

Any key can be overridden from the environment as
``WIGNERLAB_<SECTION>_<KEY>`` (section dots become underscores, e.g.
``WIGNERLAB_EXPERIMENT_TRIALS=5`` or ``WIGNERLAB_ENSEMBLE_V_LAW=gaussian``).
"""
from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, fields

from . import ensembles as ens

ENV_PREFIX = "WIGNERLAB_"
KINDS = ("sample", "locallaw", "rigidity", "deloc", "repulsion", "reconstruct", "compare", "gfct", "hs-check")
_SYMMETRY_ALIASES = {"real": ens.REAL, "complex": ens.COMPLEX, ens.REAL: ens.REAL, ens.COMPLEX: ens.COMPLEX}


class ConfigError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    return [float(x) for x in str(text).replace(";", ",").split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in str(text).replace(";", ",").split(",") if x.strip()]


def _fmt(value) -> str:
    if isinstance(value, (list, tuple)):
        return ", ".join(_fmt(v) for v in value)
    return repr(value) if isinstance(value, float) else str(value)


@dataclass(frozen=True)
class EnsembleDescription:
    """Serializable recipe for an :class:`~wignerlab.ensembles.EnsembleSpec` at any ``N``.

    ``name`` is ``gue``, ``goe``, ``goe_textbook`` or ``wigner``; for
    ``wigner`` the entry law, its parameters, the symmetry class and the
    variance profile are taken from the other fields.  ``law = matched``
    builds the three-point law with third and fourth moments ``m3``, ``m4``.
    """

    name: str = "gue"
    symmetry: str = ens.COMPLEX
    law: str = "gaussian"
    law_params: dict = field(default_factory=dict)
    profile: str = "wigner"
    profile_c: float = 0.5

    def law_object(self) -> ens.EntryLaw:
        p = self.law_params
        if self.law == "matched":
            return ens.match_moments(float(p["m3"]), float(p["m4"]))
        if self.law == "three_point":
            return ens.make_entry_law("three_point", a=float(p["a"]), p=float(p["p"]))
        if self.law == "discrete":
            return ens.make_entry_law("discrete", atoms=_floats(p["atoms"]), weights=_floats(p["weights"]))
        return ens.make_entry_law(self.law)

    def build(self, N: int) -> ens.EnsembleSpec:
        if self.name == "gue":
            return ens.gue(N)
        if self.name == "goe":
            return ens.goe(N)
        if self.name == "goe_textbook":
            return ens.goe_textbook(N)
        if self.name != "wigner":
            raise ConfigError(f"unknown ensemble name {self.name!r}")
        if self.profile == "band":
            prof = ens.make_variance_profile("band", N, c=self.profile_c)
        else:
            prof = ens.make_variance_profile(self.profile, N)
        label = f"wigner[{self.symmetry},{self.law}]"
        return ens.wigner_ensemble(N, self.law_object(), self.symmetry, prof, name=label)

    def to_dict(self) -> dict:
        d = {"name": self.name, "symmetry": self.symmetry, "law": self.law,
             "profile": self.profile, "profile_c": self.profile_c}
        d.update({f"law_{k}": str(v) for k, v in sorted(self.law_params.items())})
        return d

    @classmethod
    def from_dict(cls, d) -> "EnsembleDescription":
        d = {k.lower(): str(v).strip() for k, v in dict(d).items()}
        sym = d.get("symmetry", "complex" if d.get("name", "gue") == "gue" else "real")
        if sym not in _SYMMETRY_ALIASES:
            raise ConfigError(f"unknown symmetry class {sym!r}")
        params = {k[4:]: v for k, v in d.items() if k.startswith("law_")}
        try:
            desc = cls(d.get("name", "gue"), _SYMMETRY_ALIASES[sym], d.get("law", "gaussian"), params,
                       d.get("profile", "wigner"), float(d.get("profile_c", 0.5)))
            desc.build(64)  # validates law and profile parameters; size-dependent band limits are checked at run time
        except ConfigError:
            raise
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"invalid ensemble description {d}: {exc}") from exc
        return desc


@dataclass
class ExperimentConfig:
    kind: str = "sample"
    N_list: list = field(default_factory=lambda: [100])
    trials: int = 10
    seed: int = 0
    parallelism: int = 1
    eps: float = 0.05
    log_power: float = 2.0
    region: str = "edge"
    alpha_exps: list = field(default_factory=lambda: [0.1])  # repulsion window exponents
    energies: list = field(default_factory=list)  # repulsion grid; empty -> gamma_1 (edge) or gamma_{N/2}
    label: str = "1"  # eigenvalue label for reconstruct (may use N, e.g. N/2)
    i: int = 0
    j: int = 0
    c1: float = 2.0
    c2: float = 1.0
    recon_eps: float = 1.0
    vector_terms: list = field(default_factory=list)  # "alpha:i:j" strings
    value_terms: list = field(default_factory=list)
    theta: str = "first"  # first | sum
    E1: float = -2.0
    E2: float = -1.98
    eta_d: float = 1e-3
    resamples: int = 1000
    ks_threshold: float = 0.08
    max_violation_fraction: float = 0.01
    ensemble_v: EnsembleDescription = field(default_factory=EnsembleDescription)
    ensemble_w: EnsembleDescription | None = None
    out: str = ""
    csv: str = ""

    def validate(self) -> "ExperimentConfig":
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if not self.N_list:
            raise ConfigError("N list must be nonempty")
        if any(n < 2 or n > 20000 for n in self.N_list):
            raise ConfigError("every N must lie in [2, 20000]")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be at least 1")
        if not 0 < self.eps <= 1 or not 0 < self.recon_eps <= 2:
            raise ConfigError("eps must lie in (0, 1] and recon_eps in (0, 2]")
        if not 0 <= self.log_power <= 10 or not 0 <= self.c1 <= 10 or not 0 <= self.c2 <= 10:
            raise ConfigError("log powers must lie in [0, 10]")
        if self.region not in ("edge", "bulk"):
            raise ConfigError("region must be 'edge' or 'bulk'")
        if not self.alpha_exps or any(a <= 0 or a > 1 for a in self.alpha_exps):
            raise ConfigError("repulsion exponents must lie in (0, 1]")
        if self.resamples < 200:
            raise ConfigError("resamples must be at least 200")
        if not 0 < self.eta_d <= 1:
            raise ConfigError("eta_d must lie in (0, 1]")
        if self.E1 > self.E2:
            raise ConfigError("E1 must not exceed E2")
        if self.theta not in ("first", "sum"):
            raise ConfigError("theta must be 'first' or 'sum'")
        if self.kind in ("compare", "gfct") and self.ensemble_w is None:
            raise ConfigError(f"{self.kind} needs two ensembles ([ensemble.v] and [ensemble.w])")
        for t in self.vector_terms:
            if len(str(t).split(":")) != 3:
                raise ConfigError(f"vector term {t!r} must have the form alpha:i:j")
        return self

    # -- serialization -------------------------------------------------

    _LIST_INT = ("N_list",)
    _LIST_FLOAT = ("alpha_exps", "energies")
    _LIST_STR = ("vector_terms", "value_terms")
    _OUTPUT = ("out", "csv")

    def to_dict(self) -> dict:
        d = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, EnsembleDescription):
                v = v.to_dict()
            d[f.name] = v
        return d

    def to_ini(self) -> str:
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        cp["experiment"] = {}
        cp["output"] = {}
        for f in fields(self):
            if f.name.startswith("ensemble"):
                continue
            key = "N" if f.name == "N_list" else f.name
            sect = "output" if f.name in self._OUTPUT else "experiment"
            cp[sect][key] = _fmt(getattr(self, f.name))
        if self.ensemble_w is None:
            cp["ensemble"] = self.ensemble_v.to_dict()
        else:
            cp["ensemble.v"] = self.ensemble_v.to_dict()
            cp["ensemble.w"] = self.ensemble_w.to_dict()
        lines = []
        for sect in cp.sections():
            lines.append(f"[{sect}]")
            lines += [f"{k} = {v}" for k, v in cp[sect].items()]
            lines.append("")
        return "\n".join(lines)

    @classmethod
    def from_sections(cls, sections: dict) -> "ExperimentConfig":
        exp = dict(sections.get("experiment", {}))
        exp.update(sections.get("output", {}))
        kwargs = {}
        names = {f.name: f for f in fields(cls)}
        for key, raw in exp.items():
            name = "N_list" if key in ("N", "n", "N_list", "n_list") else key
            if name not in names or name.startswith("ensemble"):
                raise ConfigError(f"unknown configuration key {key!r}")
            default = names[name].default
            try:
                if name in cls._LIST_INT:
                    kwargs[name] = _ints(raw)
                elif name in cls._LIST_FLOAT:
                    kwargs[name] = _floats(raw)
                elif name in cls._LIST_STR:
                    kwargs[name] = [x.strip() for x in str(raw).split(",") if x.strip()]
                elif isinstance(default, bool):
                    kwargs[name] = str(raw).lower() in ("1", "true", "yes")
                elif isinstance(default, int):
                    kwargs[name] = int(raw)
                elif isinstance(default, float):
                    kwargs[name] = float(raw)
                else:
                    kwargs[name] = str(raw).strip()
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
        if "ensemble.v" in sections or "ensemble.w" in sections:
            kwargs["ensemble_v"] = EnsembleDescription.from_dict(sections.get("ensemble.v", {}))
            kwargs["ensemble_w"] = EnsembleDescription.from_dict(sections.get("ensemble.w", {}))
        elif "ensemble" in sections:
            kwargs["ensemble_v"] = EnsembleDescription.from_dict(sections["ensemble"])
        unknown = set(sections) - {"experiment", "output", "ensemble", "ensemble.v", "ensemble.w"}
        if unknown:
            raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
        return cls(**kwargs).validate()


def read_sections(text: str) -> dict:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed configuration: {exc}") from exc
    return {s: dict(cp[s]) for s in cp.sections()}


def apply_env(sections: dict, environ=None) -> dict:
    """Overlay ``WIGNERLAB_<SECTION>_<KEY>`` variables onto parsed sections."""
    environ = os.environ if environ is None else environ
    out = {s: dict(v) for s, v in sections.items()}
    known = ["ensemble.v", "ensemble.w", "experiment", "ensemble", "output"]
    for var, value in sorted(environ.items()):
        if not var.startswith(ENV_PREFIX):
            continue
        rest = var[len(ENV_PREFIX):]
        for sect in known:  # longest section names first
            tag = sect.replace(".", "_").upper() + "_"
            if rest.startswith(tag) and len(rest) > len(tag):
                key = rest[len(tag):]
                key = "N" if key == "N" else key.lower()
                if key == "e1" or key == "e2":
                    key = key.upper()
                out.setdefault(sect, {})[key] = value
                break
        else:
            raise ConfigError(f"environment variable {var} does not name a known section")
    return out


def load_config(path=None, text: str | None = None, overrides: dict | None = None,
                environ=None) -> ExperimentConfig:
    """File (or text), then environment, then ``overrides`` (experiment-section keys)."""
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    sections = read_sections(text or "")
    sections = apply_env(sections, environ)
    for k, v in (overrides or {}).items():
        if v is not None:
            sections.setdefault("output" if k in ("out", "csv") else "experiment", {})[k] = _fmt(v)
    return ExperimentConfig.from_sections(sections)
