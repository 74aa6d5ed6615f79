"""
Scenario files: flat ``key = value`` text with explicit units.

Two sections are recognised.  ``[scenario]`` holds the system and the
targets, with transmit powers given in dB (the only place dB appears);
``[sweep]`` names the swept axis and its values.  Example::

    [scenario]
    name = power_user1_heavy
    pt_db = 5
    t1_th = 300
    t2_th = 200
    schemes = rsma, noma12, noma21, fdma, tdma

    [sweep]
    axis = pt_db
    start = 0
    stop = 10
    num = 10

Every key not listed in ``_SCENARIO_KEYS``/``_SWEEP_KEYS`` is rejected,
so typos surface as errors naming the offending field.
"""

import configparser
import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .channel import SystemParams, db_to_linear
from .errors import DomainError, ScenarioError
from .oracle import SCHEMES as OPT_SCHEMES
from .reliability import StreamReliability, ThroughputTargets

REGION_SCHEMES = ("rsma", "noma12", "noma21", "fdma", "tdma", "mac")
SWEEP_AXES = ("pt_db", "eps", "n", "none")

_SCENARIO_KEYS = {
    "name", "g1", "g2", "noise_var", "n_min", "n_max", "eps", "eps11", "eps12", "eps22",
    "t1_th", "t2_th", "schemes", "pt_db", "p1_db", "p2_db", "n_list", "num_points",
    "power_steps", "alpha_rule",
}
_SWEEP_KEYS = {"axis", "start", "stop", "num", "scale", "values"}


@dataclass(frozen=True)
class SweepSpec:
    axis: str = "none"
    values: tuple = ()

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ScenarioError("sweep.axis", f"must be one of {SWEEP_AXES}, got {self.axis!r}")
        if self.axis != "none":
            if len(self.values) == 0:
                raise ScenarioError("sweep.values", "sweep is empty")
            if any(b <= a for a, b in zip(self.values, self.values[1:])):
                raise ScenarioError("sweep.values", "sweep values must be strictly increasing")


@dataclass(frozen=True)
class Scenario:
    """Everything an experiment needs; powers are stored in dB."""

    name: str = "default"
    g1: float = 1.0
    g2: float = 0.7
    noise_var: float = 1.0
    n_min: float = 100.0
    n_max: float = 3000.0
    reliability: StreamReliability = field(default_factory=StreamReliability)
    targets: ThroughputTargets = field(default_factory=ThroughputTargets)
    schemes: tuple = ("rsma", "noma12", "noma21", "fdma", "tdma")
    pt_db: tuple = (5.0,)
    p1_db: float = None
    p2_db: float = None
    n_list: tuple = (500.0, 1000.0, 2000.0, math.inf)
    num_points: int = 201
    power_steps: int = 64
    alpha_rule: object = "power_ratio"
    sweep: SweepSpec = field(default_factory=SweepSpec)

    def system(self, pt_db=None):
        """:class:`SystemParams` at transmit budget ``pt_db`` (default: the first listed)."""
        pt = self.pt_db[0] if pt_db is None else pt_db
        return SystemParams(self.g1, self.g2, self.noise_var, float(db_to_linear(pt)), self.n_min, self.n_max)

    def user_powers(self, pt_db=None):
        """Per-user transmit powers (linear) for the region experiment."""
        pt = self.pt_db[0] if pt_db is None else pt_db
        p1 = pt if self.p1_db is None else self.p1_db
        p2 = pt if self.p2_db is None else self.p2_db
        return float(db_to_linear(p1)), float(db_to_linear(p2))

    def with_sweep_point(self, axis, value):
        """Copy of the scenario with one sweep coordinate applied."""
        if axis == "pt_db":
            return replace(self, pt_db=(float(value),))
        if axis == "eps":
            return replace(self, reliability=StreamReliability.uniform(float(value)))
        raise DomainError(f"cannot apply sweep axis {axis!r} to a scenario")

    def to_dict(self):
        d = asdict(self)
        d["n_list"] = [_num_out(x) for x in self.n_list]
        return d

    @property
    def hash(self):
        """Short content hash; identical files always give the same value."""
        blob = json.dumps(self.to_dict(), sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def _num_out(x):
    return "inf" if x == math.inf else x


def _float(section, key, raw):
    try:
        value = float(raw)
    except ValueError:
        raise ScenarioError(f"{section}.{key}", f"not a number: {raw!r}") from None
    if math.isnan(value):
        raise ScenarioError(f"{section}.{key}", "NaN is not allowed")
    return value


def _floats(section, key, raw):
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    return tuple(_float(section, key, p) for p in parts)


def _positive(section, key, value):
    if not value > 0:
        raise ScenarioError(f"{section}.{key}", f"must be positive, got {value}")
    return value


def _sweep_values(sec):
    get = sec.get
    if "values" in sec:
        return _floats("sweep", "values", get("values"))
    missing = [k for k in ("start", "stop", "num") if k not in sec]
    if missing:
        raise ScenarioError(f"sweep.{missing[0]}", "required unless 'values' is given")
    start = _float("sweep", "start", get("start"))
    stop = _float("sweep", "stop", get("stop"))
    num = _float("sweep", "num", get("num"))
    if num < 1 or num != int(num):
        raise ScenarioError("sweep.num", f"must be a positive integer, got {get('num')}")
    if stop < start:
        raise ScenarioError("sweep.stop", "stop lies below start")
    scale = get("scale", "lin").strip()
    if scale == "lin":
        vals = np.linspace(start, stop, int(num))
    elif scale == "log":
        if start <= 0:
            raise ScenarioError("sweep.start", "log sweep needs a positive start")
        vals = np.geomspace(start, stop, int(num))
    else:
        raise ScenarioError("sweep.scale", f"must be 'lin' or 'log', got {scale!r}")
    return tuple(float(v) for v in vals)


def parse_scenario(text, source="<string>"):
    """Build a :class:`Scenario` from scenario-file text.

    Raises:
        ScenarioError: naming the offending ``section.key``.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ScenarioError("file", str(exc).splitlines()[0]) from None
    extra = set(cp.sections()) - {"scenario", "sweep"}
    if extra:
        raise ScenarioError(sorted(extra)[0], "unknown section")
    if "scenario" not in cp:
        raise ScenarioError("scenario", "missing [scenario] section")
    sec = cp["scenario"]
    for key in sec:
        if key not in _SCENARIO_KEYS:
            raise ScenarioError(f"scenario.{key}", "unknown key")

    kw = {}
    if "name" in sec:
        kw["name"] = sec["name"].strip()
    for key in ("g1", "g2", "noise_var", "n_min", "n_max"):
        if key in sec:
            kw[key] = _positive("scenario", key, _float("scenario", key, sec[key]))

    eps = {}
    if "eps" in sec:
        eps = dict.fromkeys(("eps11", "eps12", "eps22"), _float("scenario", "eps", sec["eps"]))
    for key in ("eps11", "eps12", "eps22"):
        if key in sec:
            eps[key] = _float("scenario", key, sec[key])
    for key, value in eps.items():
        if not 0 < value < 1:
            raise ScenarioError(f"scenario.{key}", f"must lie in (0, 1), got {value}")
    kw["reliability"] = StreamReliability(**eps)

    t = {}
    for key in ("t1_th", "t2_th"):
        if key in sec:
            t[key] = _float("scenario", key, sec[key])
            if t[key] < 0:
                raise ScenarioError(f"scenario.{key}", "threshold must be non-negative")
    kw["targets"] = ThroughputTargets(**t)

    if "schemes" in sec:
        schemes = tuple(s.strip().lower() for s in sec["schemes"].split(",") if s.strip())
        for s in schemes:
            if s not in REGION_SCHEMES:
                raise ScenarioError("scenario.schemes", f"unknown scheme {s!r}")
        kw["schemes"] = schemes
    if "pt_db" in sec:
        kw["pt_db"] = _floats("scenario", "pt_db", sec["pt_db"])
        if not kw["pt_db"]:
            raise ScenarioError("scenario.pt_db", "empty list")
    for key in ("p1_db", "p2_db"):
        if key in sec:
            kw[key] = _float("scenario", key, sec[key])
    if "n_list" in sec:
        kw["n_list"] = tuple(_positive("scenario", "n_list", v) for v in _floats("scenario", "n_list", sec["n_list"]))
    for key in ("num_points", "power_steps"):
        if key in sec:
            v = _float("scenario", key, sec[key])
            if v < 2 or v != int(v):
                raise ScenarioError(f"scenario.{key}", f"must be an integer >= 2, got {sec[key]}")
            kw[key] = int(v)
    if "alpha_rule" in sec:
        rule = sec["alpha_rule"].strip()
        if rule not in ("power_ratio", "optimized"):
            rule = _float("scenario", "alpha_rule", rule)
            if not 0 < rule < 1:
                raise ScenarioError("scenario.alpha_rule", "a fixed split must lie in (0, 1)")
        kw["alpha_rule"] = rule

    if "sweep" in cp:
        sw = cp["sweep"]
        for key in sw:
            if key not in _SWEEP_KEYS:
                raise ScenarioError(f"sweep.{key}", "unknown key")
        axis = sw.get("axis", "none").strip()
        if axis not in SWEEP_AXES:
            raise ScenarioError("sweep.axis", f"must be one of {SWEEP_AXES}, got {axis!r}")
        kw["sweep"] = SweepSpec(axis, _sweep_values(sw) if axis != "none" else ())

    try:
        scen = Scenario(**kw)
        scen.system()
    except DomainError as exc:
        raise ScenarioError("scenario", str(exc)) from None
    return scen


def load_scenario(path):
    """Read and parse a scenario file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError("file", f"cannot read {path}: {exc.strerror}") from None
    return parse_scenario(text, source=str(path))


def optimisation_schemes(scen):
    """Schemes of ``scen`` that have a blocklength solver (``mac`` is region-only)."""
    return tuple(s for s in scen.schemes if s in OPT_SCHEMES)
