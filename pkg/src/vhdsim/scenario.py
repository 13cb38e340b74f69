"""Scenario configuration: dataclasses plus a validating JSON loader.

A scenario file is a UTF-8 JSON object. Field reference (times in seconds)::

    name            str, free text
    seed            int >= 0, required; the only source of randomness
    scheme          "cvhd" | "dvhd" | "tdvhd"
    method          "saw" | "topsis"
    duration        run length; events after it are not processed
    n_candidates    optional int; overrides every generated trigger's n_visible
    detection_interval  time after a connection at which delivered QoS is checked
    dwell_window    a handover this soon after the previous one is a repeat
    latency         {msg_transit, mt_compute, net_compute, trust_check, execution}
    traffic         {packet_size (bytes), packet_interval, loss_probability,
                     processing_delay, drop_during_handover (bool)}
    trust           {threshold, delta_plus, delta_minus, initial_lot, lot_min, lot_max}
    floor           QoS profile strictly worse than every required profile
    networks        [{id, technology: wifi|wimax, offered: QoS,
                      inflation (>= 1, 1 = honest), loss_probability (optional)}]
    profiles        {name: {application, required: QoS, weights: {delay, bandwidth, cost, jitter}}}
    terminals       [{id, profile, initial_network (optional),
                      triggers: [{time, visible: [ids]}, ...]
                             or {start, interval, jitter, n_visible}}]

A QoS profile is ``{delay, bandwidth, cost, jitter}`` with delay and jitter
in seconds, bandwidth in Mbit/s. Omitted optional sections take the defaults
of the matching dataclass below.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from pathlib import Path
from typing import Any

from .errors import ConfigInvalid, InputError
from .madm import Method
from .network import CRITERIA, CandidateNetwork, QosProfile, Technology, UserProfile, check_floor
from .trust import TrustParams


class Scheme(str, Enum):
    CVHD = "cvhd"
    DVHD = "dvhd"
    TDVHD = "tdvhd"


@dataclass(frozen=True)
class LatencyModel:
    msg_transit: float = 0.005
    mt_compute: float = 0.002
    net_compute: float = 0.002
    trust_check: float = 0.0
    execution: float = 0.0


@dataclass(frozen=True)
class TrafficModel:
    packet_size: int = 160
    packet_interval: float = 0.02
    loss_probability: float = 0.0
    processing_delay: float = 0.0005
    drop_during_handover: bool = True


@dataclass(frozen=True)
class NetworkConfig:
    network: CandidateNetwork
    inflation: float = 1.0
    loss_probability: float | None = None

    @property
    def id(self) -> str:
        return self.network.id


@dataclass(frozen=True)
class Trigger:
    time: float
    visible: tuple[str, ...]


@dataclass(frozen=True)
class GeneratedTriggers:
    start: float
    interval: float
    jitter: float
    n_visible: int


@dataclass(frozen=True)
class TerminalConfig:
    id: str
    profile: UserProfile
    triggers: tuple[Trigger, ...] | GeneratedTriggers
    initial_network: str | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int
    networks: tuple[NetworkConfig, ...]
    terminals: tuple[TerminalConfig, ...]
    floor: QosProfile
    scheme: Scheme = Scheme.TDVHD
    method: Method = Method.SAW
    duration: float = 60.0
    n_candidates: int | None = None
    detection_interval: float = 1.0
    dwell_window: float = 3.0
    latency: LatencyModel = field(default_factory=LatencyModel)
    traffic: TrafficModel = field(default_factory=TrafficModel)
    trust: TrustParams = field(default_factory=TrustParams)
    name: str = "scenario"

    def network(self, network_id: str) -> NetworkConfig:
        for net in self.networks:
            if net.id == network_id:
                return net
        raise KeyError(network_id)

    def with_overrides(self, **changes) -> "ScenarioConfig":
        """Copy with top-level fields replaced; string enums are coerced."""
        if "scheme" in changes and changes["scheme"] is not None:
            changes["scheme"] = Scheme(changes["scheme"])
        if "method" in changes and changes["method"] is not None:
            changes["method"] = Method(changes["method"])
        changes = {k: v for k, v in changes.items() if v is not None}
        new = replace(self, **changes)
        errors = validate(new)
        if errors:
            raise ConfigInvalid(errors)
        return new

    def trigger_schedule(self, terminal: TerminalConfig) -> list[Trigger]:
        """Concrete triggers for one terminal, generated from the seed if needed."""
        spec = terminal.triggers
        if not isinstance(spec, GeneratedTriggers):
            return [t for t in spec if t.time <= self.duration]
        rng = random.Random(f"{self.seed}/triggers/{terminal.id}")
        ids = [n.id for n in self.networks]
        n_visible = self.n_candidates if self.n_candidates is not None else spec.n_visible
        out = []
        t = spec.start + rng.uniform(0.0, spec.jitter)
        while t <= self.duration:
            visible = sorted(rng.sample(ids, n_visible), key=ids.index)
            out.append(Trigger(t, tuple(visible)))
            t += max(spec.interval + rng.uniform(-spec.jitter, spec.jitter), 1e-9)
        return out


def validate(config: ScenarioConfig) -> list[str]:
    """Cross-field checks on an assembled config; empty list means valid."""
    errors = []
    if not isinstance(config.seed, int) or isinstance(config.seed, bool) or config.seed < 0:
        errors.append("seed: must be a non-negative integer")
    for name in ("duration", "detection_interval", "dwell_window"):
        value = getattr(config, name)
        if not _is_time(value):
            errors.append(f"{name}: must be a finite number >= 0")
    for name in ("msg_transit", "mt_compute", "net_compute", "trust_check", "execution"):
        if not _is_time(getattr(config.latency, name)):
            errors.append(f"latency.{name}: must be a finite number >= 0")
    tr = config.traffic
    if not isinstance(tr.packet_size, int) or tr.packet_size <= 0:
        errors.append("traffic.packet_size: must be a positive integer")
    if not _is_time(tr.packet_interval) or tr.packet_interval <= 0:
        errors.append("traffic.packet_interval: must be > 0")
    if not _is_prob(tr.loss_probability):
        errors.append("traffic.loss_probability: must lie in [0, 1]")
    if not _is_time(tr.processing_delay):
        errors.append("traffic.processing_delay: must be a finite number >= 0")
    ids = [n.id for n in config.networks]
    if not ids:
        errors.append("networks: at least one network is required")
    if len(set(ids)) != len(ids):
        errors.append("networks: ids must be unique")
    for net in config.networks:
        if net.loss_probability is not None and not _is_prob(net.loss_probability):
            errors.append(f"networks.{net.id}.loss_probability: must lie in [0, 1]")
        if not (isinstance(net.inflation, (int, float)) and math.isfinite(net.inflation) and net.inflation >= 1):
            errors.append(f"networks.{net.id}.inflation: must be >= 1")
    if config.n_candidates is not None and not 1 <= config.n_candidates <= len(ids):
        errors.append(f"n_candidates: must lie in [1, {len(ids)}]")
    if not config.terminals:
        errors.append("terminals: at least one terminal is required")
    term_ids = [t.id for t in config.terminals]
    if len(set(term_ids)) != len(term_ids):
        errors.append("terminals: ids must be unique")
    for term in config.terminals:
        where = f"terminals.{term.id}"
        if term.initial_network is not None and term.initial_network not in ids:
            errors.append(f"{where}.initial_network: unknown network {term.initial_network!r}")
        try:
            check_floor(term.profile.required, config.floor)
        except InputError as exc:
            errors.append(f"floor: {exc} (profile of {term.id})")
        spec = term.triggers
        if isinstance(spec, GeneratedTriggers):
            if not (_is_time(spec.start) and _is_time(spec.jitter)) or not _is_time(spec.interval) or spec.interval <= 0:
                errors.append(f"{where}.triggers: start/jitter must be >= 0 and interval > 0")
            elif spec.jitter >= spec.interval:
                errors.append(f"{where}.triggers: jitter must be smaller than interval")
            if not 1 <= spec.n_visible <= len(ids):
                errors.append(f"{where}.triggers.n_visible: must lie in [1, {len(ids)}]")
        else:
            for k, trig in enumerate(spec):
                if not _is_time(trig.time):
                    errors.append(f"{where}.triggers[{k}].time: must be a finite number >= 0")
                if not trig.visible:
                    errors.append(f"{where}.triggers[{k}].visible: must name at least one network")
                unknown = [v for v in trig.visible if v not in ids]
                if unknown:
                    errors.append(f"{where}.triggers[{k}].visible: unknown networks {unknown}")
    return errors


def _is_time(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value) and value >= 0


def _is_prob(value) -> bool:
    return _is_time(value) and value <= 1


class _Reader:
    """Collects field-level diagnostics while pulling values out of raw JSON."""

    def __init__(self) -> None:
        self.errors: list[str] = []

    def section(self, data: Any, path: str, cls, required: bool = False) -> Any:
        if data is None:
            if required:
                self.errors.append(f"{path}: required")
                return None
            return cls()
        if not isinstance(data, dict):
            self.errors.append(f"{path}: must be an object")
            return cls()
        names = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - names)
        for key in unknown:
            self.errors.append(f"{path}.{key}: unknown field")
        try:
            return cls(**{k: v for k, v in data.items() if k in names})
        except (InputError, TypeError) as exc:
            self.errors.append(f"{path}: {exc}")
            return cls()

    def qos(self, data: Any, path: str) -> QosProfile | None:
        if not isinstance(data, dict):
            self.errors.append(f"{path}: must be an object with {', '.join(CRITERIA)}")
            return None
        extra = sorted(set(data) - set(CRITERIA))
        for key in extra:
            self.errors.append(f"{path}.{key}: unknown field")
        try:
            return QosProfile.from_dict(data)
        except (InputError, TypeError) as exc:
            self.errors.append(f"{path}: {exc}")
            return None


def scenario_from_dict(data: dict) -> ScenarioConfig:
    """Build and validate a config, reporting every bad field at once."""
    if not isinstance(data, dict):
        raise ConfigInvalid(["<root>: scenario must be a JSON object"])
    r = _Reader()
    known = {f.name for f in fields(ScenarioConfig)} | {"profiles"}
    for key in sorted(set(data) - known):
        r.errors.append(f"{key}: unknown field")

    seed = data.get("seed")
    if seed is None:
        r.errors.append("seed: required")
    elif not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        r.errors.append("seed: must be a non-negative integer")

    enums = {}
    for key, cls, default in (("scheme", Scheme, Scheme.TDVHD), ("method", Method, Method.SAW)):
        try:
            enums[key] = cls(data.get(key, default))
        except ValueError:
            choices = "|".join(c.value for c in cls)
            r.errors.append(f"{key}: must be one of {choices}")
            enums[key] = default

    latency = r.section(data.get("latency"), "latency", LatencyModel)
    traffic = r.section(data.get("traffic"), "traffic", TrafficModel)
    trust = r.section(data.get("trust"), "trust", TrustParams)
    floor = r.qos(data.get("floor"), "floor")

    networks = []
    raw_networks = data.get("networks")
    if not isinstance(raw_networks, list):
        r.errors.append("networks: must be a list")
        raw_networks = []
    for k, raw in enumerate(raw_networks):
        path = f"networks[{k}]"
        if not isinstance(raw, dict):
            r.errors.append(f"{path}: must be an object")
            continue
        for key in sorted(set(raw) - {"id", "technology", "offered", "inflation", "loss_probability"}):
            r.errors.append(f"{path}.{key}: unknown field")
        net_id = raw.get("id")
        if not isinstance(net_id, str) or not net_id:
            r.errors.append(f"{path}.id: must be a non-empty string")
            continue
        try:
            tech = Technology(raw.get("technology"))
        except ValueError:
            r.errors.append(f"{path}.technology: must be wifi or wimax")
            continue
        offered = r.qos(raw.get("offered"), f"{path}.offered")
        if offered is None:
            continue
        inflation = raw.get("inflation", 1.0)
        candidate = CandidateNetwork(net_id, tech, offered)
        if isinstance(inflation, (int, float)) and math.isfinite(inflation) and inflation > 1:
            candidate = candidate.with_inflation(float(inflation))
        networks.append(NetworkConfig(candidate, inflation, raw.get("loss_probability")))

    profiles: dict[str, UserProfile] = {}
    raw_profiles = data.get("profiles")
    if not isinstance(raw_profiles, dict) or not raw_profiles:
        r.errors.append("profiles: must be a non-empty object")
        raw_profiles = {}
    for name, raw in raw_profiles.items():
        path = f"profiles.{name}"
        if not isinstance(raw, dict):
            r.errors.append(f"{path}: must be an object")
            continue
        required = r.qos(raw.get("required"), f"{path}.required")
        weights = raw.get("weights")
        if not isinstance(weights, dict) or sorted(weights) != sorted(CRITERIA):
            r.errors.append(f"{path}.weights: must map each of {', '.join(CRITERIA)} to a weight")
            continue
        if required is None:
            continue
        try:
            profiles[name] = UserProfile(raw.get("application", name), required,
                                         tuple(weights[c] for c in CRITERIA))
        except (InputError, TypeError) as exc:
            r.errors.append(f"{path}.weights: {exc}")

    terminals = []
    raw_terminals = data.get("terminals")
    if not isinstance(raw_terminals, list):
        r.errors.append("terminals: must be a list")
        raw_terminals = []
    for k, raw in enumerate(raw_terminals):
        path = f"terminals[{k}]"
        if not isinstance(raw, dict):
            r.errors.append(f"{path}: must be an object")
            continue
        for key in sorted(set(raw) - {"id", "profile", "initial_network", "triggers"}):
            r.errors.append(f"{path}.{key}: unknown field")
        term_id = raw.get("id")
        if not isinstance(term_id, str) or not term_id:
            r.errors.append(f"{path}.id: must be a non-empty string")
            continue
        profile = profiles.get(raw.get("profile"))
        if profile is None:
            if raw_profiles and raw.get("profile") not in raw_profiles:
                r.errors.append(f"{path}.profile: unknown profile {raw.get('profile')!r}")
            continue
        triggers = _read_triggers(r, raw.get("triggers"), f"{path}.triggers")
        if triggers is None:
            continue
        terminals.append(TerminalConfig(term_id, profile, triggers, raw.get("initial_network")))

    if r.errors:
        raise ConfigInvalid(r.errors)

    config = ScenarioConfig(
        seed=seed,
        networks=tuple(networks),
        terminals=tuple(terminals),
        floor=floor,
        scheme=enums["scheme"],
        method=enums["method"],
        duration=data.get("duration", 60.0),
        n_candidates=data.get("n_candidates"),
        detection_interval=data.get("detection_interval", 1.0),
        dwell_window=data.get("dwell_window", 3.0),
        latency=latency,
        traffic=traffic,
        trust=trust,
        name=str(data.get("name", "scenario")),
    )
    errors = validate(config)
    if errors:
        raise ConfigInvalid(errors)
    return config


def _read_triggers(r: _Reader, raw: Any, path: str):
    if isinstance(raw, dict):
        extra = sorted(set(raw) - {"start", "interval", "jitter", "n_visible"})
        for key in extra:
            r.errors.append(f"{path}.{key}: unknown field")
        try:
            return GeneratedTriggers(
                start=raw.get("start", 0.0),
                interval=raw["interval"],
                jitter=raw.get("jitter", 0.0),
                n_visible=int(raw["n_visible"]),
            )
        except (KeyError, TypeError, ValueError):
            r.errors.append(f"{path}: generated triggers need interval and n_visible")
            return None
    if isinstance(raw, list):
        out = []
        for k, item in enumerate(raw):
            if not isinstance(item, dict) or "time" not in item or not isinstance(item.get("visible"), list):
                r.errors.append(f"{path}[{k}]: must be {{time, visible: [ids]}}")
                return None
            out.append(Trigger(item["time"], tuple(str(v) for v in item["visible"])))
        return tuple(sorted(out, key=lambda t: t.time))
    r.errors.append(f"{path}: must be a list of triggers or a generator object")
    return None


def load_scenario(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigInvalid([f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}"]) from None
    return scenario_from_dict(data)


SCENARIO_DIR = Path(__file__).parent / "scenarios"


def shipped_scenarios() -> dict[str, Path]:
    return {p.stem: p for p in sorted(SCENARIO_DIR.glob("*.json"))}
