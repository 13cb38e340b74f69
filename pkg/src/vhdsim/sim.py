"""Discrete-event vertical handover simulation.

Mobility is abstracted to a trigger schedule: at each trigger a terminal sees
a set of candidate networks and runs the decision scheme configured for the
scenario. Processing delay follows an analytic message/compute model:

* C-VHD: the terminal fetches raw parameters from each candidate in turn
  (N round trips) and computes N NQVs itself,
  ``2*N*msg_transit + N*mt_compute``.
* D-VHD: one broadcast, every candidate computes its own NQV in parallel and
  replies, then the terminal scans the replies,
  ``2*msg_transit + net_compute + mt_compute``.
* T-DVHD: D-VHD followed by the LOT gate (``+ trust_check``).

After a handover executes, delivered QoS is checked once
``detection_interval`` later. A failing network triggers a fresh decision that
excludes it; under T-DVHD the check also feeds the trust test.

Every event is logged; the metrics are computed from the log alone.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

from .madm import Method
from .network import CandidateNetwork, Nqv, UserProfile, nqv_saw_distributed, nqv_topsis_distributed, rank_nqvs
from .scenario import ScenarioConfig, Scheme, TerminalConfig
from .trust import Outcome, TrustDecision, TrustState, lot_gate, meets_requirement, trust_update


class EventKind(str, Enum):
    HANDOVER_TRIGGER = "HandoverTrigger"
    HANDOVER_REQUEST_SENT = "HandoverRequestSent"
    NQV_COMPUTED = "NqvComputed"
    NQV_RECEIVED = "NqvReceived"
    VN_SELECTED = "VnSelected"
    TRUST_GATE_PASSED = "TrustGatePassed"
    HANDOVER_EXECUTED = "HandoverExecuted"
    HANDOVER_BLOCKED = "HandoverBlocked"
    QOS_CHECKED = "QosChecked"
    PACKET_SENT = "PacketSent"
    PACKET_DELIVERED = "PacketDelivered"
    PACKET_LOST = "PacketLost"


class SimEvent(NamedTuple):
    """One log line.

    ``value`` holds the processing delay on VnSelected/HandoverBlocked, the
    end-to-end delay on PacketDelivered and the post-test LOT on QosChecked
    (T-DVHD only). ``size_bytes`` is the packet size on packet events and
    ``n_candidates`` the candidate count on decision events.
    """

    time: float
    seq: int
    kind: EventKind
    terminal: str
    network: str = ""
    size_bytes: int = 0
    value: float | None = None
    n_candidates: int = 0
    detail: str = ""


EVENT_FIELDS = SimEvent._fields


@dataclass(frozen=True)
class Decision:
    scheme: Scheme
    selected: str | None
    processing_delay: float
    nqvs: tuple[Nqv, ...]
    ranked: tuple[str, ...]
    trust: TrustDecision | None = None
    # (offset from decision start, kind, network id) for the message trace
    timeline: tuple[tuple[float, EventKind, str], ...] = ()

    @property
    def blocked(self) -> bool:
        return self.selected is None


def _profile(mt: TerminalConfig | UserProfile) -> UserProfile:
    return mt.profile if isinstance(mt, TerminalConfig) else mt


def compute_nqv(candidate: CandidateNetwork, profile: UserProfile, config: ScenarioConfig) -> Nqv:
    """NQV a candidate reports; always computed from the advertised profile."""
    if config.method is Method.TOPSIS:
        return nqv_topsis_distributed(candidate, profile, config.floor)
    return nqv_saw_distributed(candidate, profile)


def _require(candidates: Sequence[CandidateNetwork]) -> None:
    if not candidates:
        raise ValueError("decision needs at least one candidate network")


def decide_centralized(mt, candidates: Sequence[CandidateNetwork], config: ScenarioConfig) -> Decision:
    _require(candidates)
    profile = _profile(mt)
    lat = config.latency
    n = len(candidates)
    timeline = []
    for k, c in enumerate(candidates):
        timeline.append((2 * k * lat.msg_transit, EventKind.HANDOVER_REQUEST_SENT, c.id))
    fetched = 2 * n * lat.msg_transit
    nqvs = []
    for k, c in enumerate(candidates):
        nqvs.append(compute_nqv(c, profile, config))
        timeline.append((fetched + (k + 1) * lat.mt_compute, EventKind.NQV_COMPUTED, c.id))
    ranked = rank_nqvs(nqvs)
    delay = fetched + n * lat.mt_compute
    return Decision(Scheme.CVHD, ranked[0], delay, tuple(nqvs), tuple(ranked), timeline=tuple(timeline))


def decide_distributed(mt, candidates: Sequence[CandidateNetwork], config: ScenarioConfig) -> Decision:
    _require(candidates)
    profile = _profile(mt)
    lat = config.latency
    nqvs = [compute_nqv(c, profile, config) for c in candidates]
    timeline = [(0.0, EventKind.HANDOVER_REQUEST_SENT, c.id) for c in candidates]
    timeline += [(lat.msg_transit + lat.net_compute, EventKind.NQV_COMPUTED, c.id) for c in candidates]
    timeline += [(2 * lat.msg_transit + lat.net_compute, EventKind.NQV_RECEIVED, c.id) for c in candidates]
    ranked = rank_nqvs(nqvs)
    delay = 2 * lat.msg_transit + lat.net_compute + lat.mt_compute
    return Decision(Scheme.DVHD, ranked[0], delay, tuple(nqvs), tuple(ranked), timeline=tuple(timeline))


def decide_trusted(mt, candidates: Sequence[CandidateNetwork], config: ScenarioConfig,
                   trust: TrustState) -> Decision:
    """D-VHD's NQV exchange followed by the LOT gate over the ranked list.

    The trust snapshot is read when the decision starts. A blocked decision
    has ``selected`` set to None.
    """
    base = decide_distributed(mt, candidates, config)
    gate = lot_gate(base.ranked, trust, config.trust)
    delay = base.processing_delay + config.latency.trust_check
    timeline = base.timeline
    if gate.outcome is Outcome.CONNECT:
        timeline = timeline + ((delay, EventKind.TRUST_GATE_PASSED, gate.network_id),)
    return Decision(Scheme.TDVHD, gate.network_id, delay, base.nqvs, base.ranked, gate, timeline)


def decide(mt, candidates: Sequence[CandidateNetwork], config: ScenarioConfig,
           trust: TrustState | None = None) -> Decision:
    if config.scheme is Scheme.CVHD:
        return decide_centralized(mt, candidates, config)
    if config.scheme is Scheme.DVHD:
        return decide_distributed(mt, candidates, config)
    return decide_trusted(mt, candidates, config, trust if trust is not None else TrustState(config.trust))


@dataclass
class MetricsReport:
    """Evaluation metrics of one run; ``None`` marks a metric with no data."""

    processing_delay: float | None
    throughput: float | None
    end_to_end_delay: float | None
    handover_events: int
    packet_delivery_ratio: float | None
    repeat_handovers: int = 0
    decisions: int = 0
    blocked_handovers: int = 0
    generated_packets: int = 0
    delivered_packets: int = 0
    lost_packets: int = 0
    in_flight_packets: int = 0
    handovers: list[dict] = field(default_factory=list)

    METRIC_NAMES = ("processing_delay", "throughput", "end_to_end_delay", "handover_events",
                    "packet_delivery_ratio", "repeat_handovers")

    def to_dict(self) -> dict:
        return {
            "processing_delay": self.processing_delay,
            "throughput": self.throughput,
            "end_to_end_delay": self.end_to_end_delay,
            "handover_events": self.handover_events,
            "packet_delivery_ratio": self.packet_delivery_ratio,
            "repeat_handovers": self.repeat_handovers,
            "decisions": self.decisions,
            "blocked_handovers": self.blocked_handovers,
            "generated_packets": self.generated_packets,
            "delivered_packets": self.delivered_packets,
            "lost_packets": self.lost_packets,
            "in_flight_packets": self.in_flight_packets,
            "handovers": self.handovers,
        }


def _mean(values: list[float]) -> float | None:
    return math.fsum(values) / len(values) if values else None


def compute_metrics(events: Sequence[SimEvent], dwell_window: float = 3.0) -> MetricsReport:
    """Derive the run metrics from a complete event log.

    Throughput is total bytes sent times 8 over the span between the first
    and the last PacketSent; it is absent when fewer than two distinct send
    times exist. PDR divides delivered by generated packets.
    """
    sent_times: list[float] = []
    sent_bytes = 0
    delivered: list[float] = []
    lost = 0
    decision_delays: list[float] = []
    blocked = 0
    executed = 0
    repeats = 0
    last_handover: dict[str, float] = {}
    rows: list[dict] = []
    for ev in events:
        kind = ev.kind
        if kind is EventKind.PACKET_SENT:
            sent_times.append(ev.time)
            sent_bytes += ev.size_bytes
        elif kind is EventKind.PACKET_DELIVERED:
            delivered.append(ev.value)
        elif kind is EventKind.PACKET_LOST:
            lost += 1
        elif kind is EventKind.VN_SELECTED or kind is EventKind.HANDOVER_BLOCKED:
            decision_delays.append(ev.value)
            is_blocked = kind is EventKind.HANDOVER_BLOCKED
            blocked += is_blocked
            rows.append({
                "terminal": ev.terminal,
                "time": ev.time,
                "selected": ev.network or None,
                "outcome": "blocked" if is_blocked else ("stayed" if ev.detail == "stay" else "executed"),
                "processing_delay": ev.value,
                "n_candidates": ev.n_candidates,
                "repeat": False,
            })
        elif kind is EventKind.HANDOVER_EXECUTED:
            executed += 1
            prev = last_handover.get(ev.terminal)
            if prev is not None and ev.time - prev <= dwell_window:
                repeats += 1
                for row in reversed(rows):
                    if row["terminal"] == ev.terminal and row["outcome"] == "executed":
                        row["repeat"] = True
                        break
            last_handover[ev.terminal] = ev.time

    generated = len(sent_times)
    span = (max(sent_times) - min(sent_times)) if sent_times else 0.0
    return MetricsReport(
        processing_delay=_mean(decision_delays),
        throughput=sent_bytes * 8 / span if span > 0 else None,
        end_to_end_delay=_mean(delivered),
        handover_events=executed,
        packet_delivery_ratio=len(delivered) / generated if generated else None,
        repeat_handovers=repeats,
        decisions=len(decision_delays),
        blocked_handovers=blocked,
        generated_packets=generated,
        delivered_packets=len(delivered),
        lost_packets=lost,
        in_flight_packets=generated - len(delivered) - lost,
        handovers=rows,
    )


@dataclass
class _Terminal:
    config: TerminalConfig
    current: str | None
    busy: bool = False
    visible: tuple[str, ...] = ()
    epoch: int = 0
    last_handover: float | None = None


@dataclass
class SimulationResult:
    config: ScenarioConfig
    events: list[SimEvent]
    report: MetricsReport
    trust: dict[str, float]


class Simulation:
    """Single-threaded event loop; create one per run."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.networks = {n.id: n for n in config.networks}
        self.trust = TrustState(config.trust)
        self.terminals = [_Terminal(t, t.initial_network) for t in config.terminals]
        self._queue: list[tuple] = []
        self._seq = 0
        self.events: list[SimEvent] = []
        self._loss_rng = random.Random(f"{config.seed}/loss")
        self._jitter_rng = random.Random(f"{config.seed}/jitter")

    def _push(self, time: float, kind: EventKind, term: int, payload=None) -> None:
        heapq.heappush(self._queue, (time, self._seq, kind, term, payload))
        self._seq += 1

    def _log(self, time: float, seq: int, kind: EventKind, term: int, **kw) -> None:
        self.events.append(SimEvent(time, seq, kind, self.terminals[term].config.id, **kw))

    def run(self) -> SimulationResult:
        cfg = self.config
        interval = cfg.traffic.packet_interval
        for k, term in enumerate(self.terminals):
            for trig in cfg.trigger_schedule(term.config):
                self._push(trig.time, EventKind.HANDOVER_TRIGGER, k, ("scheduled", trig.visible))
            first_packet = k * interval / len(self.terminals)
            if first_packet <= cfg.duration:
                self._push(first_packet, EventKind.PACKET_SENT, k)

        handlers = {
            EventKind.HANDOVER_TRIGGER: self._on_trigger,
            EventKind.VN_SELECTED: self._on_selected,
            EventKind.HANDOVER_EXECUTED: self._on_executed,
            EventKind.HANDOVER_BLOCKED: self._on_blocked,
            EventKind.QOS_CHECKED: self._on_qos_check,
            EventKind.PACKET_SENT: self._on_packet_sent,
        }
        queue = self._queue
        while queue:
            time, seq, kind, term, payload = heapq.heappop(queue)
            if time > cfg.duration and kind is not EventKind.PACKET_DELIVERED:
                # past the horizon only packets already on the wire drain
                continue
            handler = handlers.get(kind)
            if handler is None:
                self._log_passive(time, seq, kind, term, payload)
            else:
                handler(time, seq, term, payload)

        report = compute_metrics(self.events, cfg.dwell_window)
        return SimulationResult(cfg, self.events, report, self.trust.snapshot())

    def _log_passive(self, time, seq, kind, term, payload) -> None:
        if kind is EventKind.PACKET_DELIVERED:
            network, size, e2e = payload
            self._log(time, seq, kind, term, network=network, size_bytes=size, value=e2e)
        elif kind is EventKind.PACKET_LOST:
            network, size, reason = payload
            self._log(time, seq, kind, term, network=network, size_bytes=size, detail=reason)
        else:
            self._log(time, seq, kind, term, network=payload or "")

    def _on_trigger(self, time, seq, term, payload) -> None:
        reason, visible = payload
        mt = self.terminals[term]
        if reason == "scheduled":
            mt.visible = visible
        if mt.busy:
            self._log(time, seq, EventKind.HANDOVER_TRIGGER, term, detail=f"{reason};ignored-busy")
            return
        ids = visible if reason == "scheduled" else tuple(v for v in mt.visible if v != mt.current)
        if not ids:
            self._log(time, seq, EventKind.HANDOVER_TRIGGER, term, detail=f"{reason};no-candidates")
            return
        candidates = [self.networks[i].network for i in ids]
        self._log(time, seq, EventKind.HANDOVER_TRIGGER, term, n_candidates=len(ids), detail=reason)
        decision = decide(mt.config, candidates, self.config, self.trust)
        mt.busy = True
        for offset, kind, network in decision.timeline:
            self._push(time + offset, kind, term, network)
        end = time + decision.processing_delay
        final = EventKind.HANDOVER_BLOCKED if decision.blocked else EventKind.VN_SELECTED
        self._push(end, final, term, (decision, len(ids)))

    def _on_selected(self, time, seq, term, payload) -> None:
        decision, n = payload
        mt = self.terminals[term]
        stay = decision.selected == mt.current
        self._log(time, seq, EventKind.VN_SELECTED, term, network=decision.selected,
                  value=decision.processing_delay, n_candidates=n, detail="stay" if stay else "handover")
        if stay:
            mt.busy = False
        else:
            self._push(time + self.config.latency.execution, EventKind.HANDOVER_EXECUTED, term, decision.selected)

    def _on_blocked(self, time, seq, term, payload) -> None:
        decision, n = payload
        self._log(time, seq, EventKind.HANDOVER_BLOCKED, term, value=decision.processing_delay,
                  n_candidates=n, detail="rejected=" + "|".join(decision.trust.rejected))
        self.terminals[term].busy = False

    def _on_executed(self, time, seq, term, network) -> None:
        mt = self.terminals[term]
        repeat = mt.last_handover is not None and time - mt.last_handover <= self.config.dwell_window
        self._log(time, seq, EventKind.HANDOVER_EXECUTED, term, network=network,
                  detail=f"from={mt.current or ''}" + (";repeat" if repeat else ""))
        mt.current = network
        mt.busy = False
        mt.epoch += 1
        mt.last_handover = time
        self._push(time + self.config.detection_interval, EventKind.QOS_CHECKED, term, (network, mt.epoch))

    def _on_qos_check(self, time, seq, term, payload) -> None:
        network, epoch = payload
        mt = self.terminals[term]
        if epoch != mt.epoch:
            self._log(time, seq, EventKind.QOS_CHECKED, term, network=network, detail="stale")
            return
        net = self.networks[network].network
        ok = meets_requirement(net.offered, mt.config.profile.required)
        lot = None
        if self.config.scheme is Scheme.TDVHD:
            lot = trust_update(network, net.offered, mt.config.profile.required, self.trust)
        self._log(time, seq, EventKind.QOS_CHECKED, term, network=network, value=lot,
                  detail="pass" if ok else "fail")
        if not ok:
            self._push(time, EventKind.HANDOVER_TRIGGER, term, ("qos", ()))

    def _on_packet_sent(self, time, seq, term, payload) -> None:
        cfg = self.config
        mt = self.terminals[term]
        size = cfg.traffic.packet_size
        network = mt.current or ""
        self._log(time, seq, EventKind.PACKET_SENT, term, network=network, size_bytes=size)
        nxt = time + cfg.traffic.packet_interval
        if nxt <= cfg.duration:
            self._push(nxt, EventKind.PACKET_SENT, term)

        if mt.current is None:
            self._push(time, EventKind.PACKET_LOST, term, (network, size, "no-network"))
            return
        if mt.busy and cfg.traffic.drop_during_handover:
            self._push(time, EventKind.PACKET_LOST, term, (network, size, "handover"))
            return
        net_cfg = self.networks[network]
        loss = net_cfg.loss_probability if net_cfg.loss_probability is not None else cfg.traffic.loss_probability
        if loss > 0 and self._loss_rng.random() < loss:
            self._push(time, EventKind.PACKET_LOST, term, (network, size, "link"))
            return
        offered = net_cfg.network.offered
        transmission = size * 8 / (offered.bandwidth * 1e6)
        propagation = offered.delay + self._jitter_rng.uniform(0.0, offered.jitter)
        e2e = transmission + propagation + cfg.traffic.processing_delay
        self._push(time + e2e, EventKind.PACKET_DELIVERED, term, (network, size, e2e))


def simulate(config: ScenarioConfig) -> SimulationResult:
    return Simulation(config).run()


def run_scenario(config: ScenarioConfig) -> MetricsReport:
    return simulate(config).report
