"""Level-of-trust (LOT) gate and post-handover trust test.

The gate walks NQV-ranked candidates and connects to the first one whose LOT
reaches the threshold; if none does the handover is blocked. After a
connection the trust test compares delivered quality with the requirement
and moves that network's LOT down by ``delta_minus`` on failure or up by
``delta_plus`` otherwise, clamped to ``[lot_min, lot_max]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import InputError, UnknownNetwork
from .network import QosProfile

# LOT values come from repeated +/- delta steps; absorb the float drift so
# e.g. 1.0 - 5 * 0.1 still counts as reaching a 0.5 threshold.
GATE_TOL = 1e-9


@dataclass(frozen=True)
class TrustParams:
    threshold: float = 0.5
    delta_plus: float = 0.1
    delta_minus: float = 0.1
    initial_lot: float = 1.0
    lot_min: float = 0.0
    lot_max: float = 1.0

    def __post_init__(self) -> None:
        for name in ("threshold", "delta_plus", "delta_minus", "initial_lot", "lot_min", "lot_max"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InputError(f"trust.{name} must be a finite number")
        if not 0 < self.threshold <= 1:
            raise InputError("trust.threshold must lie in (0, 1]")
        if self.delta_plus <= 0 or self.delta_minus <= 0:
            raise InputError("trust deltas must be > 0")
        if not self.lot_min <= self.initial_lot <= self.lot_max:
            raise InputError("trust.initial_lot must lie in [lot_min, lot_max]")
        if not self.lot_min <= self.threshold <= self.lot_max:
            raise InputError("trust.threshold must lie in [lot_min, lot_max]")

    def clamp(self, lot: float) -> float:
        return min(self.lot_max, max(self.lot_min, lot))


class TrustState:
    """Per-network LOT values for one simulation run.

    Networks seen for the first time are enrolled at ``initial_lot`` unless
    ``auto_enroll`` is off, in which case they raise :class:`UnknownNetwork`.
    Single writer: the simulation loop applies updates sequentially.
    """

    def __init__(self, params: TrustParams | None = None, auto_enroll: bool = True,
                 initial: dict[str, float] | None = None):
        self.params = params or TrustParams()
        self.auto_enroll = auto_enroll
        self._lot: dict[str, float] = {}
        for network_id, lot in (initial or {}).items():
            self.set(network_id, lot)

    def get(self, network_id: str) -> float:
        if network_id not in self._lot:
            if not self.auto_enroll:
                raise UnknownNetwork(network_id)
            self._lot[network_id] = self.params.initial_lot
        return self._lot[network_id]

    def set(self, network_id: str, lot: float) -> None:
        self._lot[network_id] = self.params.clamp(float(lot))

    def snapshot(self) -> dict[str, float]:
        return dict(sorted(self._lot.items()))

    def __contains__(self, network_id: str) -> bool:
        return network_id in self._lot

    def __repr__(self) -> str:
        return f"TrustState({self.snapshot()!r})"


class Outcome(str, Enum):
    CONNECT = "connect"
    TRY_NEXT = "try_next"
    BLOCKED = "blocked"


@dataclass(frozen=True)
class TrustDecision:
    outcome: Outcome
    network_id: str | None = None
    rejected: tuple[str, ...] = ()

    @classmethod
    def connect(cls, network_id: str, rejected: Iterable[str] = ()) -> "TrustDecision":
        return cls(Outcome.CONNECT, network_id, tuple(rejected))

    @classmethod
    def blocked(cls, rejected: Iterable[str] = ()) -> "TrustDecision":
        return cls(Outcome.BLOCKED, None, tuple(rejected))

    @property
    def connected(self) -> bool:
        return self.outcome is Outcome.CONNECT


def lot_test(network_id: str, state: TrustState, params: TrustParams | None = None) -> TrustDecision:
    """Single gate step: Connect if this network's LOT reaches the threshold, else TryNext."""
    params = params or state.params
    if state.get(network_id) >= params.threshold - GATE_TOL:
        return TrustDecision.connect(network_id)
    return TrustDecision(Outcome.TRY_NEXT, network_id)


def lot_gate(ranked: Sequence[str], state: TrustState, params: TrustParams | None = None) -> TrustDecision:
    """First network in ``ranked`` (best NQV first) that passes the LOT test."""
    if not ranked:
        raise InputError("lot_gate needs at least one ranked network")
    rejected = []
    for network_id in ranked:
        step = lot_test(network_id, state, params)
        if step.outcome is Outcome.CONNECT:
            return TrustDecision.connect(network_id, rejected)
        rejected.append(network_id)
    return TrustDecision.blocked(rejected)


def meets_requirement(offered: QosProfile, required: QosProfile) -> bool:
    """False if any criterion under-delivers: delay, jitter or cost above, bandwidth below."""
    return (
        offered.delay <= required.delay
        and offered.jitter <= required.jitter
        and offered.cost <= required.cost
        and offered.bandwidth >= required.bandwidth
    )


def trust_update(network_id: str, q_off: QosProfile, q_req: QosProfile,
                 state: TrustState, params: TrustParams | None = None) -> float:
    """Apply the trust test to ``state`` in place and return the new LOT."""
    params = params or state.params
    lot = state.get(network_id)
    if meets_requirement(q_off, q_req):
        lot += params.delta_plus
    else:
        lot -= params.delta_minus
    state.set(network_id, lot)
    return state.get(network_id)
