"""QoS profiles, candidate networks and network quality values (NQV).

The four handover criteria always appear in the column order
``(delay, bandwidth, cost, jitter)``. Bandwidth is a benefit criterion and the
other three are costs in canonical mode.

Two evaluation styles are provided:

* set-based (``nqv_saw``, ``nqv_topsis_centralized``): one MADM run over the
  whole candidate set, as a terminal holding every candidate's parameters
  would do;
* per-candidate (``nqv_saw_distributed``, ``nqv_topsis_distributed``): each
  network scores itself against fixed anchors taken from the user profile,
  which is what lets a target network compute its own NQV in isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

from . import madm
from .errors import EmptyCandidateSet, EmptyList, InputError, InvalidFloor
from .madm import CriterionSpec, DecisionMatrix, Direction, Normalization

CRITERIA = ("delay", "bandwidth", "cost", "jitter")
DIRECTIONS = {
    "delay": Direction.COST,
    "bandwidth": Direction.BENEFIT,
    "cost": Direction.COST,
    "jitter": Direction.COST,
}

# Configuration that reproduces the normalized matrix printed for the worked
# voice example: delay, bandwidth and jitter scaled by the column maximum,
# cost by the column minimum (x / x_min). The same directions give the
# printed TOPSIS ideals (cost is the only "lower is better" column).
PAPER_COMPAT = (
    (Direction.BENEFIT, Normalization.MAX_RATIO),
    (Direction.BENEFIT, Normalization.MAX_RATIO),
    (Direction.COST, Normalization.INVERSE_MIN_RATIO),
    (Direction.BENEFIT, Normalization.MAX_RATIO),
)


class Technology(str, Enum):
    WIFI = "wifi"
    WIMAX = "wimax"


@dataclass(frozen=True)
class QosProfile:
    """Delay and jitter in seconds, cost in abstract units, bandwidth in Mbit/s."""

    delay: float
    bandwidth: float
    cost: float
    jitter: float

    def __post_init__(self) -> None:
        for name in CRITERIA:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
                raise InputError(f"QoS {name} must be finite and > 0, got {value!r}")
            object.__setattr__(self, name, float(value))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.delay, self.bandwidth, self.cost, self.jitter)

    def improved(self, factor: float) -> "QosProfile":
        """Uniformly better profile: bandwidth times ``factor``, costs divided by it."""
        if factor <= 0:
            raise InputError("inflation factor must be > 0")
        return QosProfile(
            delay=self.delay / factor,
            bandwidth=self.bandwidth * factor,
            cost=self.cost / factor,
            jitter=self.jitter / factor,
        )

    def to_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in CRITERIA}

    @classmethod
    def from_dict(cls, data: dict) -> "QosProfile":
        missing = [k for k in CRITERIA if k not in data]
        if missing:
            raise InputError(f"QoS profile missing {', '.join(missing)}")
        return cls(**{k: data[k] for k in CRITERIA})


@dataclass(frozen=True)
class UserProfile:
    application: str
    required: QosProfile
    weights: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        weights = tuple(float(w) for w in self.weights)
        if len(weights) != len(CRITERIA):
            raise InputError(f"user profile needs {len(CRITERIA)} weights, got {len(weights)}")
        object.__setattr__(self, "weights", weights)
        madm.validate_weights(criterion_specs(self))


@dataclass(frozen=True)
class CandidateNetwork:
    """A target network; ``advertised`` differs from ``offered`` only for liars."""

    id: str
    technology: Technology
    offered: QosProfile
    advertised: QosProfile = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        object.__setattr__(self, "technology", Technology(self.technology))
        if self.advertised is None:
            object.__setattr__(self, "advertised", self.offered)

    @property
    def falsifying(self) -> bool:
        return self.advertised != self.offered

    def profile(self, use_advertised: bool = True) -> QosProfile:
        return self.advertised if use_advertised else self.offered

    def with_inflation(self, factor: float) -> "CandidateNetwork":
        return replace(self, advertised=self.offered.improved(factor))


@dataclass(frozen=True)
class Nqv:
    network_id: str
    value: float


def criterion_specs(profile: UserProfile, paper_compat: bool = False) -> list[CriterionSpec]:
    """Criterion specs for the four handover criteria under a user profile."""
    if paper_compat:
        return [
            CriterionSpec(name, direction, w, norm)
            for name, w, (direction, norm) in zip(CRITERIA, profile.weights, PAPER_COMPAT)
        ]
    return [CriterionSpec(name, DIRECTIONS[name], w) for name, w in zip(CRITERIA, profile.weights)]


def build_decision_matrix(
    candidates: Sequence[CandidateNetwork],
    profile: UserProfile | None = None,
    use_advertised: bool = True,
) -> DecisionMatrix:
    """One row per candidate, columns ``(delay, bandwidth, cost, jitter)``.

    ``profile`` is accepted for symmetry with the NQV functions; required
    values act only as anchors elsewhere and never enter the matrix.
    """
    if not candidates:
        raise EmptyCandidateSet("no candidate networks")
    rows = [c.profile(use_advertised).as_tuple() for c in candidates]
    return DecisionMatrix([c.id for c in candidates], rows)


def nqv_saw(
    candidates: Sequence[CandidateNetwork],
    profile: UserProfile,
    specs: Sequence[CriterionSpec] | None = None,
    use_advertised: bool = True,
) -> list[Nqv]:
    matrix = build_decision_matrix(candidates, profile, use_advertised)
    specs = list(specs) if specs is not None else criterion_specs(profile)
    scores = madm.saw_scores(madm.normalize(matrix, specs), specs)
    return [Nqv(c.id, float(s)) for c, s in zip(candidates, scores)]


def nqv_topsis_centralized(
    candidates: Sequence[CandidateNetwork],
    profile: UserProfile,
    specs: Sequence[CriterionSpec] | None = None,
    use_advertised: bool = True,
) -> list[Nqv]:
    if len(candidates) < 2:
        raise InputError("set-based TOPSIS needs at least two candidates")
    matrix = build_decision_matrix(candidates, profile, use_advertised)
    specs = list(specs) if specs is not None else criterion_specs(profile)
    result = madm.topsis(matrix, specs)
    return [Nqv(c.id, float(v)) for c, v in zip(candidates, result.closeness)]


def check_floor(required: QosProfile, floor: QosProfile) -> None:
    """Raise InvalidFloor unless ``floor`` is strictly worse on every criterion."""
    bad = []
    for name in CRITERIA:
        req, low = getattr(required, name), getattr(floor, name)
        worse = low < req if DIRECTIONS[name] is Direction.BENEFIT else low > req
        if not worse:
            bad.append(name)
    if bad:
        raise InvalidFloor(f"floor is not strictly worse than required on: {', '.join(bad)}")


def nqv_topsis_distributed(
    candidate: CandidateNetwork,
    profile: UserProfile,
    floor: QosProfile,
    use_advertised: bool = True,
) -> Nqv:
    """Closeness of one network to the required profile, relative to a floor.

    Each criterion is mapped linearly so the floor sits at 0 and the required
    value at 1, then clipped to that interval: exceeding the requirement earns
    nothing extra and falling below the floor costs nothing extra. The
    weighted vector is compared with the ideal ``w`` and anti-ideal ``0``.
    """
    check_floor(profile.required, floor)
    offered = candidate.profile(use_advertised)
    s_plus = s_minus = 0.0
    for name, w in zip(CRITERIA, profile.weights):
        req, low, x = getattr(profile.required, name), getattr(floor, name), getattr(offered, name)
        u = min(1.0, max(0.0, (x - low) / (req - low)))
        s_plus += (w * (1.0 - u)) ** 2
        s_minus += (w * u) ** 2
    s_plus, s_minus = math.sqrt(s_plus), math.sqrt(s_minus)
    return Nqv(candidate.id, s_minus / (s_plus + s_minus))


def nqv_saw_distributed(candidate: CandidateNetwork, profile: UserProfile, use_advertised: bool = True) -> Nqv:
    """Weighted sum of ratios against the required profile.

    Benefit criteria score ``offered / required`` and cost criteria
    ``required / offered``, so meeting the requirement exactly scores 1 and
    beating it scores above 1.
    """
    offered = candidate.profile(use_advertised)
    total = 0.0
    for name, w in zip(CRITERIA, profile.weights):
        req, x = getattr(profile.required, name), getattr(offered, name)
        total += w * (x / req if DIRECTIONS[name] is Direction.BENEFIT else req / x)
    return Nqv(candidate.id, total)


def select_best(nqvs: Sequence[Nqv]) -> str:
    """Id of the highest NQV; ties go to the smallest id."""
    if not nqvs:
        raise EmptyList("no NQVs to choose from")
    return rank_nqvs(nqvs)[0]


def rank_nqvs(nqvs: Sequence[Nqv]) -> list[str]:
    ranking = madm.rank_alternatives([n.value for n in nqvs], [n.network_id for n in nqvs])
    return ranking.ids
