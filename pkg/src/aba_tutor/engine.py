"""Tutoring session state machine: token economy, follow-ups, and metrics.

All timestamps are caller-supplied monotonic seconds; the engine never reads
a wall clock. All randomness flows through one seeded generator, so the same
seed, pack, and answer script reproduce the same session exactly.
"""

from __future__ import annotations

import itertools
import random
import uuid
from dataclasses import dataclass, field
from typing import Optional, Union

from .content import ContentItem, ContentPack, Violation, validate_pack

PRAISE_CUE = "praise"
SOMBER_CUE = "somber"


class EngineError(Exception):
    code = "engine-error"


class InvalidPackError(EngineError):
    """Session start refused: the pack failed validation or is empty."""

    code = "invalid-pack"

    def __init__(self, violations: list[Violation], message: str = "pack failed validation"):
        super().__init__(message)
        self.violations = violations


class PromptOutstandingError(EngineError):
    code = "prompt-outstanding"


class NoOutstandingPromptError(EngineError):
    code = "no-outstanding-prompt"


class AnswerOutOfRangeError(EngineError):
    code = "answer-out-of-range"


class NonMonotonicTimestampError(EngineError):
    code = "non-monotonic-timestamp"


@dataclass(frozen=True)
class SessionConfig:
    tokens_per_reward: int = 5
    reward_duration_cap_s: float = 75.0
    idle_timeout_s: float = 120.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.tokens_per_reward < 1:
            raise ValueError("tokens_per_reward must be >= 1")
        if self.reward_duration_cap_s < 1:
            raise ValueError("reward_duration_cap_s must be >= 1")
        if self.idle_timeout_s < 1:
            raise ValueError("idle_timeout_s must be >= 1")


@dataclass(frozen=True)
class PendingFollowup:
    classification_id: str
    missed_item_id: str


@dataclass(frozen=True)
class TrialRecord:
    item_id: str
    presented_at: float
    answered_at: float
    selected_index: int
    correct: bool
    is_followup: bool
    tokens_after: int
    cycle_index: int


@dataclass(frozen=True)
class RewardEvent:
    cycle_index: int
    granted_at: float
    duration_cap_s: float
    trials_in_cycle: int


@dataclass(frozen=True)
class Prompt:
    item: ContentItem
    token_display: int
    is_followup: bool


@dataclass(frozen=True)
class Correct:
    tokens_now: int
    praise_cue: str = PRAISE_CUE


@dataclass(frozen=True)
class Incorrect:
    correct_answer_text: str
    followup_scheduled: bool = True
    somber_cue: str = SOMBER_CUE


@dataclass(frozen=True)
class RewardGranted:
    reward: RewardEvent
    tokens_now: int = 0
    praise_cue: str = PRAISE_CUE


Outcome = Union[Correct, Incorrect, RewardGranted]


@dataclass(frozen=True)
class SessionMetrics:
    engagement_hours: float
    accuracy_rate_overall: Optional[float]
    accuracy_rate_per_cycle: list[float]
    generalization_rate: Optional[float]


class Session:
    """Single-student tutoring session.

    Single-writer: callers must serialize operations on one session.
    """

    def __init__(self, config: SessionConfig, pack: ContentPack,
                 session_id: Optional[str] = None):
        violations = validate_pack(pack)
        if violations:
            raise InvalidPackError(violations)
        if not pack.items:
            raise InvalidPackError([], "pack has no items")
        self.session_id = session_id or uuid.uuid4().hex
        self.config = config
        self.pack = pack
        self.token_count = 0
        self.pending_followup: Optional[PendingFollowup] = None
        self.trials: list[TrialRecord] = []
        self.reward_events: list[RewardEvent] = []
        self.activity_timestamps: list[float] = []
        self._rng = random.Random(config.rng_seed)
        self._outstanding: Optional[tuple[ContentItem, bool, float]] = None
        self._last_item_id: Optional[str] = None
        self._cycle_index = 0
        self._trials_in_cycle = 0

    # -- helpers

    def _touch(self, timestamp: float) -> None:
        if self.activity_timestamps and timestamp < self.activity_timestamps[-1]:
            raise NonMonotonicTimestampError(
                f"timestamp {timestamp} precedes last activity {self.activity_timestamps[-1]}")
        self.activity_timestamps.append(timestamp)

    # -- operations

    def next_prompt(self, presented_at: float) -> Prompt:
        if self._outstanding is not None:
            raise PromptOutstandingError("a prompt is already outstanding")
        if self.activity_timestamps and presented_at < self.activity_timestamps[-1]:
            raise NonMonotonicTimestampError(
                f"timestamp {presented_at} precedes last activity {self.activity_timestamps[-1]}")
        if self.pending_followup is not None:
            fu = self.pending_followup
            eligible = [i for i in self.pack.items
                        if i.classification_id == fu.classification_id
                        and i.item_id != fu.missed_item_id]
            is_followup = True
        else:
            eligible = [i for i in self.pack.items if i.item_id != self._last_item_id] \
                if len(self.pack.items) > 1 else list(self.pack.items)
            is_followup = False
        item = eligible[self._rng.randrange(len(eligible))]
        self._touch(presented_at)
        self._outstanding = (item, is_followup, presented_at)
        self._last_item_id = item.item_id
        return Prompt(item=item, token_display=self.token_count, is_followup=is_followup)

    def submit_answer(self, selected_index: int, answered_at: float) -> Outcome:
        if self._outstanding is None:
            raise NoOutstandingPromptError("no prompt is outstanding")
        item, is_followup, presented_at = self._outstanding
        if not 0 <= selected_index < len(item.choices):
            raise AnswerOutOfRangeError(
                f"selected_index {selected_index} out of range for {len(item.choices)} choices")
        if answered_at < presented_at:
            raise NonMonotonicTimestampError("answered_at precedes presented_at")
        self._touch(answered_at)
        self._outstanding = None
        self._trials_in_cycle += 1
        correct = selected_index == item.correct_index
        cycle = self._cycle_index
        reward: Optional[RewardEvent] = None

        if correct:
            self.token_count += 1
            if (self.pending_followup is not None
                    and self.pending_followup.classification_id == item.classification_id):
                self.pending_followup = None
            if self.token_count == self.config.tokens_per_reward:
                reward = RewardEvent(
                    cycle_index=cycle,
                    granted_at=answered_at,
                    duration_cap_s=self.config.reward_duration_cap_s,
                    trials_in_cycle=self._trials_in_cycle)
                self.reward_events.append(reward)
                self.token_count = 0
                self._cycle_index += 1
                self._trials_in_cycle = 0
        else:
            self.pending_followup = PendingFollowup(item.classification_id, item.item_id)

        self.trials.append(TrialRecord(
            item_id=item.item_id, presented_at=presented_at, answered_at=answered_at,
            selected_index=selected_index, correct=correct, is_followup=is_followup,
            tokens_after=self.token_count, cycle_index=cycle))

        if reward is not None:
            return RewardGranted(reward=reward)
        if correct:
            return Correct(tokens_now=self.token_count)
        return Incorrect(correct_answer_text=item.choices[item.correct_index])

    def record_heartbeat(self, timestamp: float) -> None:
        self._touch(timestamp)

    def compute_metrics(self) -> SessionMetrics:
        engaged = sum(b - a for a, b in itertools.pairwise(self.activity_timestamps)
                      if b - a <= self.config.idle_timeout_s)
        answered = len(self.trials)
        correct = sum(t.correct for t in self.trials)
        followups = [t for t in self.trials if t.is_followup]
        per_cycle = [100.0 * self.config.tokens_per_reward / ev.trials_in_cycle
                     for ev in self.reward_events]
        return SessionMetrics(
            engagement_hours=engaged / 3600.0,
            accuracy_rate_overall=100.0 * correct / answered if answered else None,
            accuracy_rate_per_cycle=per_cycle,
            generalization_rate=(100.0 * sum(t.correct for t in followups) / len(followups)
                                 if followups else None),
        )


def new_session(config: SessionConfig, pack: ContentPack,
                session_id: Optional[str] = None) -> Session:
    return Session(config, pack, session_id=session_id)


def metrics_to_dict(m: SessionMetrics) -> dict:
    """Stable JSON shape shared by the service and the bijection tests."""
    return {
        "engagement_hours": m.engagement_hours,
        "accuracy_rate_overall": m.accuracy_rate_overall,
        "accuracy_rate_per_cycle": m.accuracy_rate_per_cycle,
        "generalization_rate": m.generalization_rate,
    }
