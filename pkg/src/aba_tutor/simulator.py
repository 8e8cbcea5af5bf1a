"""Simulated-learner harness: multi-day trials through the engine, CSV reports.

The learner is a deliberately minimal probabilistic model: baseline accuracy
plus a per-classification learning increment and a generalization boost on
follow-ups. Each trial consumes a fixed 20 simulated seconds; a reward adds
its full duration cap. Fatigue ends a day early with a per-trial probability.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .content import ContentPack, PackError, load_pack, validate_pack
from .engine import RewardGranted, Session, SessionConfig

TRIAL_DURATION_S = 20.0

CSV_HEADER = "day,replication,engagement_hours,accuracy_rate,generalization_rate"


@dataclass(frozen=True)
class LearnerModel:
    p0: float = 0.5
    alpha: float = 0.0
    beta: float = 0.0
    fatigue: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p0 <= 1.0:
            raise ValueError("p0 must be in [0, 1]")
        if self.alpha < 0.0:
            raise ValueError("alpha must be >= 0")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must be in [0, 1]")
        if not 0.0 <= self.fatigue <= 1.0:
            raise ValueError("fatigue must be in [0, 1]")


@dataclass(frozen=True)
class TrialPlan:
    learner: LearnerModel
    pack: ContentPack
    days: int = 5
    session_minutes_per_day: float = 10.0
    replications: int = 1

    def __post_init__(self):
        if self.days < 1:
            raise ValueError("days must be >= 1")
        if self.session_minutes_per_day <= 0:
            raise ValueError("session_minutes_per_day must be positive")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")


@dataclass(frozen=True)
class DayResult:
    day: int
    replication: int
    engagement_hours: float
    accuracy_rate: Optional[float]
    generalization_rate: Optional[float]


@dataclass
class _LearnerState:
    """Knowledge carried across days within one replication."""

    correct_exposures: dict[str, int] = field(default_factory=dict)
    erred: set[str] = field(default_factory=set)
    erred_then_succeeded: set[str] = field(default_factory=set)


def _answer_probability(learner: LearnerModel, state: _LearnerState,
                        classification_id: str, is_followup: bool) -> float:
    p = learner.p0 + learner.alpha * state.correct_exposures.get(classification_id, 0)
    if is_followup and classification_id in state.erred_then_succeeded:
        p += learner.beta
    return min(1.0, max(0.0, p))


def _run_day(plan: TrialPlan, rng: random.Random, state: _LearnerState,
             day: int, replication: int) -> DayResult:
    learner = plan.learner
    # Derived seeds keep the engine's prompt stream independent of the
    # learner's answer draws.
    session = Session(
        SessionConfig(rng_seed=rng.randrange(2**63)), plan.pack)
    n_trials = int(plan.session_minutes_per_day * 60 // TRIAL_DURATION_S)
    t = 0.0
    for _ in range(n_trials):
        if rng.random() < learner.fatigue:
            break
        prompt = session.next_prompt(t)
        item = prompt.item
        cls = item.classification_id
        p = _answer_probability(learner, state, cls, prompt.is_followup)
        answers_correctly = rng.random() < p
        if answers_correctly:
            selected = item.correct_index
        else:
            selected = next(i for i in range(len(item.choices)) if i != item.correct_index)
        t += TRIAL_DURATION_S
        outcome = session.submit_answer(selected, t)
        if answers_correctly:
            state.correct_exposures[cls] = state.correct_exposures.get(cls, 0) + 1
            if cls in state.erred:
                state.erred_then_succeeded.add(cls)
        else:
            state.erred.add(cls)
        if isinstance(outcome, RewardGranted):
            t += outcome.reward.duration_cap_s
            session.record_heartbeat(t)

    # The simulator never re-derives metrics; the engine is the one source.
    m = session.compute_metrics()
    return DayResult(
        day=day, replication=replication,
        engagement_hours=m.engagement_hours,
        accuracy_rate=m.accuracy_rate_overall,
        generalization_rate=m.generalization_rate)


def run_trial(plan: TrialPlan) -> list[DayResult]:
    violations = validate_pack(plan.pack)
    if violations or not plan.pack.items:
        raise ValueError(
            "pack is not valid for simulation: "
            + ("; ".join(v.message for v in violations) or "no items"))
    results = []
    for rep in range(plan.replications):
        # Per-replication generator; replications are order-independent.
        rng = random.Random(f"{plan.learner.rng_seed}:{rep}")
        state = _LearnerState()
        for day in range(1, plan.days + 1):
            results.append(_run_day(plan, rng, state, day, rep))
    results.sort(key=lambda r: (r.replication, r.day))
    return results


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.4f}"


def export_report(results: list[DayResult], destination: str | Path) -> None:
    if not results:
        raise ValueError("no results to export")
    lines = [CSV_HEADER]
    for r in results:
        lines.append(
            f"{r.day},{r.replication},{r.engagement_hours:.4f},"
            f"{_fmt(r.accuracy_rate)},{_fmt(r.generalization_rate)}")
    Path(destination).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="aba-sim",
                                     description="Simulated-learner trial harness")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a multi-day trial and write a CSV report")
    run.add_argument("--pack", required=True, help="content pack JSON file")
    run.add_argument("--days", type=int, default=5)
    run.add_argument("--session-minutes", type=float, default=10.0,
                     help="simulated session length per day")
    run.add_argument("--p0", type=float, default=0.5)
    run.add_argument("--alpha", type=float, default=0.05)
    run.add_argument("--beta", type=float, default=0.2)
    run.add_argument("--fatigue", type=float, default=0.005)
    run.add_argument("--replications", type=int, default=200)
    run.add_argument("--seed", type=int, default=42)
    run.add_argument("--out", required=True, help="destination CSV path")
    args = parser.parse_args(argv)

    try:
        pack = load_pack(args.pack)
        learner = LearnerModel(p0=args.p0, alpha=args.alpha, beta=args.beta,
                               fatigue=args.fatigue, rng_seed=args.seed)
        plan = TrialPlan(learner=learner, pack=pack, days=args.days,
                         session_minutes_per_day=args.session_minutes,
                         replications=args.replications)
        results = run_trial(plan)
    except (ValueError, OSError, PackError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    export_report(results, args.out)
    print(f"wrote {len(results)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
