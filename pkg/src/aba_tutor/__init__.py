"""ABA tutoring platform: session engine, content store, service, simulator."""

from .content import (
    Classification,
    ContentItem,
    ContentPack,
    PackError,
    PackFormatError,
    Violation,
    load_pack,
    save_pack,
    validate_pack,
)
from .engine import (
    Correct,
    Incorrect,
    InvalidPackError,
    Outcome,
    RewardEvent,
    RewardGranted,
    Session,
    SessionConfig,
    SessionMetrics,
    TrialRecord,
    new_session,
)

__all__ = [
    "Classification", "ContentItem", "ContentPack", "PackError", "PackFormatError",
    "Violation", "load_pack", "save_pack", "validate_pack",
    "Correct", "Incorrect", "InvalidPackError", "Outcome", "RewardEvent",
    "RewardGranted", "Session", "SessionConfig", "SessionMetrics", "TrialRecord",
    "new_session",
]
