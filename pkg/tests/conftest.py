import pytest

from aba_tutor.content import Classification, ContentItem, ContentPack


def make_item(item_id, classification_id, subject="reading", correct_index=0,
              n_choices=3, media_ref=None):
    return ContentItem(
        item_id=item_id,
        prompt_text=f"What is happening in {item_id}?",
        choices=[f"{item_id}-choice-{i}" for i in range(n_choices)],
        correct_index=correct_index,
        classification_id=classification_id,
        subject=subject,
        media_ref=media_ref,
    )


def make_pack(items_per_classification=(2, 2)):
    """Pack with one classification per entry, holding that many items."""
    pack = ContentPack(pack_id="test-pack")
    for c, n in enumerate(items_per_classification):
        cls_id = f"cls{c}"
        subject = "reading" if c % 2 == 0 else "math"
        pack.classifications.append(Classification(cls_id, f"classification {c}", subject))
        for i in range(n):
            pack.items.append(make_item(f"{cls_id}-item{i}", cls_id, subject=subject))
    return pack


@pytest.fixture
def pack():
    return make_pack((2, 2))


def wrong_index(item):
    return 1 if item.correct_index == 0 else 0


def drive(session, script, t0=0.0, dt=10.0):
    """Answer prompts per the correctness script; returns (prompts, outcomes)."""
    prompts, outcomes = [], []
    t = t0
    for should_be_correct in script:
        prompt = session.next_prompt(t)
        idx = prompt.item.correct_index if should_be_correct else wrong_index(prompt.item)
        outcome = session.submit_answer(idx, t + dt / 2)
        prompts.append(prompt)
        outcomes.append(outcome)
        t += dt
    return prompts, outcomes
