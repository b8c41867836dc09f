import random
import time

import pytest

from src.kb_model import Atom, Knowledge, KnowledgeBase, Literal, Polarity, Property
from src.similarity import knowledge_space, source_information


def random_kb(knowledges: int, properties: int, seed: int = 7) -> KnowledgeBase:
    rng = random.Random(seed)
    pool = [f"q{i}" for i in range(200)]

    def literal() -> Literal:
        return Literal(
            atom=Atom(predicate=rng.choice(pool)),
            polarity=Polarity.NEGATIVE if rng.random() < 0.3 else Polarity.POSITIVE,
        )

    return KnowledgeBase(
        knowledges=tuple(
            Knowledge(
                name=f"K{k}",
                properties=tuple(
                    Property(
                        index=i,
                        body=frozenset(literal() for _ in range(rng.randint(1, 6))),
                        head=Atom(predicate=rng.choice(pool)),
                    )
                    for i in range(1, properties + 1)
                ),
            )
            for k in range(1, knowledges + 1)
        )
    )


@pytest.mark.slow
def test_desk_scale_space():
    """Test the full space for 100 knowledges of 50 properties each"""
    kb = random_kb(100, 50)

    started = time.perf_counter()
    space = knowledge_space(kb)
    elapsed = time.perf_counter() - started

    assert len(space.entries) == 9900
    assert sum(entry.signature.total for entry in space.entries) == 9900 * 2500
    assert len(source_information(space).entries) == 4950
    assert elapsed <= 60, f"knowledge space took {elapsed:.1f}s"


@pytest.mark.unit
def test_small_random_space_is_deterministic():
    kb = random_kb(5, 4, seed=11)
    assert knowledge_space(kb) == knowledge_space(kb)
