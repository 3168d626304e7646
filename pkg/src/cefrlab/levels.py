"""CEFR proficiency scale shared by all modules."""

from __future__ import annotations

from enum import IntEnum


class CefrLevel(IntEnum):
    """CEFR level with its conventional numeric encoding (A1=1 ... C2=6).

    Classification targets use A1..C1 only; C2 is valid for lexicon
    entries (word lists grade vocabulary up to C2).
    """

    A1 = 1
    A2 = 2
    B1 = 3
    B2 = 4
    C1 = 5
    C2 = 6

    def __str__(self) -> str:
        return self.name


#: Levels a text or sentence may be labeled with.
CLASSIFICATION_LEVELS: tuple[CefrLevel, ...] = (
    CefrLevel.A1,
    CefrLevel.A2,
    CefrLevel.B1,
    CefrLevel.B2,
    CefrLevel.C1,
)

#: Levels a lexicon entry may carry.
LEXICON_LEVELS: tuple[CefrLevel, ...] = CLASSIFICATION_LEVELS + (CefrLevel.C2,)


def parse_level(text: str, *, extended: bool = False) -> CefrLevel:
    """Parse a level name like ``"B1"``.

    ``extended`` admits C2 (lexicon scale); otherwise only A1..C1.
    Raises ValueError for anything else.
    """
    name = text.strip().upper()
    try:
        level = CefrLevel[name]
    except KeyError:
        raise ValueError(f"unknown CEFR level: {text!r}") from None
    if not extended and level is CefrLevel.C2:
        raise ValueError("C2 is only valid for lexicon entries, not unit labels")
    return level
