"""External lexical resources: Kelly-style word list, sense lexicon, category map.

All three are immutable after load and safe to share across workers. Lookups
try the exact ``(lemma, pos)`` key first and fall back to a lemma-only index,
because POS tagsets of a word list and a treebank rarely agree; fallback use
is reported by the ``*_detail`` lookups so pipelines can count it.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from importlib import resources

from .levels import CefrLevel, parse_level


class LexiconFormatError(ValueError):
    """Malformed lexical resource file, tied to a 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class KellyEntry:
    lemma: str
    pos: str
    level: CefrLevel
    log_freq: float  # natural log of frequency per million


@dataclass(frozen=True)
class KellyList:
    """Frequency/CEFR word list keyed by (lemma, pos) with a lemma fallback."""

    entries: dict[tuple[str, str], KellyEntry]
    by_lemma: dict[str, KellyEntry]
    warnings: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def lookup_detail(self, lemma: str, pos: str) -> tuple[KellyEntry | None, str]:
        """Return ``(entry, source)`` with source in {"exact", "fallback", "miss"}."""
        entry = self.entries.get((lemma, pos))
        if entry is not None:
            return entry, "exact"
        entry = self.by_lemma.get(lemma)
        if entry is not None:
            return entry, "fallback"
        return None, "miss"

    def lookup(self, lemma: str, pos: str) -> KellyEntry | None:
        return self.lookup_detail(lemma, pos)[0]


@dataclass(frozen=True)
class SenseLexicon:
    """Lemma -> number-of-senses map abstracted from a lexical-semantic resource."""

    entries: dict[tuple[str, str], int]
    by_lemma: dict[str, int]
    warnings: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def lookup_detail(self, lemma: str, pos: str) -> tuple[int | None, str]:
        count = self.entries.get((lemma, pos))
        if count is not None:
            return count, "exact"
        count = self.by_lemma.get(lemma)
        if count is not None:
            return count, "fallback"
        return None, "miss"

    def lookup(self, lemma: str, pos: str) -> int | None:
        return self.lookup_detail(lemma, pos)[0]


def _data_rows(stream: io.TextIOBase | str, n_cols: int):
    """Yield (line_no, columns) for non-comment, non-blank lines."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    for line_no, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != n_cols:
            raise LexiconFormatError(
                line_no, f"expected {n_cols} tab-separated columns, got {len(cols)}"
            )
        yield line_no, cols


def load_kelly(stream: io.TextIOBase | str) -> KellyList:
    """Load a 4-column TSV (lemma, pos, level, log_freq).

    An optional header row is skipped. Duplicate (lemma, pos) rows keep the
    first occurrence and record a warning.
    """
    entries: dict[tuple[str, str], KellyEntry] = {}
    by_lemma: dict[str, KellyEntry] = {}
    warnings: list[str] = []
    for line_no, (lemma, pos, raw_level, raw_freq) in _data_rows(stream, 4):
        if not entries and raw_level.strip().lower() == "level":
            continue  # header row
        try:
            level = parse_level(raw_level, extended=True)
        except ValueError as exc:
            raise LexiconFormatError(line_no, str(exc)) from None
        try:
            log_freq = float(raw_freq)
        except ValueError:
            raise LexiconFormatError(line_no, f"non-numeric frequency {raw_freq!r}") from None
        if not math.isfinite(log_freq):
            raise LexiconFormatError(line_no, f"non-finite frequency {raw_freq!r}")
        key = (lemma, pos)
        if key in entries:
            warnings.append(f"line {line_no}: duplicate entry for {key}, keeping the first")
            continue
        entry = KellyEntry(lemma=lemma, pos=pos, level=level, log_freq=log_freq)
        entries[key] = entry
        by_lemma.setdefault(lemma, entry)
    return KellyList(entries=entries, by_lemma=by_lemma, warnings=tuple(warnings))


def load_senses(stream: io.TextIOBase | str) -> SenseLexicon:
    """Load a 3-column TSV (lemma, pos, sense_count); counts must be >= 1."""
    entries: dict[tuple[str, str], int] = {}
    by_lemma: dict[str, int] = {}
    warnings: list[str] = []
    for line_no, (lemma, pos, raw_count) in _data_rows(stream, 3):
        if not entries and raw_count.strip().lower() in ("senses", "sense_count", "count"):
            continue
        try:
            count = int(raw_count)
        except ValueError:
            raise LexiconFormatError(line_no, f"non-integer sense count {raw_count!r}") from None
        if count < 1:
            raise LexiconFormatError(line_no, f"sense count must be >= 1, got {count}")
        key = (lemma, pos)
        if key in entries:
            warnings.append(f"line {line_no}: duplicate entry for {key}, keeping the first")
            continue
        entries[key] = count
        by_lemma.setdefault(lemma, count)
    return SenseLexicon(entries=entries, by_lemma=by_lemma, warnings=tuple(warnings))


# Category keys every feature in the catalog relies on. Lexeme lists may be
# empty; tag sets should normally not be.
REQUIRED_POS_CATEGORIES = (
    "noun", "verb", "adjective", "adverb", "pronoun", "preposition", "particle",
    "punctuation", "subjunction", "conjunction", "relative_structure",
    "participle", "function_word",
)
REQUIRED_DEPREL_CATEGORIES = (
    "pre_modifier", "post_modifier", "subordinate_clause", "relative_clause",
    "prepositional_complement",
)
REQUIRED_MSD_CATEGORIES = (
    "neuter", "preterite", "present", "supine", "past_participle",
    "present_participle",
)
OPTIONAL_MSD_CATEGORIES = ("passive",)
REQUIRED_LEXEME_CATEGORIES = ("modal_verbs", "third_person_singular_pronouns")

#: POS categories counted as lexical (content) words.
LEXICAL_CATEGORIES = ("noun", "verb", "adjective", "adverb")


class CategoryMapError(ValueError):
    pass


@dataclass(frozen=True)
class CategoryMap:
    """Tagset-to-category grounding for the feature catalog.

    ``pos``/``deprel``/``msd`` map category names to tag sets; ``lexemes``
    maps lexeme-list names to lowercased lemma sets. A tag missing from every
    category simply counts toward none of them.
    """

    pos: dict[str, frozenset[str]]
    deprel: dict[str, frozenset[str]]
    msd: dict[str, frozenset[str]]
    lexemes: dict[str, frozenset[str]]
    warnings: tuple[str, ...] = ()
    lexical_pos: frozenset[str] = field(init=False, default=frozenset())

    def __post_init__(self) -> None:
        lexical = frozenset().union(*(self.pos[c] for c in LEXICAL_CATEGORIES))
        object.__setattr__(self, "lexical_pos", lexical)


_SECTIONS = ("pos", "deprel", "msd", "lexemes")


def load_category_map(stream: io.TextIOBase | str) -> CategoryMap:
    """Parse a category map config.

    Format: ``[pos]`` / ``[deprel]`` / ``[msd]`` / ``[lexemes]`` section
    headers, then ``name = tag1, tag2, ...`` lines. Missing required
    categories are errors; unknown categories load with a warning.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    sections: dict[str, dict[str, frozenset[str]]] = {name: {} for name in _SECTIONS}
    warnings: list[str] = []
    current: str | None = None
    for line_no, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip().lower()
            if name not in _SECTIONS:
                warnings.append(f"line {line_no}: unknown section [{name}], ignored")
                current = None
            else:
                current = name
            continue
        if "=" not in line:
            raise CategoryMapError(f"line {line_no}: expected 'name = tags' or a section header")
        if current is None:
            raise CategoryMapError(f"line {line_no}: entry outside of any known section")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        items = [item.strip() for item in value.split(",") if item.strip()]
        if current == "lexemes":
            items = [item.lower() for item in items]
        sections[current][key] = frozenset(items)

    required = {
        "pos": REQUIRED_POS_CATEGORIES,
        "deprel": REQUIRED_DEPREL_CATEGORIES,
        "msd": REQUIRED_MSD_CATEGORIES,
        "lexemes": REQUIRED_LEXEME_CATEGORIES,
    }
    for section, keys in required.items():
        for key in keys:
            if key not in sections[section]:
                raise CategoryMapError(f"missing category: {key}")
        for key in sections[section]:
            known = keys + (OPTIONAL_MSD_CATEGORIES if section == "msd" else ())
            if key not in known:
                warnings.append(f"unknown category {key!r} in [{section}], ignored by features")
    for key in OPTIONAL_MSD_CATEGORIES:
        sections["msd"].setdefault(key, frozenset())

    lexical = frozenset().union(*(sections["pos"][c] for c in LEXICAL_CATEGORIES))
    overlap = sections["pos"]["function_word"] & lexical
    if overlap:
        raise CategoryMapError(
            f"function_word overlaps lexical categories: {sorted(overlap)}"
        )
    return CategoryMap(
        pos=sections["pos"],
        deprel=sections["deprel"],
        msd=sections["msd"],
        lexemes=sections["lexemes"],
        warnings=tuple(warnings),
    )


def default_category_map_text() -> str:
    """Content of the bundled SUC/MAMBA-style category map."""
    return resources.files("cefrlab.data").joinpath("suc_catmap.cfg").read_text("utf-8")


def default_category_map() -> CategoryMap:
    return load_category_map(default_category_map_text())
