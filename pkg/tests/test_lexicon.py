import pytest

from cefrlab import CefrLevel, load_category_map, load_kelly, load_senses
from cefrlab.lexicon import (
    CategoryMapError,
    LexiconFormatError,
    REQUIRED_DEPREL_CATEGORIES,
    REQUIRED_LEXEME_CATEGORIES,
    REQUIRED_MSD_CATEGORIES,
    REQUIRED_POS_CATEGORIES,
    default_category_map,
)

KELLY_3ROW = "katt\tNN\tA2\t5.5\nhund\tNN\tA1\t6.25\nfilosofi\tNN\tC1\t1.5\n"


class TestKelly:
    def test_three_row_file(self):
        kelly = load_kelly(KELLY_3ROW)
        assert len(kelly) == 3
        entry = kelly.lookup("katt", "NN")
        assert entry is not None
        assert (entry.level, entry.log_freq) == (CefrLevel.A2, 5.5)

    def test_absent_lemma_not_found(self):
        kelly = load_kelly(KELLY_3ROW)
        assert kelly.lookup("giraff", "NN") is None
        assert kelly.lookup_detail("giraff", "NN") == (None, "miss")

    def test_duplicate_keeps_first_and_warns(self):
        kelly = load_kelly(KELLY_3ROW + "hund\tNN\tB2\t2.0\n")
        assert len(kelly) == 3
        assert len(kelly.warnings) == 1
        assert kelly.lookup("hund", "NN").level == CefrLevel.A1

    def test_header_row_skipped(self):
        kelly = load_kelly("lemma\tpos\tlevel\tlog_freq\n" + KELLY_3ROW)
        assert len(kelly) == 3

    def test_bad_level_errors_with_line(self):
        with pytest.raises(LexiconFormatError, match="line 2"):
            load_kelly("katt\tNN\tA2\t5.5\nhund\tNN\tZ9\t1.0\n")

    def test_bad_frequency_errors_with_line(self):
        with pytest.raises(LexiconFormatError, match="line 1.*frequency"):
            load_kelly("katt\tNN\tA2\tmycket\n")

    def test_non_finite_frequency_rejected(self):
        with pytest.raises(LexiconFormatError, match="non-finite"):
            load_kelly("katt\tNN\tA2\tnan\n")

    def test_c2_allowed_in_lexicon(self):
        kelly = load_kelly("esoterisk\tJJ\tC2\t0.3\n")
        assert kelly.lookup("esoterisk", "JJ").level == CefrLevel.C2

    def test_pos_fallback_prefers_exact_then_first_loaded(self):
        kelly = load_kelly("bok\tNN\tA1\t7.0\nbok\tVB\tB1\t3.0\n")
        exact, src = kelly.lookup_detail("bok", "VB")
        assert (exact.level, src) == (CefrLevel.B1, "exact")
        fallback, src = kelly.lookup_detail("bok", "JJ")
        assert (fallback.level, src) == (CefrLevel.A1, "fallback")

    def test_lookup_is_pure(self):
        kelly = load_kelly(KELLY_3ROW)
        assert kelly.lookup("katt", "NN") == kelly.lookup("katt", "NN")


class TestSenses:
    def test_basic_lookup(self):
        senses = load_senses("bok\tNN\t3\n")
        assert senses.lookup("bok", "NN") == 3

    def test_absent_not_found(self):
        senses = load_senses("bok\tNN\t3\n")
        assert senses.lookup("penna", "NN") is None

    def test_zero_count_rejected(self):
        with pytest.raises(LexiconFormatError, match="line 1.*sense count"):
            load_senses("bok\tNN\t0\n")

    def test_duplicate_keeps_first(self):
        senses = load_senses("bok\tNN\t3\nbok\tNN\t5\n")
        assert len(senses) == 1
        assert senses.lookup("bok", "NN") == 3

    def test_lemma_fallback(self):
        senses = load_senses("bok\tNN\t3\n")
        assert senses.lookup_detail("bok", "VB") == (3, "fallback")


def minimal_catmap_text(skip=None):
    lines = ["[pos]"]
    for key in REQUIRED_POS_CATEGORIES:
        if key != skip:
            lines.append(f"{key} = {key.upper()}")
    lines.append("[deprel]")
    for key in REQUIRED_DEPREL_CATEGORIES:
        if key != skip:
            lines.append(f"{key} = {key.upper()}")
    lines.append("[msd]")
    for key in REQUIRED_MSD_CATEGORIES:
        if key != skip:
            lines.append(f"{key} = {key.upper()}")
    lines.append("[lexemes]")
    for key in REQUIRED_LEXEME_CATEGORIES:
        if key != skip:
            lines.append(f"{key} =")
    return "\n".join(lines) + "\n"


class TestCategoryMap:
    def test_complete_map_loads(self):
        cm = load_category_map(minimal_catmap_text())
        assert cm.pos["noun"] == frozenset({"NOUN"})
        assert cm.lexemes["modal_verbs"] == frozenset()

    def test_missing_noun_is_an_error(self):
        with pytest.raises(CategoryMapError, match="missing category: noun"):
            load_category_map(minimal_catmap_text(skip="noun"))

    def test_unknown_category_warns(self):
        cm = load_category_map(minimal_catmap_text() + "[pos]\nmystery = ZZ\n")
        assert any("mystery" in w for w in cm.warnings)

    def test_entry_outside_section_rejected(self):
        with pytest.raises(CategoryMapError, match="outside"):
            load_category_map("noun = NN\n")

    def test_function_word_lexical_overlap_rejected(self):
        text = minimal_catmap_text().replace(
            "function_word = FUNCTION_WORD", "function_word = FUNCTION_WORD, NOUN"
        )
        with pytest.raises(CategoryMapError, match="overlaps lexical"):
            load_category_map(text)

    def test_default_map_is_complete_and_suc_flavored(self):
        cm = default_category_map()
        assert "NN" in cm.pos["noun"]
        assert cm.pos["relative_structure"] == frozenset({"HA", "HD", "HP", "HS"})
        assert cm.pos["punctuation"] == frozenset({"MAD", "MID", "PAD"})
        assert "kunna" in cm.lexemes["modal_verbs"]
        assert cm.msd["passive"] == frozenset({"SFO"})
        assert cm.warnings == ()

    def test_lexemes_lowercased(self):
        text = minimal_catmap_text().replace("modal_verbs =", "modal_verbs = Kunna, VILJA")
        cm = load_category_map(text)
        assert cm.lexemes["modal_verbs"] == frozenset({"kunna", "vilja"})
