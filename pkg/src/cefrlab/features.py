"""The 61-dimension linguistic complexity feature catalog.

Each sentence maps to a fixed-order vector of length-based, lexical,
syntactic, semantic and morphological measures; document vectors are the
per-dimension mean over the document's sentence vectors. Counts include
punctuation tokens: the punctuation incidence feature presupposes their
presence in the token total.

Incidence scores ("IncSc") normalize a category count per 1000 tokens so
short and long units stay comparable. Ratios return 0 on a zero denominator
throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .corpus import Document, Sentence
from .levels import CefrLevel
from .lexicon import CategoryMap, KellyList, SenseLexicon

FEATURE_NAMES: tuple[str, ...] = (
    "f01_sentence_length",
    "f02_avg_token_length",
    "f03_extra_long_words",
    "f04_char_count",
    "f05_lix",
    "f06_kelly_a1_incsc",
    "f07_kelly_a2_incsc",
    "f08_kelly_b1_incsc",
    "f09_kelly_b2_incsc",
    "f10_kelly_c1_incsc",
    "f11_kelly_c2_incsc",
    "f12_difficult_word_incsc",
    "f13_difficult_noun_verb_incsc",
    "f14_out_of_kelly_incsc",
    "f15_missing_lemma_incsc",
    "f16_avg_kelly_log_freq",
    "f17_avg_dep_length",
    "f18_long_arcs_incsc",
    "f19_deepest_from_root",
    "f20_right_arc_ratio",
    "f21_left_arc_ratio",
    "f22_modifier_variation",
    "f23_premodifier_incsc",
    "f24_postmodifier_incsc",
    "f25_subordinate_incsc",
    "f26_relative_clause_incsc",
    "f27_prep_complement_incsc",
    "f28_avg_senses_per_token",
    "f29_noun_senses_per_noun",
    "f30_modal_to_verb",
    "f31_particle_incsc",
    "f32_pron_3sg_incsc",
    "f33_punctuation_incsc",
    "f34_subjunction_incsc",
    "f35_s_verb_incsc",
    "f36_s_verb_to_verb",
    "f37_adjective_incsc",
    "f38_adjective_variation",
    "f39_adverb_incsc",
    "f40_adverb_variation",
    "f41_noun_incsc",
    "f42_noun_variation",
    "f43_verb_incsc",
    "f44_verb_variation",
    "f45_nominal_ratio",
    "f46_noun_to_verb",
    "f47_function_word_incsc",
    "f48_lexical_to_nonlexical",
    "f49_lexical_density",
    "f50_neuter_noun_incsc",
    "f51_con_subjunction_incsc",
    "f52_past_participle_to_verb",
    "f53_present_participle_to_verb",
    "f54_preterite_to_verb",
    "f55_present_to_verb",
    "f56_supine_to_verb",
    "f57_relative_structure_incsc",
    "f58_bilog_ttr",
    "f59_sqrt_ttr",
    "f60_pron_to_noun",
    "f61_pron_to_prep",
)

N_FEATURES = len(FEATURE_NAMES)

#: Feature subgroups as 0-based index ranges into the catalog order.
FEATURE_GROUPS: dict[str, tuple[int, ...]] = {
    "All": tuple(range(N_FEATURES)),
    "Len": tuple(range(0, 5)),
    "Lex": tuple(range(5, 16)),
    "Synt": tuple(range(16, 27)),
    "Sem": tuple(range(27, 29)),
    "Morph": tuple(range(29, 61)),
}

LONG_WORD_CHARS = 6  # LIX convention: "long" means strictly more characters
EXTRA_LONG_CHARS = 13
LONG_ARC_LEN = 5


def lix(word_count: int, sentence_count: int, long_word_count: int) -> float:
    """Swedish readability index: mean sentence length plus long-word percentage."""
    if word_count == 0 or sentence_count == 0:
        return 0.0
    return word_count / sentence_count + 100.0 * long_word_count / word_count


def inc_sc(category_count: int, token_count: int) -> float:
    """Incidence score: category occurrences per 1000 tokens.

    Multiplies before dividing so a saturated category scores exactly 1000.
    """
    if token_count == 0:
        return 0.0
    return 1000.0 * category_count / token_count


def variation(category_count: int, lexical_count: int) -> float:
    """Category count relative to the lexical (content-word) count."""
    if lexical_count == 0:
        return 0.0
    return category_count / lexical_count


def ttr_pair(type_count: int, token_count: int) -> tuple[float, float]:
    """Bilogarithmic and square-root type-token ratios.

    Degenerate sizes use fixed conventions: bilog is 1 for token counts
    below 2 (avoiding 0/0), root is 0 for an empty unit.
    """
    bilog = 1.0 if token_count <= 1 else math.log(type_count) / math.log(token_count)
    root = 0.0 if token_count == 0 else type_count / math.sqrt(token_count)
    return bilog, root


def nominal_ratio(nominal_count: int, verbal_count: int) -> float:
    """(nouns + prepositions + participles) over (pronouns + adverbs + verbs)."""
    if verbal_count == 0:
        return 0.0
    return nominal_count / verbal_count


@dataclass(frozen=True)
class DependencyStats:
    avg_arc_length: float
    long_arc_count: int
    root_depth: int
    right_ratio: float
    left_ratio: float


def dependency_stats(sentence: Sentence) -> DependencyStats:
    """Arc-length, depth and direction statistics over non-root tokens.

    Raises ValueError on cyclic head chains (depth is undefined).
    """
    tokens = sentence.tokens
    n = len(tokens)
    heads = {tok.index: tok.head for tok in tokens}
    depths: dict[int, int] = {}
    for tok in tokens:
        path = []
        node = tok.index
        while node not in depths and heads.get(node, 0) != 0:
            path.append(node)
            node = heads[node]
            if len(path) > n:
                raise ValueError(f"sentence {sentence.id!r} is not a tree (cyclic heads)")
        base = depths.get(node, 0)
        for offset, visited in enumerate(reversed(path), start=1):
            depths[visited] = base + offset
    non_root = [tok for tok in tokens if tok.head != 0]
    if not non_root:
        return DependencyStats(0.0, 0, 0, 0.0, 0.0)
    arc_lengths = [abs(tok.index - tok.head) for tok in non_root]
    right = sum(1 for tok in non_root if tok.index > tok.head)
    m = len(non_root)
    return DependencyStats(
        avg_arc_length=sum(arc_lengths) / m,
        long_arc_count=sum(1 for length in arc_lengths if length > LONG_ARC_LEN),
        root_depth=max(depths.values(), default=0),
        right_ratio=right / m,
        left_ratio=(m - right) / m,
    )


@dataclass(frozen=True)
class ExtractionContext:
    """Shared immutable resources plus the reference level for the
    difficult-word features.

    ``level_dependent_mode`` is "use-reference" (difficult = Kelly level
    above ``reference_level``) or "zero-out" (those two features are 0, for
    leakage-free prediction experiments).
    """

    kelly: KellyList
    senses: SenseLexicon
    category_map: CategoryMap
    reference_level: CefrLevel = CefrLevel.B1
    level_dependent_mode: str = "use-reference"

    def __post_init__(self) -> None:
        if self.level_dependent_mode not in ("use-reference", "zero-out"):
            raise ValueError(f"unknown level_dependent_mode {self.level_dependent_mode!r}")
        if self.reference_level is CefrLevel.C2:
            raise ValueError("reference_level must be a classification level (A1..C1)")

    def with_reference(self, level: CefrLevel) -> "ExtractionContext":
        return replace(self, reference_level=level)


def _lexeme(token) -> str:
    return (token.lemma or token.form).lower()


def extract_sentence_features(sentence: Sentence, ctx: ExtractionContext) -> np.ndarray:
    """Compute the full 61-value vector for one sentence.

    Token count includes punctuation; the sentence counts as a single unit
    for the LIX term.
    """
    tokens = sentence.tokens
    n = len(tokens)
    cm = ctx.category_map
    pos_of = cm.pos
    noun, verb = pos_of["noun"], pos_of["verb"]
    adjective, adverb = pos_of["adjective"], pos_of["adverb"]
    pronoun, preposition = pos_of["pronoun"], pos_of["preposition"]
    punctuation, participle = pos_of["punctuation"], pos_of["participle"]
    dep_of = cm.deprel

    def pos_count(tags: frozenset[str]) -> int:
        return sum(1 for t in tokens if t.pos in tags)

    def dep_count(tags: frozenset[str]) -> int:
        return sum(1 for t in tokens if t.deprel in tags)

    # Length-based tallies.
    char_total = sum(len(t.form) for t in tokens)
    long_words = sum(1 for t in tokens if len(t.form) > LONG_WORD_CHARS)
    extra_long = sum(1 for t in tokens if len(t.form) > EXTRA_LONG_CHARS)

    # Kelly lookups: per-level tallies, difficult words, misses.
    level_counts = {level: 0 for level in CefrLevel}
    difficult = 0
    difficult_nv = 0
    out_of_kelly = 0
    missing_lemma = 0
    log_freqs: list[float] = []
    for t in tokens:
        if not t.lemma:
            missing_lemma += 1
            continue
        entry = ctx.kelly.lookup(t.lemma, t.pos)
        if entry is None:
            if t.pos not in punctuation:
                out_of_kelly += 1
            continue
        level_counts[entry.level] += 1
        log_freqs.append(entry.log_freq)
        if entry.level > ctx.reference_level:
            difficult += 1
            if t.pos in noun or t.pos in verb:
                difficult_nv += 1
    if ctx.level_dependent_mode == "zero-out":
        difficult = 0
        difficult_nv = 0

    # Sense lookups.
    sense_values: list[int] = []
    noun_sense_values: list[int] = []
    for t in tokens:
        if not t.lemma:
            continue
        count = ctx.senses.lookup(t.lemma, t.pos)
        if count is None:
            continue
        sense_values.append(count)
        if t.pos in noun:
            noun_sense_values.append(count)

    # POS / morphology tallies.
    noun_c = pos_count(noun)
    verb_c = pos_count(verb)
    adj_c = pos_count(adjective)
    adv_c = pos_count(adverb)
    pron_c = pos_count(pronoun)
    prep_c = pos_count(preposition)
    lexical = noun_c + verb_c + adj_c + adv_c
    participle_c = pos_count(participle)
    punct_c = pos_count(punctuation)
    subj_c = pos_count(pos_of["subjunction"])
    conj_c = pos_count(pos_of["conjunction"])
    passive_msd = cm.msd["passive"]
    s_verb = sum(
        1
        for t in tokens
        if t.pos in verb and (t.form.lower().endswith("s") or (t.msd & passive_msd))
    )
    modal_lexemes = cm.lexemes["modal_verbs"]
    modal_c = sum(1 for t in tokens if t.pos in verb and _lexeme(t) in modal_lexemes)
    third_sg = cm.lexemes["third_person_singular_pronouns"]
    pron3sg_c = sum(1 for t in tokens if t.pos in pronoun and _lexeme(t) in third_sg)
    neuter_noun_c = sum(1 for t in tokens if t.pos in noun and (t.msd & cm.msd["neuter"]))

    def verb_form_count(marker_key: str, tag_set: frozenset[str]) -> int:
        markers = cm.msd[marker_key]
        return sum(1 for t in tokens if t.pos in tag_set and (t.msd & markers))

    past_part_c = verb_form_count("past_participle", participle)
    pres_part_c = verb_form_count("present_participle", participle)
    preterite_c = verb_form_count("preterite", verb)
    present_c = verb_form_count("present", verb)
    supine_c = verb_form_count("supine", verb)

    # Dependency structure.
    dep = dependency_stats(sentence)
    premod_c = dep_count(dep_of["pre_modifier"])
    postmod_c = dep_count(dep_of["post_modifier"])

    types = len({t.form.lower() for t in tokens})
    bilog, root_ttr = ttr_pair(types, n)

    inc = lambda count: inc_sc(count, n)
    ratio = lambda num, den: num / den if den else 0.0

    values = (
        float(n),                                            # 1 sentence length
        ratio(char_total, n),                                # 2 avg token length
        inc(extra_long),                                     # 3 extra-long words
        float(char_total),                                   # 4 character count
        lix(n, 1, long_words),                               # 5 LIX
        inc(level_counts[CefrLevel.A1]),                     # 6
        inc(level_counts[CefrLevel.A2]),                     # 7
        inc(level_counts[CefrLevel.B1]),                     # 8
        inc(level_counts[CefrLevel.B2]),                     # 9
        inc(level_counts[CefrLevel.C1]),                     # 10
        inc(level_counts[CefrLevel.C2]),                     # 11
        inc(difficult),                                      # 12 above reference level
        inc(difficult_nv),                                   # 13 ditto, nouns+verbs
        inc(out_of_kelly),                                   # 14
        inc(missing_lemma),                                  # 15
        ratio(sum(log_freqs), len(log_freqs)),               # 16 mean matched log freq
        dep.avg_arc_length,                                  # 17
        inc(dep.long_arc_count),                             # 18
        float(dep.root_depth),                               # 19
        dep.right_ratio,                                     # 20
        dep.left_ratio,                                      # 21
        variation(premod_c + postmod_c, lexical),            # 22
        inc(premod_c),                                       # 23
        inc(postmod_c),                                      # 24
        inc(dep_count(dep_of["subordinate_clause"])),        # 25
        inc(dep_count(dep_of["relative_clause"])),           # 26
        inc(dep_count(dep_of["prepositional_complement"])),  # 27
        ratio(sum(sense_values), len(sense_values)),         # 28
        ratio(sum(noun_sense_values), len(noun_sense_values)),  # 29
        ratio(modal_c, verb_c),                              # 30
        inc(pos_count(pos_of["particle"])),                  # 31
        inc(pron3sg_c),                                      # 32
        inc(punct_c),                                        # 33
        inc(subj_c),                                         # 34
        inc(s_verb),                                         # 35
        ratio(s_verb, verb_c),                               # 36
        inc(adj_c),                                          # 37
        variation(adj_c, lexical),                           # 38
        inc(adv_c),                                          # 39
        variation(adv_c, lexical),                           # 40
        inc(noun_c),                                         # 41
        variation(noun_c, lexical),                          # 42
        inc(verb_c),                                         # 43
        variation(verb_c, lexical),                          # 44
        nominal_ratio(noun_c + prep_c + participle_c, pron_c + adv_c + verb_c),  # 45
        ratio(noun_c, verb_c),                               # 46
        inc(pos_count(pos_of["function_word"])),             # 47
        ratio(lexical, n - lexical),                         # 48
        ratio(lexical, n),                                   # 49
        inc(neuter_noun_c),                                  # 50
        inc(conj_c + subj_c),                                # 51
        ratio(past_part_c, verb_c),                          # 52
        ratio(pres_part_c, verb_c),                          # 53
        ratio(preterite_c, verb_c),                          # 54
        ratio(present_c, verb_c),                            # 55
        ratio(supine_c, verb_c),                             # 56
        inc(pos_count(pos_of["relative_structure"])),        # 57
        bilog,                                               # 58
        root_ttr,                                            # 59
        ratio(pron_c, noun_c),                               # 60
        ratio(pron_c, prep_c),                               # 61
    )
    return np.array(values, dtype=np.float64)


def extraction_diagnostics(sentence: Sentence, ctx: ExtractionContext) -> dict[str, int]:
    """Raw tallies behind the normalized features, for inspection."""
    tokens = sentence.tokens
    punctuation = ctx.category_map.pos["punctuation"]
    diag = {
        "tokens": len(tokens),
        "long_words": sum(1 for t in tokens if len(t.form) > LONG_WORD_CHARS),
        "extra_long_words": sum(1 for t in tokens if len(t.form) > EXTRA_LONG_CHARS),
        "missing_lemma": sum(1 for t in tokens if not t.lemma),
        "kelly_exact": 0,
        "kelly_fallback": 0,
        "out_of_kelly": 0,
        "sense_hits": 0,
    }
    for t in tokens:
        if not t.lemma:
            continue
        _, source = ctx.kelly.lookup_detail(t.lemma, t.pos)
        if source == "miss":
            if t.pos not in punctuation:
                diag["out_of_kelly"] += 1
        else:
            diag[f"kelly_{source}"] += 1
        if ctx.senses.lookup(t.lemma, t.pos) is not None:
            diag["sense_hits"] += 1
    return diag


def aggregate_document(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Componentwise mean of sentence vectors; the document-level vector."""
    if len(vectors) == 0:
        raise ValueError("cannot aggregate zero feature vectors")
    return np.mean(np.asarray(vectors, dtype=np.float64), axis=0)


def extract_document_features(document: Document, ctx: ExtractionContext) -> np.ndarray:
    return aggregate_document([extract_sentence_features(s, ctx) for s in document.sentences])


def corpus_features(
    corpus,
    ctx: ExtractionContext,
    unit: str = "text",
    gold_reference: bool = True,
) -> tuple[list[str], list[CefrLevel], np.ndarray]:
    """Featurize every unit of one kind in a corpus.

    ``unit`` is "text" (documents, sentence vectors averaged) or "sentence"
    (standalone sentences). With ``gold_reference`` and a "use-reference"
    context, each unit's own label anchors the difficult-word features, the
    convention for featurizing labeled data.
    Returns unit ids, gold labels, and the N x 61 matrix in corpus order.
    """
    if unit not in ("text", "sentence"):
        raise ValueError(f"unknown unit kind {unit!r} (expected text or sentence)")
    ids: list[str] = []
    levels: list[CefrLevel] = []
    rows: list[np.ndarray] = []

    def unit_ctx(level: CefrLevel) -> ExtractionContext:
        if gold_reference and ctx.level_dependent_mode == "use-reference":
            return ctx.with_reference(level)
        return ctx

    if unit == "text":
        for doc in corpus.documents:
            ids.append(doc.id)
            levels.append(doc.level)
            rows.append(extract_document_features(doc, unit_ctx(doc.level)))
    else:
        for labeled in corpus.standalone_sentences:
            ids.append(labeled.sentence.id)
            levels.append(labeled.level)
            rows.append(extract_sentence_features(labeled.sentence, unit_ctx(labeled.level)))
    matrix = np.vstack(rows) if rows else np.empty((0, N_FEATURES))
    return ids, levels, matrix


def whole_text_lix(sentences: Iterable[Sentence]) -> float:
    """LIX over a whole text (pooled counts), as the classic formula has it.

    Differs from averaging per-sentence LIX values, which is the protocol the
    feature vector follows; both are useful for baseline comparisons.
    """
    sentences = list(sentences)
    words = sum(len(s.tokens) for s in sentences)
    long_words = sum(
        1 for s in sentences for t in s.tokens if len(t.form) > LONG_WORD_CHARS
    )
    return lix(words, len(sentences), long_words)


def select_feature_group(vector: np.ndarray, group: str) -> np.ndarray:
    """Slice a vector (or matrix, last axis) down to one feature subgroup."""
    if group not in FEATURE_GROUPS:
        raise ValueError(f"unknown feature group {group!r} (expected one of {sorted(FEATURE_GROUPS)})")
    return np.asarray(vector)[..., FEATURE_GROUPS[group]]


def group_feature_names(group: str) -> tuple[str, ...]:
    if group not in FEATURE_GROUPS:
        raise ValueError(f"unknown feature group {group!r} (expected one of {sorted(FEATURE_GROUPS)})")
    return tuple(FEATURE_NAMES[i] for i in FEATURE_GROUPS[group])
