"""Deterministic synthetic corpus, word-list and sense-lexicon generation.

The generator induces difficulty through exactly the signals the feature
catalog measures: higher levels get longer sentences, longer and rarer
words, more subordinate and relative clauses, more passives and participles.
That keeps pipeline sensitivity attributable and makes the default bundle
linearly separable by level.

Everything flows from one PCG64 generator seeded by the config, so a given
config reproduces the bundle byte for byte within this implementation
(structure, not bytes, is what transfers across implementations; the
manifest records the algorithm for that reason).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .levels import CLASSIFICATION_LEVELS, CefrLevel
from .lexicon import default_category_map_text

_CONSONANTS = "bdfgklmnprstv"
_VOWELS = "aeiouyåäö"

# Closed-class inventory: (form, lemma, pos). These all enter the generated
# Kelly list at A1 so they never pollute the out-of-list signal.
_PRONOUNS = [("jag", "jag"), ("du", "du"), ("han", "han"), ("hon", "hon"),
             ("den", "den"), ("det", "det"), ("vi", "vi"), ("de", "de")]
_DETERMINERS = [("en", "en"), ("ett", "ett")]
_PREPOSITIONS = [("på", "på"), ("i", "i"), ("till", "till"), ("med", "med"), ("om", "om")]
_CONJUNCTIONS = [("och", "och"), ("men", "men"), ("eller", "eller")]
_SUBJUNCTIONS = [("att", "att"), ("när", "när"), ("eftersom", "eftersom")]
_REL_PRONOUN = ("som", "som")  # tagged HP, the relative-structure signal
_MODALS = [("kan", "kunna"), ("vill", "vilja"), ("måste", "måste")]
_ADVERBS = [("nu", "nu"), ("ofta", "ofta"), ("aldrig", "aldrig"), ("kanske", "kanske")]


@dataclass(frozen=True)
class GenConfig:
    """Knobs for the synthetic bundle; per-level tuples run A1..C1.

    Defaults are monotone in level so every complexity signal points the
    same way.
    """

    seed: int = 42
    docs_per_level: int = 120
    standalone_per_level: int = 30
    sentences_per_doc_mean: tuple[float, ...] = (6.0, 7.0, 8.0, 9.0, 10.0)
    sentence_length_mean: tuple[float, ...] = (6.0, 9.0, 12.0, 15.0, 18.0)
    lexicon_size: int = 600
    long_word_prob: tuple[float, ...] = (0.05, 0.12, 0.2, 0.3, 0.4)
    subordinate_prob: tuple[float, ...] = (0.05, 0.15, 0.3, 0.45, 0.6)
    oov_prob: tuple[float, ...] = (0.005, 0.01, 0.03, 0.05, 0.08)
    missing_lemma_prob: tuple[float, ...] = (0.0, 0.002, 0.004, 0.006, 0.01)
    # Sampling weight put on each Kelly level (A1..C2) per text level.
    kelly_mix: tuple[tuple[float, ...], ...] = field(
        default=(
            (0.70, 0.22, 0.06, 0.02, 0.00, 0.00),
            (0.30, 0.45, 0.18, 0.05, 0.02, 0.00),
            (0.10, 0.25, 0.40, 0.18, 0.05, 0.02),
            (0.04, 0.10, 0.25, 0.38, 0.18, 0.05),
            (0.02, 0.05, 0.13, 0.25, 0.35, 0.20),
        )
    )

    def validate(self) -> None:
        if self.lexicon_size < 60:
            raise ValueError("lexicon_size must be at least 60 (10 lemmas per Kelly level)")
        if self.docs_per_level < 0 or self.standalone_per_level < 0:
            raise ValueError("unit counts must be >= 0")
        for name in ("sentences_per_doc_mean", "sentence_length_mean"):
            values = getattr(self, name)
            if len(values) != 5 or any(v <= 0 for v in values):
                raise ValueError(f"{name} needs 5 positive values")
        for name in ("long_word_prob", "subordinate_prob", "oov_prob", "missing_lemma_prob"):
            values = getattr(self, name)
            if len(values) != 5 or any(not 0 <= v <= 1 for v in values):
                raise ValueError(f"{name} needs 5 probabilities")
        if len(self.kelly_mix) != 5 or any(len(row) != 6 for row in self.kelly_mix):
            raise ValueError("kelly_mix must be 5 rows of 6 weights")


@dataclass(frozen=True)
class GeneratedBundle:
    """The four pipeline input files plus a provenance manifest, as text."""

    corpus: str
    kelly: str
    senses: str
    category_map: str
    manifest: str

    def write(self, out_dir: str | Path) -> dict[str, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "corpus": out / "corpus.tsv",
            "kelly": out / "kelly.tsv",
            "senses": out / "senses.tsv",
            "category_map": out / "catmap.cfg",
            "manifest": out / "manifest.json",
        }
        for name, path in paths.items():
            path.write_text(getattr(self, name), encoding="utf-8")
        return paths


@dataclass(frozen=True)
class _Lex:
    lemma: str
    pos: str
    kelly_level: CefrLevel | None  # None = deliberately out of the word list
    senses: int


class _Vocabulary:
    def __init__(self, cfg: GenConfig, rng: np.random.Generator):
        self.content: dict[str, dict[int, list[_Lex]]] = {
            "NN": {}, "VB": {}, "JJ": {}, "AB": {}
        }
        self.oov: dict[str, list[_Lex]] = {"NN": [], "VB": [], "JJ": []}
        self.closed: list[_Lex] = []
        per_level = cfg.lexicon_size // 6
        made: set[str] = set()
        for level_num in range(1, 7):
            pools = {pos: [] for pos in self.content}
            for i in range(per_level):
                pos = ("NN", "VB", "JJ", "AB")[i % 4]
                # Word length grows with lexicon level; every 4th word is
                # long and a fraction of those extra-long, feeding the
                # length-based features.
                syllables = 1 + (level_num + 1) // 2
                if i % 4 == 3:
                    syllables += 2
                    if i % 20 == 19:
                        syllables += 3
                lemma = self._coin_word(rng, syllables, made)
                senses = 1 + int(rng.integers(0, max(1, 8 - level_num)))
                pools[pos].append(_Lex(lemma, pos, CefrLevel(level_num), senses))
            for pos, pool in pools.items():
                self.content[pos][level_num] = pool
        for pos in self.oov:
            for _ in range(6):
                lemma = self._coin_word(rng, 4, made)
                self.oov[pos].append(_Lex(lemma, pos, None, 1))
        for _form, lemma in _PRONOUNS + _DETERMINERS + _PREPOSITIONS + _CONJUNCTIONS + _SUBJUNCTIONS:
            self.closed.append(_Lex(lemma, "CLOSED", CefrLevel.A1, 1 + int(rng.integers(0, 3))))
        self.closed.append(_Lex(_REL_PRONOUN[1], "CLOSED", CefrLevel.A1, 1))
        for _, lemma in _MODALS:
            self.closed.append(_Lex(lemma, "CLOSED", CefrLevel.A1, 2))

    @staticmethod
    def _coin_word(rng: np.random.Generator, syllables: int, made: set[str]) -> str:
        while True:
            parts = []
            for _ in range(syllables):
                parts.append(_CONSONANTS[rng.integers(len(_CONSONANTS))])
                parts.append(_VOWELS[rng.integers(len(_VOWELS))])
            if rng.random() < 0.4:
                parts.append(_CONSONANTS[rng.integers(len(_CONSONANTS))])
            word = "".join(parts)
            if word not in made:
                made.add(word)
                return word

    def sample_content(
        self, rng: np.random.Generator, pos: str, level_idx: int, cfg: GenConfig
    ) -> _Lex:
        if pos in self.oov and rng.random() < cfg.oov_prob[level_idx]:
            pool = self.oov[pos]
            return pool[int(rng.integers(len(pool)))]
        weights = np.asarray(cfg.kelly_mix[level_idx], dtype=np.float64)
        weights = weights / weights.sum()
        kelly_level = 1 + int(rng.choice(6, p=weights))
        pool = self.content[pos][kelly_level]
        if rng.random() < cfg.long_word_prob[level_idx]:
            long_pool = [w for w in pool if len(w.lemma) > 6]
            if long_pool:
                return long_pool[int(rng.integers(len(long_pool)))]
        return pool[int(rng.integers(len(pool)))]


class _TreeSentence:
    """Token list under construction; heads resolve from parent links."""

    def __init__(self) -> None:
        self.rows: list[tuple[str, str, str, str, int | None, str]] = []

    def add(self, form: str, lemma: str, pos: str, msd: str, parent: int | None, deprel: str) -> int:
        self.rows.append((form, lemma, pos, msd, parent, deprel))
        return len(self.rows) - 1

    def render(self) -> list[str]:
        lines = []
        for i, (form, lemma, pos, msd, parent, deprel) in enumerate(self.rows):
            head = 0 if parent is None else parent + 1
            lines.append(f"{i + 1}\t{form}\t{lemma}\t{pos}\t{msd}\t{head}\t{deprel}\t_")
        return lines

    def __len__(self) -> int:
        return len(self.rows)


def _verb_token(rng: np.random.Generator, lex: _Lex, level_idx: int) -> tuple[str, str]:
    """Inflect a verb lemma; higher levels use more past/supine/passive forms."""
    r = rng.random()
    past_share = 0.1 + 0.1 * level_idx
    supine_share = 0.05 * level_idx
    passive_share = 0.04 * level_idx
    if r < passive_share:
        return lex.lemma + "as", "PRS|SFO"
    if r < passive_share + supine_share:
        return lex.lemma + "t", "SUP|AKT"
    if r < passive_share + supine_share + past_share:
        return lex.lemma + "de", "PRT|AKT"
    return lex.lemma + "r", "PRS|AKT"


def _noun_token(rng: np.random.Generator, lex: _Lex) -> tuple[str, str]:
    gender = "NEU" if rng.random() < 0.3 else "UTR"
    return lex.lemma, f"{gender}|SIN|IND|NOM"


def _build_sentence(
    rng: np.random.Generator, vocab: _Vocabulary, cfg: GenConfig, level_idx: int
) -> _TreeSentence:
    tree = _TreeSentence()
    target = max(4, int(round(rng.normal(cfg.sentence_length_mean[level_idx], 1.5))))

    def lemma_or_gap(lemma: str) -> str:
        if rng.random() < cfg.missing_lemma_prob[level_idx]:
            return "_"
        return lemma

    def noun_phrase(parent_slot: list[int], deprel: str, allow_adj: bool) -> int:
        # parent_slot is a one-element list so the head index can be patched
        # in after the verb is placed.
        det = _DETERMINERS[int(rng.integers(len(_DETERMINERS)))]
        det_i = tree.add(det[0], det[1], "DT", "_", None, "DT")
        adj_i = None
        if allow_adj and rng.random() < 0.25 + 0.08 * level_idx:
            adj = vocab.sample_content(rng, "JJ", level_idx, cfg)
            adj_i = tree.add(adj.lemma, lemma_or_gap(adj.lemma), "JJ", "POS", None, "AT")
        noun = vocab.sample_content(rng, "NN", level_idx, cfg)
        form, msd = _noun_token(rng, noun)
        noun_i = tree.add(form, lemma_or_gap(noun.lemma), "NN", msd, None, deprel)
        tree.rows[det_i] = tree.rows[det_i][:4] + (noun_i,) + tree.rows[det_i][5:]
        if adj_i is not None:
            tree.rows[adj_i] = tree.rows[adj_i][:4] + (noun_i,) + tree.rows[adj_i][5:]
        parent_slot.append(noun_i)
        return noun_i

    def patch_parent(token_i: int, parent_i: int) -> None:
        tree.rows[token_i] = tree.rows[token_i][:4] + (parent_i,) + tree.rows[token_i][5:]

    def clause(deprel: str, attach_to: int | None, with_subjunction: bool) -> int:
        """SVO clause; returns the clause verb index."""
        sn_i = None
        if with_subjunction:
            sub = _SUBJUNCTIONS[int(rng.integers(len(_SUBJUNCTIONS)))]
            # Clause-initial subjunction; its head (the clause verb) follows.
            sn_i = tree.add(sub[0], sub[1], "SN", "_", None, "UK")
        subj_kind = rng.random()
        subj_slot: list[int] = []
        if subj_kind < 0.5:
            pron = _PRONOUNS[int(rng.integers(len(_PRONOUNS)))]
            subj_i = tree.add(pron[0], pron[1], "PN", "_", None, "SS")
            subj_slot.append(subj_i)
        else:
            noun_phrase(subj_slot, "SS", allow_adj=True)
        use_modal = rng.random() < 0.05 + 0.06 * level_idx
        verb_lex = vocab.sample_content(rng, "VB", level_idx, cfg)
        if use_modal:
            modal = _MODALS[int(rng.integers(len(_MODALS)))]
            verb_i = tree.add(modal[0], modal[1], "VB", "PRS|AKT", attach_to, deprel)
            tree.add(verb_lex.lemma, lemma_or_gap(verb_lex.lemma), "VB", "INF|AKT", verb_i, "VG")
        else:
            form, msd = _verb_token(rng, verb_lex, level_idx)
            verb_i = tree.add(form, lemma_or_gap(verb_lex.lemma), "VB", msd, attach_to, deprel)
        patch_parent(subj_slot[-1], verb_i)
        obj_slot: list[int] = []
        noun_phrase(obj_slot, "OO", allow_adj=True)
        patch_parent(obj_slot[-1], verb_i)
        if sn_i is not None:
            patch_parent(sn_i, verb_i)
        return verb_i

    # Main clause, optionally preceded by an adverb.
    if rng.random() < 0.15 + 0.1 * level_idx:
        adv = _ADVERBS[int(rng.integers(len(_ADVERBS)))]
        adv_i = tree.add(adv[0], adv[1], "AB", "_", None, "AA")
    else:
        adv_i = None
    root_i = clause("ROOT", None, with_subjunction=False)
    if adv_i is not None:
        patch_parent(adv_i, root_i)

    def add_pp(attach_i: int) -> None:
        prep = _PREPOSITIONS[int(rng.integers(len(_PREPOSITIONS)))]
        pp_i = tree.add(prep[0], prep[1], "PP", "_", attach_i, "ET" if rng.random() < 0.5 else "AA")
        noun = vocab.sample_content(rng, "NN", level_idx, cfg)
        form, msd = _noun_token(rng, noun)
        tree.add(form, lemma_or_gap(noun.lemma), "NN", msd, pp_i, "PA")

    def add_relative(attach_noun: int) -> None:
        verb_lex = vocab.sample_content(rng, "VB", level_idx, cfg)
        form, msd = _verb_token(rng, verb_lex, level_idx)
        rel_marker = tree.add(_REL_PRONOUN[0], _REL_PRONOUN[1], "HP", "_", None, "SS")
        rel_verb = tree.add(form, lemma_or_gap(verb_lex.lemma), "VB", msd, attach_noun, "EF")
        patch_parent(rel_marker, rel_verb)
        noun = vocab.sample_content(rng, "NN", level_idx, cfg)
        nform, nmsd = _noun_token(rng, noun)
        tree.add(nform, lemma_or_gap(noun.lemma), "NN", nmsd, rel_verb, "OO")

    # Grow toward the target length with PPs, clauses, and coordinations.
    guard = 0
    while len(tree) < target - 1 and guard < 20:
        guard += 1
        roll = rng.random()
        if roll < cfg.subordinate_prob[level_idx]:
            if rng.random() < 0.35:
                # Relative clause on the most recent noun.
                nouns = [i for i, row in enumerate(tree.rows) if row[2] == "NN"]
                if nouns:
                    add_relative(nouns[-1])
            else:
                clause("UA", root_i, with_subjunction=True)
        elif roll < 0.6:
            add_pp(root_i)
        elif roll < 0.8:
            adv = _ADVERBS[int(rng.integers(len(_ADVERBS)))]
            tree.add(adv[0], adv[1], "AB", "_", root_i, "AA")
        else:
            conj = _CONJUNCTIONS[int(rng.integers(len(_CONJUNCTIONS)))]
            tree.add(conj[0], conj[1], "KN", "_", root_i, "++")
            nouns = [i for i, row in enumerate(tree.rows) if row[2] == "NN"]
            noun = vocab.sample_content(rng, "NN", level_idx, cfg)
            form, msd = _noun_token(rng, noun)
            tree.add(form, lemma_or_gap(noun.lemma), "NN", msd, nouns[-1] if nouns else root_i, "CJ")
    tree.add(".", ".", "MAD", "_", root_i, "IP")
    return tree


def generate_corpus(cfg: GenConfig = GenConfig()) -> GeneratedBundle:
    """Produce the corpus/kelly/senses/catmap bundle for a config.

    The same config yields byte-identical output on every run.
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    vocab = _Vocabulary(cfg, rng)

    corpus_lines = [
        f"# generator = cefrlab-datagen rng=pcg64 seed={cfg.seed}",
    ]
    for level_idx, level in enumerate(CLASSIFICATION_LEVELS):
        for d in range(cfg.docs_per_level):
            corpus_lines.append(f"# doc_id = {level}-d{d + 1:03d}")
            corpus_lines.append(f"# level = {level}")
            n_sent = max(1, int(round(rng.normal(cfg.sentences_per_doc_mean[level_idx], 1.0))))
            for s in range(n_sent):
                corpus_lines.append(f"# sent_id = {level}-d{d + 1:03d}-s{s + 1}")
                corpus_lines.extend(_build_sentence(rng, vocab, cfg, level_idx).render())
                corpus_lines.append("")
    if cfg.standalone_per_level:
        corpus_lines.append("# unit = sentence")
        for level_idx, level in enumerate(CLASSIFICATION_LEVELS):
            for s in range(cfg.standalone_per_level):
                corpus_lines.append(f"# level = {level}")
                corpus_lines.append(f"# sent_id = {level}-x{s + 1:03d}")
                corpus_lines.extend(_build_sentence(rng, vocab, cfg, level_idx).render())
                corpus_lines.append("")
    corpus_text = "\n".join(corpus_lines) + "\n"

    kelly_lines = [f"# generator = cefrlab-datagen rng=pcg64 seed={cfg.seed}"]
    senses_lines = [f"# generator = cefrlab-datagen rng=pcg64 seed={cfg.seed}"]
    pos_map = {"NN": "NN", "VB": "VB", "JJ": "JJ", "AB": "AB", "CLOSED": None}
    closed_pos: dict[str, str] = {}
    for form, lemma in _PRONOUNS:
        del form
        closed_pos[lemma] = "PN"
    for pair, pos in (
        (_DETERMINERS, "DT"), (_PREPOSITIONS, "PP"), (_CONJUNCTIONS, "KN"), (_SUBJUNCTIONS, "SN")
    ):
        for _, lemma in pair:
            closed_pos[lemma] = pos
    closed_pos[_REL_PRONOUN[1]] = "HP"
    for _, lemma in _MODALS:
        closed_pos[lemma] = "VB"

    def emit_lex(lex: _Lex, pos: str) -> None:
        if lex.kelly_level is not None:
            log_freq = 9.0 - 1.2 * (int(lex.kelly_level) - 1) + round(float(rng.uniform(-0.3, 0.3)), 4)
            kelly_lines.append(f"{lex.lemma}\t{pos}\t{lex.kelly_level}\t{log_freq:.4f}")
        senses_lines.append(f"{lex.lemma}\t{pos}\t{lex.senses}")

    for pos in ("NN", "VB", "JJ", "AB"):
        for level_num in range(1, 7):
            for lex in vocab.content[pos][level_num]:
                emit_lex(lex, pos_map[pos])
    for lex in vocab.closed:
        emit_lex(lex, closed_pos[lex.lemma])

    manifest = {
        "generator": "cefrlab-datagen",
        "rng": "pcg64",
        "config": asdict(cfg),
        "files": ["corpus.tsv", "kelly.tsv", "senses.tsv", "catmap.cfg"],
    }
    return GeneratedBundle(
        corpus=corpus_text,
        kelly="\n".join(kelly_lines) + "\n",
        senses="\n".join(senses_lines) + "\n",
        category_map=default_category_map_text(),
        manifest=json.dumps(manifest, indent=1, sort_keys=True, ensure_ascii=False) + "\n",
    )
