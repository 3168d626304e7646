"""Dependency-annotated corpus model: parsing, validation, summary statistics.

The corpus file format is a CoNLL-like UTF-8 text: one token per line with
8 tab-separated columns (INDEX, FORM, LEMMA, POS, MSD, HEAD, DEPREL, MISC),
a blank line terminating each sentence, and ``# key = value`` comment lines
carrying unit metadata (``doc_id``, ``sent_id``, ``level``, ``unit``).
Comment keys other than those four are ignored, which leaves room for
provenance headers. Parsing is strict: the first structural error aborts
with a line-numbered diagnostic.
"""

from __future__ import annotations

import io
import statistics
from dataclasses import dataclass, field

from .levels import CLASSIFICATION_LEVELS, CefrLevel, parse_level

_COLUMNS = 8


class CorpusFormatError(ValueError):
    """Structural error in a corpus file, tied to a 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class AnnotatedToken:
    """One token of a dependency-annotated sentence.

    ``lemma`` is ``""`` when the lemmatizer produced nothing. ``head`` is the
    1-based index of the syntactic head, with 0 marking the root. ``msd``
    holds the morphological feature strings attached to the POS tag.
    """

    index: int
    form: str
    lemma: str
    pos: str
    msd: frozenset[str]
    head: int
    deprel: str


@dataclass(frozen=True)
class Sentence:
    id: str
    tokens: tuple[AnnotatedToken, ...]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Document:
    id: str
    level: CefrLevel
    sentences: tuple[Sentence, ...]


@dataclass(frozen=True)
class LabeledSentence:
    """A standalone sentence carrying its own CEFR label."""

    sentence: Sentence
    level: CefrLevel


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...] = ()
    standalone_sentences: tuple[LabeledSentence, ...] = ()

    @property
    def n_units(self) -> int:
        return len(self.documents) + len(self.standalone_sentences)


def _parse_token_line(line_no: int, line: str) -> AnnotatedToken:
    cols = line.split("\t")
    if len(cols) != _COLUMNS:
        raise CorpusFormatError(
            line_no, f"expected {_COLUMNS} tab-separated columns, got {len(cols)}"
        )
    raw_index, form, lemma, pos, msd, raw_head, deprel, _misc = cols
    try:
        index = int(raw_index)
    except ValueError:
        raise CorpusFormatError(line_no, f"non-integer token index {raw_index!r}") from None
    try:
        head = int(raw_head)
    except ValueError:
        raise CorpusFormatError(line_no, f"non-integer head {raw_head!r}") from None
    if index < 1:
        raise CorpusFormatError(line_no, f"token index must be >= 1, got {index}")
    if head < 0:
        raise CorpusFormatError(line_no, f"head must be >= 0, got {head}")
    if head == index:
        raise CorpusFormatError(line_no, f"token {index} cannot be its own head")
    features = frozenset(part for part in msd.split("|") if part and part != "_")
    return AnnotatedToken(
        index=index,
        form=form,
        lemma="" if lemma == "_" else lemma,
        pos=pos,
        msd=features,
        head=head,
        deprel=deprel,
    )


class _ParserState:
    """Mutable state for a single strict parsing pass."""

    def __init__(self) -> None:
        self.mode = "text"
        self.level: CefrLevel | None = None
        self.pending_sent_id: str | None = None
        self.tokens: list[AnnotatedToken] = []
        self.token_lines: list[int] = []
        self.doc_id: str | None = None
        self.doc_level: CefrLevel | None = None
        self.doc_sentences: list[Sentence] = []
        self.doc_open = False
        self.documents: list[Document] = []
        self.standalone: list[LabeledSentence] = []
        self.auto_doc = 0
        self.auto_sent = 0

    def close_document(self) -> None:
        if self.doc_open:
            assert self.doc_id is not None
            level = self.doc_level if self.doc_level is not None else self.level
            if level is None:
                # Only reachable for a document with zero sentences and no
                # level comment; default is irrelevant, validator flags it.
                level = CefrLevel.A1
            self.documents.append(
                Document(id=self.doc_id, level=level, sentences=tuple(self.doc_sentences))
            )
        self.doc_id = None
        self.doc_level = None
        self.doc_sentences = []
        self.doc_open = False

    def open_document(self, doc_id: str) -> None:
        self.close_document()
        self.doc_id = doc_id
        self.doc_open = True
        self.mode = "text"

    def check_no_pending_sentence(self, line_no: int) -> None:
        if self.pending_sent_id is not None and not self.tokens:
            raise CorpusFormatError(
                line_no, f"sentence {self.pending_sent_id!r} has zero tokens"
            )

    def complete_sentence(self, line_no: int) -> None:
        if not self.tokens:
            self.check_no_pending_sentence(line_no)
            return
        n = len(self.tokens)
        for tok, tok_line in zip(self.tokens, self.token_lines):
            if tok.head > n:
                raise CorpusFormatError(
                    tok_line, f"head {tok.head} out of range for a {n}-token sentence"
                )
        if self.level is None:
            raise CorpusFormatError(line_no, "no CEFR level declared for this unit")
        if self.pending_sent_id is not None:
            sent_id = self.pending_sent_id
        else:
            self.auto_sent += 1
            sent_id = f"s{self.auto_sent}"
        sentence = Sentence(id=sent_id, tokens=tuple(self.tokens))
        self.pending_sent_id = None
        self.tokens = []
        self.token_lines = []
        if self.mode == "sentence":
            self.standalone.append(LabeledSentence(sentence=sentence, level=self.level))
            return
        if not self.doc_open:
            self.auto_doc += 1
            self.open_document(f"doc{self.auto_doc}")
        if not self.doc_sentences:
            self.doc_level = self.level
        elif self.doc_level != self.level:
            raise CorpusFormatError(
                line_no, f"level changed inside document {self.doc_id!r}"
            )
        self.doc_sentences.append(sentence)


def parse_corpus(stream: io.TextIOBase | str) -> Corpus:
    """Parse a corpus file into a :class:`Corpus`.

    ``stream`` may be an open text file or the file content itself.
    Raises :class:`CorpusFormatError` on the first malformed line.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    state = _ParserState()
    line_no = 0
    for line_no, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            state.complete_sentence(line_no)
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" not in body:
                continue
            key, _, value = body.partition("=")
            key = key.strip()
            value = value.strip()
            if key == "doc_id":
                state.complete_sentence(line_no)
                state.check_no_pending_sentence(line_no)
                state.open_document(value)
            elif key == "sent_id":
                state.check_no_pending_sentence(line_no)
                state.pending_sent_id = value
            elif key == "level":
                try:
                    state.level = parse_level(value)
                except ValueError as exc:
                    raise CorpusFormatError(line_no, str(exc)) from None
            elif key == "unit":
                if value not in ("text", "sentence"):
                    raise CorpusFormatError(
                        line_no, f"unsupported unit kind {value!r} (expected text or sentence)"
                    )
                state.complete_sentence(line_no)
                state.check_no_pending_sentence(line_no)
                if value == "sentence":
                    state.close_document()
                    state.mode = "sentence"
                else:
                    if state.doc_sentences:
                        state.close_document()
                    state.mode = "text"
            # other comment keys are inert (provenance headers etc.)
            continue
        token = _parse_token_line(line_no, line)
        expected = len(state.tokens) + 1
        if token.index != expected:
            raise CorpusFormatError(
                line_no, f"token index {token.index} out of order (expected {expected})"
            )
        state.tokens.append(token)
        state.token_lines.append(line_no)
    state.complete_sentence(line_no + 1)
    state.check_no_pending_sentence(line_no + 1)
    state.close_document()
    return Corpus(
        documents=tuple(state.documents),
        standalone_sentences=tuple(state.standalone),
    )


def serialize_corpus(corpus: Corpus) -> str:
    """Render a corpus back to the file format.

    ``parse_corpus(serialize_corpus(c))`` reproduces ``c`` exactly.
    """
    out: list[str] = []

    def emit_sentence(sentence: Sentence) -> None:
        out.append(f"# sent_id = {sentence.id}")
        for tok in sentence.tokens:
            msd = "|".join(sorted(tok.msd)) if tok.msd else "_"
            lemma = tok.lemma if tok.lemma else "_"
            out.append(
                "\t".join(
                    (str(tok.index), tok.form, lemma, tok.pos, msd, str(tok.head), tok.deprel, "_")
                )
            )
        out.append("")

    for doc in corpus.documents:
        out.append(f"# doc_id = {doc.id}")
        out.append(f"# level = {doc.level}")
        for sentence in doc.sentences:
            emit_sentence(sentence)
    if corpus.standalone_sentences:
        out.append("# unit = sentence")
        for labeled in corpus.standalone_sentences:
            out.append(f"# level = {labeled.level}")
            emit_sentence(labeled.sentence)
    return "\n".join(out) + ("\n" if out else "")


@dataclass(frozen=True)
class ValidationIssue:
    severity: str  # "error" | "warning"
    unit_id: str
    code: str
    message: str


def _check_sentence(sent: Sentence, issues: list[ValidationIssue]) -> None:
    n = len(sent.tokens)
    indices = [t.index for t in sent.tokens]
    if sorted(indices) != list(range(1, n + 1)):
        code = "duplicate-index" if len(set(indices)) != n else "non-contiguous-index"
        issues.append(
            ValidationIssue("error", sent.id, code, f"token indices {indices} are not 1..{n}")
        )
    roots = [t for t in sent.tokens if t.head == 0]
    if not roots:
        issues.append(ValidationIssue("error", sent.id, "missing-root", "no token has head = 0"))
    elif len(roots) > 1:
        issues.append(
            ValidationIssue(
                "warning", sent.id, "multiple-roots", f"{len(roots)} tokens have head = 0"
            )
        )
    for tok in sent.tokens:
        if tok.head > n:
            issues.append(
                ValidationIssue(
                    "error", sent.id, "head-out-of-range",
                    f"token {tok.index} has head {tok.head} in a {n}-token sentence",
                )
            )
        if tok.head == tok.index:
            issues.append(
                ValidationIssue("error", sent.id, "self-head", f"token {tok.index} heads itself")
            )


def validate_corpus(corpus: Corpus) -> list[ValidationIssue]:
    """Collect structural issues. An empty list means the corpus is valid.

    Multiple roots are tolerated as a warning: upstream parsers disagree on
    whether punctuation attaches to the root or becomes one.
    """
    issues: list[ValidationIssue] = []
    for doc in corpus.documents:
        if not doc.sentences:
            issues.append(ValidationIssue("error", doc.id, "empty-document", "document has no sentences"))
        for sent in doc.sentences:
            _check_sentence(sent, issues)
    for labeled in corpus.standalone_sentences:
        _check_sentence(labeled.sentence, issues)
    return issues


@dataclass(frozen=True)
class LevelStats:
    level: CefrLevel | None  # None marks the totals row
    text_count: int
    mean_sentences: float
    standalone_count: int


@dataclass(frozen=True)
class CorpusStats:
    rows: tuple[LevelStats, ...] = field(default=())
    total: LevelStats = field(default=LevelStats(None, 0, 0.0, 0))


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Per-level unit counts plus a totals row (Table-1 style summary)."""
    rows = []
    for level in CLASSIFICATION_LEVELS:
        docs = [d for d in corpus.documents if d.level == level]
        sents = [s for s in corpus.standalone_sentences if s.level == level]
        mean = statistics.fmean(len(d.sentences) for d in docs) if docs else 0.0
        rows.append(LevelStats(level, len(docs), mean, len(sents)))
    all_docs = corpus.documents
    total_mean = statistics.fmean(len(d.sentences) for d in all_docs) if all_docs else 0.0
    total = LevelStats(None, len(all_docs), total_mean, len(corpus.standalone_sentences))
    return CorpusStats(rows=tuple(rows), total=total)
