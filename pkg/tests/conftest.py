import pytest

from cefrlab import (
    CefrLevel,
    ExtractionContext,
    default_category_map,
    load_kelly,
    load_senses,
    parse_corpus,
)

# The documented 5-token fixture sentence. Kelly knows jag/en (A1) and
# katt (A2); the verb's lemma "se" and the punctuation lemma "." are absent.
GOLDEN_CORPUS = """\
# doc_id = fix1
# level = A1
# sent_id = fix1-s1
1\tJag\tjag\tPN\tUTR|SIN|DEF|SUB\t2\tSS\t_
2\tser\tse\tVB\tPRS|AKT\t0\tROOT\t_
3\ten\ten\tDT\tUTR|SIN|IND\t4\tDT\t_
4\tkatt\tkatt\tNN\tUTR|SIN|IND|NOM\t2\tOO\t_
5\t.\t.\tMAD\t_\t2\tIP\t_
"""

GOLDEN_KELLY = "jag\tPN\tA1\t10.0\nen\tDT\tA1\t9.0\nkatt\tNN\tA2\t5.5\n"
GOLDEN_SENSES = "jag\tPN\t1\nse\tVB\t4\nen\tDT\t1\nkatt\tNN\t2\n"


@pytest.fixture(scope="session")
def catmap():
    return default_category_map()


@pytest.fixture(scope="session")
def golden_sentence():
    return parse_corpus(GOLDEN_CORPUS).documents[0].sentences[0]


@pytest.fixture(scope="session")
def golden_ctx(catmap):
    return ExtractionContext(
        kelly=load_kelly(GOLDEN_KELLY),
        senses=load_senses(GOLDEN_SENSES),
        category_map=catmap,
        reference_level=CefrLevel.A1,
    )
