"""
The 61-feature complexity vector
--------------------------------

Every sentence maps to 61 numbers: length-based measures (incl. LIX),
word-list lookups against a Kelly-style resource, dependency-structure
statistics, sense counts, and morphology ratios. Incidence scores (IncSc)
are counts per 1000 tokens, so sentence length barely influences them.

This script featurizes one sentence with a three-word Kelly list and prints
every named value, then shows how sentence vectors average into a document
vector.
"""

import numpy as np

from cefrlab import (
    CefrLevel,
    ExtractionContext,
    FEATURE_NAMES,
    aggregate_document,
    default_category_map,
    extract_sentence_features,
    load_kelly,
    load_senses,
    parse_corpus,
    select_feature_group,
)

corpus = parse_corpus("""\
# doc_id = demo
# level = A1
# sent_id = s1
1\tJag\tjag\tPN\tUTR|SIN|DEF|SUB\t2\tSS\t_
2\tser\tse\tVB\tPRS|AKT\t0\tROOT\t_
3\ten\ten\tDT\tUTR|SIN|IND\t4\tDT\t_
4\tkatt\tkatt\tNN\tUTR|SIN|IND|NOM\t2\tOO\t_
5\t.\t.\tMAD\t_\t2\tIP\t_

# sent_id = s2
1\tKatten\tkatt\tNN\tUTR|SIN|DEF|NOM\t2\tSS\t_
2\tjagas\tjaga\tVB\tPRS|SFO\t0\tROOT\t_
3\t.\t.\tMAD\t_\t2\tIP\t_
""")

ctx = ExtractionContext(
    kelly=load_kelly("jag\tPN\tA1\t10.0\nen\tDT\tA1\t9.0\nkatt\tNN\tA2\t5.5\n"),
    senses=load_senses("jag\tPN\t1\nse\tVB\t4\nen\tDT\t1\nkatt\tNN\t2\n"),
    category_map=default_category_map(),
    reference_level=CefrLevel.A1,
)

doc = corpus.documents[0]
vector = extract_sentence_features(doc.sentences[0], ctx)
print("features of 'Jag ser en katt .':")
for name, value in zip(FEATURE_NAMES, vector):
    print(f"  {name:32s} {value:10.4f}")

# Things worth noticing above:
#  - f06/f07: two A1 lemmas and one A2 lemma per 5 tokens -> 400 and 200
#  - f14: the verb's lemma is missing from the list -> 200 per 1000
#  - f12: with reference level A1, the A2 word counts as difficult
#  - f58/f59: all five forms distinct -> bilog TTR exactly 1

# The second sentence has an s-form (passive) verb; compare the two.
vector2 = extract_sentence_features(doc.sentences[1], ctx)
print("\ns-verb features of 'Katten jagas .':")
print(f"  f35_s_verb_incsc   {vector2[34]:.1f}")
print(f"  f36_s_verb_to_verb {vector2[35]:.1f}")

# A document's vector is the per-dimension mean over its sentences.
doc_vector = aggregate_document([vector, vector2])
print(f"\ndocument sentence length: {doc_vector[0]:.2f} (mean of 5 and 3)")

# Experiments often restrict to one subgroup; the lexical slice has 11 dims.
lex = select_feature_group(doc_vector, "Lex")
print(f"Lex group shape: {lex.shape}")
print(f"All group shape: {np.asarray(select_feature_group(doc_vector, 'All')).shape}")
