"""
Parsing an annotated corpus
---------------------------

Corpora arrive as tab-separated token lines grouped into sentences, with
comment lines carrying document ids, CEFR levels, and the unit kind. This
walk-through builds a tiny two-document corpus inline, parses it, checks it
structurally, and prints the per-level summary table.
"""

from cefrlab import corpus_stats, parse_corpus, serialize_corpus, validate_corpus

raw = """\
# doc_id = lesson1-text1
# level = A1
# sent_id = s1
1\tJag\tjag\tPN\tUTR|SIN|DEF|SUB\t2\tSS\t_
2\tser\tse\tVB\tPRS|AKT\t0\tROOT\t_
3\ten\ten\tDT\tUTR|SIN|IND\t4\tDT\t_
4\tkatt\tkatt\tNN\tUTR|SIN|IND|NOM\t2\tOO\t_
5\t.\t.\tMAD\t_\t2\tIP\t_

# sent_id = s2
1\tKatten\tkatt\tNN\tUTR|SIN|DEF|NOM\t2\tSS\t_
2\tsover\tsova\tVB\tPRS|AKT\t0\tROOT\t_
3\t.\t.\tMAD\t_\t2\tIP\t_

# doc_id = lesson9-text4
# level = B2
# sent_id = s3
1\tForskningen\tforskning\tNN\tUTR|SIN|DEF|NOM\t2\tSS\t_
2\tvisar\tvisa\tVB\tPRS|AKT\t0\tROOT\t_
3\tatt\tatt\tSN\t_\t5\tUK\t_
4\tkatter\tkatt\tNN\tUTR|PLU|IND|NOM\t5\tSS\t_
5\tsover\tsova\tVB\tPRS|AKT\t2\tUA\t_
6\tmycket\tmycket\tAB\t_\t5\tAA\t_
7\t.\t.\tMAD\t_\t2\tIP\t_

# unit = sentence
# level = A2
# sent_id = ex1
1\tHunden\thund\tNN\tUTR|SIN|DEF|NOM\t2\tSS\t_
2\täter\täta\tVB\tPRS|AKT\t0\tROOT\t_
3\t.\t.\tMAD\t_\t2\tIP\t_
"""

corpus = parse_corpus(raw)
print(f"documents: {len(corpus.documents)}")
print(f"standalone sentences: {len(corpus.standalone_sentences)}")
for doc in corpus.documents:
    print(f"  {doc.id}: level {doc.level}, {len(doc.sentences)} sentences")

# A freshly parsed corpus should be structurally clean; issues would list
# problems like missing roots or empty documents.
issues = validate_corpus(corpus)
print(f"validation issues: {len(issues)}")

# Per-level summary in the shape of a corpus-description table.
stats = corpus_stats(corpus)
print("\nlevel  texts  mean_sentences  standalone")
for row in stats.rows:
    print(f"{row.level}     {row.text_count:5d}  {row.mean_sentences:14.1f}  {row.standalone_count:10d}")
total = stats.total
print(f"Total  {total.text_count:5d}  {total.mean_sentences:14.1f}  {total.standalone_count:10d}")

# Serialization round-trips: the rendered text parses back to an equal value.
assert parse_corpus(serialize_corpus(corpus)) == corpus
print("\nround trip: serialize -> parse reproduces the corpus exactly")
