"""Exact word-frequency tables over line-oriented text corpora.

The table is the substrate for the rarity threshold: a word is "rare" when
its count here falls below the configured cutoff.  Counting is exact (plain
hash map, no sketching) so the threshold stays a hard boundary, and tables
built from any partition of the input merge back to the sequential result.

Tokens are lowercase-folded runs of letters/digits joined across a single
internal hyphen or apostrophe ("covid-19" is one token, "don't" is one
token, leading/trailing joiners never attach).
"""

import concurrent.futures
import gzip
import io
from dataclasses import dataclass, field

from .kernel import count_into, tokenize

__all__ = [
    "FrequencyTable",
    "tokenize",
    "build_table",
    "merge",
    "relative_frequency",
    "save_table",
    "load_table",
]

GZIP_MAGIC = b"\x1f\x8b"


@dataclass
class FrequencyTable:
    """Word -> occurrence count over a corpus collection.

    Treated as immutable once built; `total_tokens` always equals the sum
    of `counts` values.
    """

    counts: dict = field(default_factory=dict)
    total_tokens: int = 0
    corpus_ids: list = field(default_factory=list)

    def count(self, word):
        return self.counts.get(word, 0)


def open_corpus(path):
    """Open a corpus file as UTF-8 text, transparently ungzipping.

    Gzip is detected by magic bytes, not by extension.  Invalid UTF-8 is
    replaced with U+FFFD.
    """
    raw = open(path, "rb")
    magic = raw.read(2)
    raw.seek(0)
    if magic == GZIP_MAGIC:
        stream = gzip.GzipFile(fileobj=raw)
    else:
        stream = raw
    return io.TextIOWrapper(stream, encoding="utf-8", errors="replace")


def count_file(path):
    """Single-pass count of one file; returns (counts, total_tokens)."""
    counts = {}
    total = 0
    with open_corpus(path) as fh:
        for line in fh:
            total += count_into(line, counts)
    return counts, total


def build_table(corpus_paths, workers=1):
    """Count every token in `corpus_paths` (one file per corpus id).

    With workers > 1 the files are counted in separate processes and the
    partial tables merged; the result is identical to the sequential count.
    Raises on an empty path list or an unreadable path (the OSError names
    the offending file).
    """
    paths = [str(p) for p in corpus_paths]
    if not paths:
        raise ValueError("empty corpus set")

    if workers > 1 and len(paths) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(count_file, paths))
    else:
        partials = [count_file(p) for p in paths]

    table = FrequencyTable()
    for path, (counts, total) in zip(paths, partials):
        table = merge(table, FrequencyTable(counts, total, [path]))
    return table


def merge(a, b):
    """Pointwise sum of two tables; corpus ids concatenate in order."""
    counts = dict(a.counts)
    for tok, c in b.counts.items():
        counts[tok] = counts.get(tok, 0) + c
    return FrequencyTable(
        counts, a.total_tokens + b.total_tokens, list(a.corpus_ids) + list(b.corpus_ids)
    )


def relative_frequency(table, word):
    """Fraction of the corpus occupied by `word` (0 for absent words)."""
    if table.total_tokens == 0:
        raise ValueError("empty table")
    return table.counts.get(word, 0) / table.total_tokens


def save_table(table, path):
    """Write the TSV form: `#total<TAB>N`, `#corpus<TAB>id` lines, then
    `token<TAB>count` rows sorted by (count desc, token asc)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"#total\t{table.total_tokens}\n")
        for cid in table.corpus_ids:
            fh.write(f"#corpus\t{cid}\n")
        for tok, c in sorted(table.counts.items(), key=lambda kv: (-kv[1], kv[0])):
            fh.write(f"{tok}\t{c}\n")


def load_table(path):
    """Read a table written by save_table, verifying the count total."""
    counts = {}
    total = None
    corpus_ids = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            key, _, value = line.partition("\t")
            if key == "#total":
                total = int(value)
            elif key == "#corpus":
                corpus_ids.append(value)
            elif key.startswith("#"):
                continue
            else:
                if key in counts:
                    raise ValueError(f"{path}:{lineno}: duplicate token {key!r}")
                counts[key] = int(value)
    if total is None:
        raise ValueError(f"{path}: missing #total header")
    if total != sum(counts.values()):
        raise ValueError(f"{path}: #total {total} != sum of counts {sum(counts.values())}")
    return FrequencyTable(counts, total, corpus_ids)
