"""Pure-Python tokenizer kernel.

Fallback used when the compiled extension (`rarelex._ctokenize`) is not
built.  Both kernels implement the same segmentation: the line is
lowercase-folded, then maximal runs of Unicode letters/digits are emitted,
joined across a single internal hyphen or apostrophe.  Everything else is a
separator.
"""

import re

# [^\W_] is "word char minus underscore", i.e. exactly the characters for
# which str.isalnum() is true; the C kernel relies on that equivalence.
TOKEN_PATTERN = r"[^\W_]+(?:['-][^\W_]+)*"

_TOKEN_RE = re.compile(TOKEN_PATTERN)


def tokenize(text):
    """Lowercase-fold `text` and return its tokens in order."""
    return _TOKEN_RE.findall(text.lower())


def count_into(text, counts):
    """Count the tokens of one line into `counts`; returns tokens seen."""
    n = 0
    for tok in _TOKEN_RE.findall(text.lower()):
        counts[tok] = counts.get(tok, 0) + 1
        n += 1
    return n
