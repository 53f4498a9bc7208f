"""rarelex: rare-word paraphrase annotation pipeline for prompt-based tuning.

Counts word frequencies over text corpora, selects rare medical words and
their single dictionary paraphrases, injects `word (paraphrase)` annotations
into task datasets, renders cloze prompts, samples seeded few-shot splits,
and statistically evaluates predictions from any external scorer.
"""

from .kernel import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
