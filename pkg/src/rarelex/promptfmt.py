"""Cloze prompt rendering and label/score verbalization.

Both tasks share the template `<sent1>. [MASK]. <sent2>`; the verbalizer
answers the mask.  MedNLI maps entailment/contradiction/neutral to
Yes/No/maybe.  MedSTS is a regression adapted to the Yes/No pair by
bounded linear interpolation: a similarity of s in [0,5] becomes the
probability pair (s/5, 1 - s/5), inverted exactly at evaluation time.
"""

import json
from dataclasses import dataclass, field

__all__ = [
    "MASK_MARKER",
    "TERMINAL_PUNCTUATION",
    "PromptTemplate",
    "PromptInstance",
    "MEDNLI_TEMPLATE",
    "MEDSTS_TEMPLATE",
    "get_template",
    "render_prompt",
    "verbalize",
    "unverbalize",
    "score_to_target",
    "prediction_to_score",
    "render_examples",
    "save_prompts",
    "load_prompts",
]

MASK_MARKER = "[MASK]"
TERMINAL_PUNCTUATION = (".", "!", "?")

_PLACEHOLDERS = ("{sent1}", "{mask}", "{sent2}")


@dataclass
class PromptTemplate:
    pattern: str
    verbalizers: list  # ordered (label, token) pairs; order breaks ties

    def __post_init__(self):
        for ph in _PLACEHOLDERS:
            if self.pattern.count(ph) != 1:
                raise ValueError(f"pattern must contain {ph} exactly once")
        if not self.verbalizers:
            raise ValueError("template needs at least one verbalizer")
        tokens = [tok for _, tok in self.verbalizers]
        labels = [lab for lab, _ in self.verbalizers]
        if len(set(tokens)) != len(tokens):
            raise ValueError("verbalizer tokens must be distinct")
        if len(set(labels)) != len(labels):
            raise ValueError("verbalizer labels must be distinct")

    @property
    def labels(self):
        return [lab for lab, _ in self.verbalizers]

    @property
    def candidates(self):
        return [tok for _, tok in self.verbalizers]


@dataclass
class PromptInstance:
    example_id: str
    rendered: str
    mask_offset: int  # UTF-8 byte offset of the mask marker
    candidate_tokens: list


MEDNLI_TEMPLATE = PromptTemplate(
    "{sent1} {mask}. {sent2}",
    [("entailment", "Yes"), ("contradiction", "No"), ("neutral", "maybe")],
)

MEDSTS_TEMPLATE = PromptTemplate(
    "{sent1} {mask}. {sent2}",
    [("similar", "Yes"), ("dissimilar", "No")],
)

_TEMPLATES = {"mednli": MEDNLI_TEMPLATE, "medsts": MEDSTS_TEMPLATE}


def get_template(task):
    try:
        return _TEMPLATES[task]
    except KeyError:
        raise ValueError(f"unknown task {task!r}; expected one of {sorted(_TEMPLATES)}") from None


def render_prompt(ex, tpl):
    """Substitute the sentences and mask into the template.

    Sentence 1 gains a terminal period only when it lacks terminal
    punctuation, so `He was stable` and `He was stable.` render the same.
    """
    if not ex.sentence1.strip() or not ex.sentence2.strip():
        raise ValueError(f"example {ex.id}: sentences must be non-empty")
    for s in (ex.sentence1, ex.sentence2):
        if MASK_MARKER in s:
            raise ValueError(f"example {ex.id}: sentence already contains {MASK_MARKER}")
    sent1 = ex.sentence1
    if not sent1.endswith(TERMINAL_PUNCTUATION):
        sent1 = sent1 + "."
    # Single pass over the pattern so sentence text can never be mistaken
    # for a placeholder.
    out = []
    rest = tpl.pattern
    while rest:
        positions = [(rest.find(ph), ph) for ph in _PLACEHOLDERS if ph in rest]
        if not positions:
            out.append(rest)
            break
        pos, ph = min(positions)
        out.append(rest[:pos])
        out.append({"{sent1}": sent1, "{sent2}": ex.sentence2, "{mask}": MASK_MARKER}[ph])
        rest = rest[pos + len(ph) :]
    rendered = "".join(out)
    if rendered.count(MASK_MARKER) != 1:
        raise ValueError(f"example {ex.id}: rendered prompt must contain one mask marker")
    mask_offset = len(rendered[: rendered.index(MASK_MARKER)].encode("utf-8"))
    return PromptInstance(ex.id, rendered, mask_offset, list(tpl.candidates))


def verbalize(label, tpl):
    for lab, tok in tpl.verbalizers:
        if lab == label:
            return tok
    raise ValueError(f"unknown label {label!r}; valid labels: {tpl.labels}")


def unverbalize(token, tpl):
    for lab, tok in tpl.verbalizers:
        if tok == token:
            return lab
    raise ValueError(f"unknown token {token!r}; valid tokens: {tpl.candidates}")


def score_to_target(score):
    """Similarity score in [0,5] -> (p_yes, p_no) by linear interpolation."""
    if not 0 <= score <= 5:
        raise ValueError(f"score {score} outside [0, 5]")
    p_yes = score / 5
    return (p_yes, 1 - p_yes)


def prediction_to_score(p_yes, p_no):
    """Inverse of score_to_target: 5 * p_yes / (p_yes + p_no)."""
    if p_yes < 0 or p_no < 0:
        raise ValueError("probabilities must be non-negative")
    if p_yes + p_no == 0:
        raise ValueError("both probabilities are zero")
    return 5 * p_yes / (p_yes + p_no)


def render_examples(examples, task):
    """Render prompts plus per-instance targets: the gold verbalizer token
    for classification, the (p_yes, p_no) pair for regression."""
    tpl = get_template(task)
    records = []
    for ex in examples:
        inst = render_prompt(ex, tpl)
        if task == "mednli":
            target = verbalize(ex.label, tpl)
        else:
            target = list(score_to_target(float(ex.label)))
        records.append((inst, target))
    return records


def save_prompts(records, path):
    """Prompt JSONL: {id, text, mask_offset, candidates, target}."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for inst, target in records:
            rec = {
                "id": inst.example_id,
                "text": inst.rendered,
                "mask_offset": inst.mask_offset,
                "candidates": inst.candidate_tokens,
                "target": target,
            }
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")


def load_prompts(path):
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: malformed JSON: {exc}") from None
            for fieldname in ("id", "text", "mask_offset", "candidates"):
                if fieldname not in rec:
                    raise ValueError(f"{path}:{lineno}: missing field '{fieldname}'")
            inst = PromptInstance(
                rec["id"], rec["text"], rec["mask_offset"], list(rec["candidates"])
            )
            records.append((inst, rec.get("target")))
    return records
