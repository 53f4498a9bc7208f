"""Metrics and significance testing over prediction files.

Accuracy (argmax verbalizer, ties broken by template order) for
classification, Pearson correlation for regression, and a paired t-test
over per-seed metrics against a baseline.  The Student-t CDF is computed
here via the regularized incomplete beta function (continued fraction,
modified Lentz) so the package needs no statistics dependency; absolute
error is well under the 1e-9 the comparisons require.
"""

import json
import math
from dataclasses import dataclass, field

from .promptfmt import prediction_to_score, unverbalize

__all__ = [
    "PredictionRecord",
    "EvalReport",
    "TTestResult",
    "accuracy",
    "pearson",
    "paired_t_test",
    "student_t_cdf",
    "regularized_incomplete_beta",
    "aggregate",
    "predicted_scores",
    "load_predictions",
    "save_predictions",
    "save_report",
    "render_report",
]

SIGNIFICANCE_LEVEL = 0.05


@dataclass
class PredictionRecord:
    example_id: str
    scores: dict  # candidate token -> real number, higher = more likely

    def __post_init__(self):
        if not self.scores:
            raise ValueError(f"prediction {self.example_id}: empty scores")


@dataclass
class EvalReport:
    per_seed: list  # (seed, metric) pairs
    mean: float
    std: float  # population (denominator n)
    p_value: float
    n: int
    baseline_mean: float
    significant: bool


@dataclass
class TTestResult:
    t: float
    p_value: float


def _argmax_token(scores, candidates):
    best = None
    best_score = -math.inf
    for tok in candidates:  # candidate order breaks ties
        s = scores.get(tok, -math.inf)
        if s > best_score:
            best, best_score = tok, s
    return best


def accuracy(preds, gold, tpl):
    """Fraction of examples whose argmax verbalizer unmaps to the gold
    label.  Every gold id must have exactly one prediction."""
    by_id = {}
    for p in preds:
        if p.example_id in by_id:
            raise ValueError(f"duplicate prediction for id {p.example_id}")
        by_id[p.example_id] = p
    correct = 0
    for ex in gold:
        if ex.id not in by_id:
            raise ValueError(f"missing prediction for id {ex.id}")
        tok = _argmax_token(by_id[ex.id].scores, tpl.candidates)
        if unverbalize(tok, tpl) == ex.label:
            correct += 1
    if len(by_id) != len(gold):
        extra = sorted(set(by_id) - {ex.id for ex in gold})
        raise ValueError(f"prediction for unknown id {extra[0]}")
    return correct / len(gold)


def pearson(x, y):
    """Product-moment correlation; errors on length mismatch, n < 2, or a
    constant vector."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise ValueError("need at least 2 points")
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    cov = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    vx = math.fsum((a - mx) ** 2 for a in x)
    vy = math.fsum((b - my) ** 2 for b in y)
    if vx == 0 or vy == 0:
        raise ValueError("zero variance")
    r = cov / math.sqrt(vx * vy)
    return max(-1.0, min(1.0, r))


def _betacf(a, b, x, max_iter=300, eps=1e-15):
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a, b, x):
    """I_x(a, b) with the symmetry trick for fast convergence."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_cdf(t, df):
    """CDF of Student's t with df degrees of freedom.

    Exactly 0.5 at t == 0; the two tails are computed from the same
    incomplete beta, so cdf(t) + cdf(-t) == 1 identically.
    """
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    if t == 0:
        return 0.5
    x = df / (df + t * t)
    tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x)
    return 1.0 - tail if t > 0 else tail


def paired_t_test(a, b):
    """Two-tailed paired t-test on per-seed metrics.

    Zero-variance differences degenerate: identical vectors give
    (t=0, p=1); a constant nonzero difference gives p=0.
    """
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    n = len(a)
    if n < 2:
        raise ValueError("need at least 2 pairs")
    d = [x - y for x, y in zip(a, b)]
    mean_d = math.fsum(d) / n
    var = math.fsum((x - mean_d) ** 2 for x in d) / (n - 1)
    if var == 0:
        if mean_d == 0:
            return TTestResult(0.0, 1.0)
        return TTestResult(math.copysign(math.inf, mean_d), 0.0)
    t = mean_d / math.sqrt(var / n)
    p = 2.0 * (1.0 - student_t_cdf(abs(t), n - 1))
    return TTestResult(t, min(max(p, 0.0), 1.0))


def aggregate(per_seed_ours, per_seed_base, seeds=None):
    """Mean, population std, and paired significance over seeds."""
    if len(per_seed_ours) != len(per_seed_base):
        raise ValueError(
            f"length mismatch: {len(per_seed_ours)} ours vs {len(per_seed_base)} baseline"
        )
    n = len(per_seed_ours)
    if seeds is None:
        seeds = list(range(n))
    mean = math.fsum(per_seed_ours) / n
    std = math.sqrt(math.fsum((v - mean) ** 2 for v in per_seed_ours) / n)
    test = paired_t_test(per_seed_ours, per_seed_base)
    return EvalReport(
        per_seed=list(zip(seeds, per_seed_ours)),
        mean=mean,
        std=std,
        p_value=test.p_value,
        n=n,
        baseline_mean=math.fsum(per_seed_base) / n,
        significant=test.p_value < SIGNIFICANCE_LEVEL,
    )


def predicted_scores(preds, order):
    """Map Yes/No prediction scores to [0,5] similarity scores.

    Scores already in probability space (non-negative) pass straight
    through the bounded-ratio inverse; log-domain scores (any negative
    value) are exponentiated first.
    """
    out = []
    by_id = {p.example_id: p for p in preds}
    for ex_id in order:
        if ex_id not in by_id:
            raise ValueError(f"missing prediction for id {ex_id}")
        scores = by_id[ex_id].scores
        p_yes = scores.get("Yes", -math.inf)
        p_no = scores.get("No", -math.inf)
        if p_yes < 0 or p_no < 0:
            p_yes, p_no = math.exp(p_yes), math.exp(p_no)
        out.append(prediction_to_score(p_yes, p_no))
    return out


def load_predictions(path):
    preds = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: malformed JSON: {exc}") from None
            for fieldname in ("id", "scores"):
                if fieldname not in rec:
                    raise ValueError(f"{path}:{lineno}: missing field '{fieldname}'")
            preds.append(PredictionRecord(str(rec["id"]), dict(rec["scores"])))
    return preds


def save_predictions(preds, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in preds:
            rec = {"id": p.example_id, "scores": p.scores}
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")


def save_report(report, path, metric_name="metric"):
    """TSV: per-seed rows then aggregate rows."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"seed\t{metric_name}\n")
        for seed, value in report.per_seed:
            fh.write(f"{seed}\t{value!r}\n")
        fh.write(f"mean\t{report.mean!r}\n")
        fh.write(f"std\t{report.std!r}\n")
        fh.write(f"baseline_mean\t{report.baseline_mean!r}\n")
        fh.write(f"p_value\t{report.p_value!r}\n")
        fh.write(f"n\t{report.n}\n")
        fh.write(f"significant\t{str(report.significant).lower()}\n")


def render_report(report, metric_name="metric"):
    """Human-readable mean±std with the paired p-value."""
    delta = report.mean - report.baseline_mean
    lines = [
        f"{metric_name}: {report.mean:.4f} ± {report.std:.4f} over {report.n} seeds",
        f"baseline: {report.baseline_mean:.4f} (delta {delta:+.4f})",
        f"paired t-test p-value: {report.p_value:.4g}"
        + (" (significant at 0.05)" if report.significant else " (not significant)"),
    ]
    return "\n".join(lines)
