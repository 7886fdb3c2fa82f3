"""Python interface to the vector benchmark engine.

Thin wrappers over the compiled module: structured values cross the boundary
as JSON text and are decoded into plain dicts here.
"""

import json as _json

from vectorbench import _core

__all__ = [
    "validate_catalog",
    "generate",
    "render_prompt",
    "render_answer",
    "parse_answer",
    "score_answer",
    "exact_match",
    "partial_match",
    "lcs_match",
    "orderless_match",
    "robustness_ratio",
    "biased_ratio",
    "chance",
    "run_campaign",
]

validate_catalog = _core.validate_catalog
exact_match = _core.exact_match
partial_match = _core.partial_match
lcs_match = _core.lcs_match
orderless_match = _core.orderless_match
robustness_ratio = _core.robustness_ratio
chance = _core.chance
run_campaign = _core.run_campaign


def generate(catalog, task, level="l1", count=1, seed=0, nq=1, m=2):
    """Generate task instances as dicts."""
    return [_json.loads(line) for line in
            _core.generate(catalog, task, level, count, seed, nq, m)]


def render_prompt(instance):
    return _core.render_prompt(_json.dumps(instance))


def render_answer(instance):
    return _core.render_answer(_json.dumps(instance))


def parse_answer(raw, instance):
    return _json.loads(_core.parse_answer(raw, _json.dumps(instance)))


def score_answer(raw, instance):
    return _core.score_answer(raw, _json.dumps(instance))


def biased_ratio(pairs):
    """pairs: iterable of (pred_original, pred_shuffled, correct_o, correct_s)
    where predictions are parsed-answer dicts."""
    packed = [(_json.dumps(po), _json.dumps(ps), co, cs) for po, ps, co, cs in pairs]
    return _core.biased_ratio(packed)
