"""Python bindings for the gramtrans core library."""

import json as _json

from . import _core
from ._core import Error

__all__ = [
    "Error",
    "analyze",
    "category_labels",
    "classify_change",
    "generate",
    "match_rate",
    "realize_unit",
    "validate_unit",
]


def _dump(unit):
    return None if unit is None else _json.dumps(unit)


def category_labels():
    return _core.category_labels()


def classify_change(before, after, before_text=None, after_text=None):
    """Category labels for one edit; either side may be None."""
    return set(_core.classify_change(_dump(before), _dump(after), before_text, after_text))


def validate_unit(unit):
    return _core.validate_unit(_dump(unit))


def match_rate(auto_units, edited_units):
    return _core.match_rate(_json.dumps(auto_units), _json.dumps(edited_units))


def realize_unit(unit, lexicon_dir):
    return _core.realize_unit(_dump(unit), str(lexicon_dir))


def generate(project, data, locale, lexicon_dir):
    """Rendered records as a list of dicts."""
    text = _core.generate(str(project), str(data), locale, str(lexicon_dir))
    return [_json.loads(line) for line in text.splitlines() if line]


def analyze(log, units, out_dir):
    return _core.analyze(str(log), str(units), str(out_dir))
