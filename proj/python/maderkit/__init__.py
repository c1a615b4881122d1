"""Dichromatic number, subdivision search and Mader-number checks."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import (
    Digraph,
    certify_h,
    contains_subdivision as _contains_subdivision,
    mader_campaign as _mader_campaign,
    lemma_suite as _lemma_suite,
)

__all__ = ["Digraph", "certify_h", "subdivision", "campaign", "lemmas"]


def subdivision(host, pattern):
    """Embedding as a dict, or None."""
    found = _contains_subdivision(host, pattern)
    return None if found is None else _json.loads(found)


def campaign(pattern, n_max, sample=None, cache_dir="", workers=0):
    """Campaign report as a dict."""
    return _json.loads(_mader_campaign(pattern, n_max, sample, cache_dir, workers))


def lemmas(n_max, sample=None):
    """Lemma-suite report as a dict."""
    return _json.loads(_lemma_suite(n_max, sample))
