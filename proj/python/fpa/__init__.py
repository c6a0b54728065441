"""Symmetric equilibria of first-price auctions.

Cdfs are dicts in the same JSON form the command line takes, e.g.
{"kind": "uniform"}. Rationals travel as strings such as "1/3".
"""

import json

from . import _fpa
from ._fpa import PrecisionError

__all__ = ["PrecisionError", "run", "eval_cdf", "canonical_bid", "blackbox_bids", "solve_cdfpa"]


def _cdf(cdf):
    return cdf if isinstance(cdf, str) else json.dumps(cdf)


def run(*args):
    """Run the fpa command line; returns (code, stdout, stderr)."""
    return _fpa.run([str(a) for a in args])


def eval_cdf(cdf, x):
    return _fpa.eval_cdf(_cdf(cdf), str(x))


def canonical_bid(cdf, n, x, extend=True):
    return _fpa.canonical_bid(_cdf(cdf), n, str(x), extend)


def blackbox_bids(cdf, n, eps, xs):
    return _fpa.blackbox_bids(_cdf(cdf), n, float(eps), [float(x) for x in xs])


def solve_cdfpa(cdf, n, bids, eps, delta=None):
    doc = _fpa.solve_cdfpa(_cdf(cdf), n, [str(b) for b in bids], str(eps), None if delta is None else str(delta))
    return json.loads(doc)
