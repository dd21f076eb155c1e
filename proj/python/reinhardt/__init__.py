"""Proper holomorphic maps between Reinhardt domains in C^2.

Domains are passed as source text in the .dom format, maps and reports as
plain dicts.
"""

import json

from . import _core
from ._core import DomainError, EvalError, ParseError, SCHEMA_VERSION, is_bounded, margin, membership, normalize

__all__ = [
    "DomainError", "EvalError", "ParseError", "SCHEMA_VERSION",
    "boundary", "classify", "envelope", "evaluate", "is_bounded", "margin",
    "membership", "normalize", "run_cli", "self_maps", "synthesize", "verify",
]


def classify(d1, d2, bound=4):
    return json.loads(_core.classify_json(d1, d2, bound))


def synthesize(d1, d2, tag, extras=None):
    """Returns {"case": ..., "map": ...}."""
    return json.loads(_core.synthesize_json(d1, d2, tag, json.dumps(extras) if extras else ""))


def verify(d1, d2, map_, samples=1000, shells=(1e-2, 1e-3, 1e-4), shell_samples=200, seed=0,
           tolerance=1e-9, threads=1):
    return json.loads(_core.verify_json(d1, d2, json.dumps(map_), samples, list(shells), shell_samples,
                                        seed, tolerance, threads))


def envelope(d):
    return json.loads(_core.envelope_json(d))


def boundary(d):
    return json.loads(_core.boundary_json(d))


def self_maps(d, bound=4):
    return json.loads(_core.self_maps_json(d, bound))


def evaluate(map_, z, w):
    return _core.evaluate(json.dumps(map_), complex(z), complex(w))


def run_cli(args):
    """Runs the command-line tool in-process; returns (exit code, parsed stdout)."""
    code, out, _ = _core.run_cli([str(a) for a in args])
    return code, json.loads(out) if out.strip().startswith("{") else None
