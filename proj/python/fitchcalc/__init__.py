"""Fitch-style modal lambda calculi IK, IK<>, IS4 and IR."""

import json
import sys

from ._core import (
    FitchError,
    check,
    count_derivations,
    def_eq,
    derivation,
    modes,
    normalize,
    run_cli,
    suite_names,
)
from ._core import run_suite_json as _run_suite_json

__all__ = [
    "FitchError",
    "check",
    "count_derivations",
    "def_eq",
    "derivation",
    "main",
    "modes",
    "normalize",
    "run_cli",
    "run_suite",
    "suite_names",
]


def run_suite(name, mode=None, samples=1000, seed=1, max_size=30, workers=0):
    """Run a property suite and return its report as a dict."""
    return json.loads(_run_suite_json(name, mode, samples, seed, max_size, workers))


def main():
    code, out, err = run_cli(sys.argv[1:])
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code
