"""Exact verification of twisted differential operators on PGL3 and complete conics."""

import json

from ._dlambda import (
    ParseError,
    PreconditionError,
    apply,
    check_ids,
    compose,
    normalize,
    suite_names,
)
from . import _dlambda

__all__ = [
    "ParseError",
    "PreconditionError",
    "apply",
    "certify",
    "check_ids",
    "compose",
    "concordance",
    "normalize",
    "suite_names",
    "verify",
]


def verify(suite="all", mode="symbolic", grid=4, seed=1, jobs=0):
    """Run a suite and return the decoded report (without certificates)."""
    return json.loads(_dlambda.verify_json(suite, mode, grid, seed, jobs))


def certify(l1, l2, mode="symbolic"):
    return json.loads(_dlambda.certify_json(l1, l2, mode))


def concordance(seed=1):
    return json.loads(_dlambda.concordance_json(seed))["concordance"]
