"""Cluster-count selection strategies."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .base import ClusterError

K_STRATEGIES = ("groups", "mn_over_t", "sqrt_n_half")


@dataclass(frozen=True)
class KSelectionInputs:
    n: int  # document count
    m: int  # vocabulary size
    t: int  # non-zero entries of the document-term matrix
    group_count: int


def select_k(strategy: str, inputs: KSelectionInputs) -> int:
    """groups -> group count; mn_over_t -> floor(m*n/t); sqrt_n_half -> floor(sqrt(n/2)).

    The result is clamped to [1, n].
    """
    if inputs.n < 1:
        raise ClusterError("need at least one document to select k")
    if strategy == "groups":
        k = inputs.group_count
    elif strategy == "mn_over_t":
        if inputs.t < 1:
            raise ClusterError("mn_over_t needs a non-empty document-term matrix")
        k = (inputs.m * inputs.n) // inputs.t
    elif strategy == "sqrt_n_half":
        k = math.floor(math.sqrt(inputs.n / 2.0))
    else:
        raise ClusterError(f"unknown k strategy {strategy!r}")
    return max(1, min(k, inputs.n))
