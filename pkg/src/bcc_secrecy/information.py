"""Entropy and mutual-information calculus, in bits, with 0 log 0 = 0."""

from __future__ import annotations

import math
from collections.abc import Iterable

import numpy as np

from .channels import DimensionMismatch, DiscreteChannel, JointPmf, Pmf


class AxisOverlap(ValueError):
    """Conditioning axes overlap the argument axes."""


def entropy_last_axis(probs: np.ndarray) -> np.ndarray:
    """Shannon entropy in bits along the last axis.

    Fast path for batched computation: no validation, zeros contribute
    nothing. Returns a scalar array for 1-d input.
    """
    p = np.asarray(probs, dtype=np.float64)
    terms = np.where(p > 0.0, p * np.log2(np.where(p > 0.0, p, 1.0)), 0.0)
    return -terms.sum(axis=-1)


def entropy(p: Pmf) -> float:
    """Entropy of a validated pmf, clamped into [0, log2 alphabet_size]."""
    h = float(entropy_last_axis(p.probs))
    return min(max(h, 0.0), math.log2(p.alphabet_size))


def binary_entropy(p: float) -> float:
    """Entropy of a Bernoulli(p) bit."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def mutual_information(input_dist: Pmf, ch: DiscreteChannel) -> float:
    """I(X;Y) = H(Y) - H(Y|X) for p(x) through P(y|x), clamped at 0."""
    if input_dist.alphabet_size != ch.input_size:
        raise DimensionMismatch(
            f"input has {input_dist.alphabet_size} symbols, channel expects {ch.input_size}"
        )
    py = input_dist.probs @ ch.matrix
    value = float(entropy_last_axis(py) - input_dist.probs @ entropy_last_axis(ch.matrix))
    return max(value, 0.0)


def _marginal_entropy(probs: np.ndarray, keep: tuple[int, ...]) -> float:
    drop = tuple(i for i in range(probs.ndim) if i not in keep)
    marginal = probs.sum(axis=drop) if drop else probs
    return float(entropy_last_axis(marginal.ravel()))


def conditional_mutual_information(
    joint: JointPmf, a: str, b: str, cond: Iterable[str] = ()
) -> float:
    """I(A;B|C) for named axes of a joint pmf, clamped at 0.

    Computed as H(A,C) + H(B,C) - H(A,B,C) - H(C), which equals the
    per-condition average sum_c p(c) I(A;B|C=c).
    """
    cond_names = tuple(cond)
    names = (a, b, *cond_names)
    if len(set(names)) != len(names):
        raise AxisOverlap(f"axes must be disjoint, got a={a!r}, b={b!r}, cond={cond_names!r}")
    ia = joint.axis_index(a)
    ib = joint.axis_index(b)
    ic = tuple(joint.axis_index(name) for name in cond_names)
    p = joint.probs
    value = (
        _marginal_entropy(p, (ia, *ic))
        + _marginal_entropy(p, (ib, *ic))
        - _marginal_entropy(p, (ia, ib, *ic))
        - _marginal_entropy(p, ic)
    )
    return max(value, 0.0)
