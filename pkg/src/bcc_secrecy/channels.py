"""Finite-alphabet probability primitives.

Alphabets are index sets ``0..k-1``.  Probability vectors and channel
matrices are stored as read-only float64 arrays and validated on
construction: entries must be nonnegative and sums must equal 1 within
``SUM_TOL``.  Everything here is a pure function of its inputs, so values
can be shared freely across threads or processes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

SUM_TOL = 1e-9
DEGRADED_TOL = 1e-7


class InvalidDistribution(ValueError):
    """A probability vector, matrix, or tensor violates an invariant."""


class NegativeEntry(InvalidDistribution):
    """A probability entry is below zero."""


class SumNotOne(InvalidDistribution):
    """Probabilities do not sum to one within tolerance."""


class DimensionMismatch(ValueError):
    """Operand shapes are incompatible."""


class BudgetExceeded(RuntimeError):
    """A configured enumeration or memory budget would be exceeded."""


def validate_pmf(probs) -> None:
    """Check the pmf invariants, raising on the first violation.

    Raises NegativeEntry or SumNotOne naming the offending index or total.
    The sign check runs first, so an entry like -1e-12 is rejected even
    though the sum may still be within tolerance.
    """
    arr = np.asarray(probs, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidDistribution(f"expected a nonempty 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        idx = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise InvalidDistribution(f"non-finite entry at index {idx}")
    neg = np.flatnonzero(arr < 0.0)
    if neg.size:
        idx = int(neg[0])
        raise NegativeEntry(f"entry {arr[idx]!r} at index {idx} is negative")
    total = float(arr.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise SumNotOne(f"entries sum to {total!r}, expected 1 within {SUM_TOL}")


def _freeze(obj, name, arr):
    arr.flags.writeable = False
    object.__setattr__(obj, name, arr)


@dataclass(frozen=True)
class Pmf:
    """Probability mass function over a finite alphabet."""

    probs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.probs, dtype=np.float64)
        validate_pmf(arr)
        _freeze(self, "probs", arr)

    @property
    def alphabet_size(self) -> int:
        return self.probs.shape[0]

    @classmethod
    def uniform(cls, k: int) -> "Pmf":
        return cls(np.full(k, 1.0 / k))

    @classmethod
    def point_mass(cls, k: int, index: int) -> "Pmf":
        probs = np.zeros(k)
        probs[index] = 1.0
        return cls(probs)


@dataclass(frozen=True)
class DiscreteChannel:
    """Row-stochastic transition matrix P(output | input), indexed [input][output]."""

    matrix: np.ndarray

    def __post_init__(self):
        arr = np.array(self.matrix, dtype=np.float64)
        if arr.ndim != 2 or arr.size == 0:
            raise InvalidDistribution(f"expected a nonempty 2-d matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidDistribution("non-finite entry in channel matrix")
        neg = np.argwhere(arr < 0.0)
        if neg.size:
            i, j = (int(v) for v in neg[0])
            raise NegativeEntry(f"entry {arr[i, j]!r} at row {i}, column {j} is negative")
        sums = arr.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > SUM_TOL)
        if bad.size:
            i = int(bad[0])
            raise SumNotOne(f"row {i} sums to {sums[i]!r}, expected 1 within {SUM_TOL}")
        _freeze(self, "matrix", arr)

    @property
    def input_size(self) -> int:
        return self.matrix.shape[0]

    @property
    def output_size(self) -> int:
        return self.matrix.shape[1]

    def row(self, x: int) -> Pmf:
        return Pmf(self.matrix[x])

    @classmethod
    def identity(cls, k: int) -> "DiscreteChannel":
        return cls(np.eye(k))

    @classmethod
    def binary_symmetric(cls, crossover: float) -> "DiscreteChannel":
        p = float(crossover)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"crossover probability {p!r} outside [0, 1]")
        return cls(np.array([[1.0 - p, p], [p, 1.0 - p]]))

    @classmethod
    def constant_rows(cls, row, n_inputs: int) -> "DiscreteChannel":
        """Channel whose output ignores the input (every row equals `row`)."""
        r = np.asarray(row, dtype=np.float64)
        return cls(np.tile(r, (n_inputs, 1)))


@dataclass(frozen=True)
class BroadcastChannel:
    """One-input, three-output channel P(y1, y2, z | x) as a rank-4 tensor."""

    joint: np.ndarray

    def __post_init__(self):
        arr = np.array(self.joint, dtype=np.float64)
        if arr.ndim != 4 or arr.size == 0:
            raise InvalidDistribution(f"expected a rank-4 tensor, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidDistribution("non-finite entry in broadcast tensor")
        neg = np.argwhere(arr < 0.0)
        if neg.size:
            idx = tuple(int(v) for v in neg[0])
            raise NegativeEntry(f"entry {arr[idx]!r} at index {idx} is negative")
        sums = arr.reshape(arr.shape[0], -1).sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > SUM_TOL)
        if bad.size:
            x = int(bad[0])
            raise SumNotOne(f"slice for input {x} sums to {sums[x]!r}, expected 1 within {SUM_TOL}")
        _freeze(self, "joint", arr)

    @property
    def input_size(self) -> int:
        return self.joint.shape[0]

    @property
    def output_sizes(self) -> tuple[int, int, int]:
        return self.joint.shape[1], self.joint.shape[2], self.joint.shape[3]

    @classmethod
    def from_marginals(
        cls, py1x: DiscreteChannel, py2x: DiscreteChannel, pzx: DiscreteChannel
    ) -> "BroadcastChannel":
        """Product tensor P(y1|x) P(y2|x) P(z|x) with the given marginals."""
        if not (py1x.input_size == py2x.input_size == pzx.input_size):
            raise DimensionMismatch("marginal channels disagree on the input alphabet")
        joint = np.einsum("xa,xb,xc->xabc", py1x.matrix, py2x.matrix, pzx.matrix)
        return cls(joint)


@dataclass(frozen=True)
class JointPmf:
    """Joint pmf over a product alphabet, with one name per tensor axis."""

    probs: np.ndarray
    axes: tuple[str, ...]

    def __post_init__(self):
        arr = np.array(self.probs, dtype=np.float64)
        names = tuple(self.axes)
        if arr.ndim != len(names):
            raise InvalidDistribution(
                f"tensor has {arr.ndim} axes but {len(names)} axis names were given"
            )
        if len(set(names)) != len(names):
            raise InvalidDistribution(f"duplicate axis names in {names}")
        if not np.all(np.isfinite(arr)):
            raise InvalidDistribution("non-finite entry in joint tensor")
        neg = np.argwhere(arr < 0.0)
        if neg.size:
            idx = tuple(int(v) for v in neg[0])
            raise NegativeEntry(f"entry {arr[idx]!r} at index {idx} is negative")
        total = float(arr.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise SumNotOne(f"entries sum to {total!r}, expected 1 within {SUM_TOL}")
        _freeze(self, "probs", arr)
        object.__setattr__(self, "axes", names)

    def axis_index(self, name: str) -> int:
        try:
            return self.axes.index(name)
        except ValueError:
            raise ValueError(f"no axis named {name!r}; have {self.axes}") from None


@dataclass(frozen=True)
class DegradednessReport:
    """Outcome of a stochastic-degradedness search.

    `residual` is the max-norm reconstruction error of the best intermediate
    found; `feasible` means it is within DEGRADED_TOL.  `intermediate` is the
    recovered row-stochastic matrix (None only if the solver failed outright).
    """

    feasible: bool
    residual: float
    intermediate: DiscreteChannel | None


def cascade(first: DiscreteChannel, second: DiscreteChannel) -> DiscreteChannel:
    """Compose two channels in series (matrix product, row-stochastic)."""
    if first.output_size != second.input_size:
        raise DimensionMismatch(
            f"cannot cascade: first has {first.output_size} outputs, "
            f"second expects {second.input_size} inputs"
        )
    return DiscreteChannel(first.matrix @ second.matrix)


_MARGINAL_AXES = {"y1": (2, 3), "y2": (1, 3), "z": (1, 2)}


def marginal_channel(bcc: BroadcastChannel, which: str) -> DiscreteChannel:
    """Extract the single-receiver marginal P(y1|x), P(y2|x), or P(z|x)."""
    key = which.lower()
    if key not in _MARGINAL_AXES:
        raise ValueError(f"which must be one of 'y1', 'y2', 'z'; got {which!r}")
    return DiscreteChannel(bcc.joint.sum(axis=_MARGINAL_AXES[key]))


def joint_from_input(input_dist: Pmf, ch: DiscreteChannel, axes=("x", "y")) -> JointPmf:
    """Joint pmf p(x, y) = p(x) P(y|x)."""
    if input_dist.alphabet_size != ch.input_size:
        raise DimensionMismatch(
            f"input has {input_dist.alphabet_size} symbols, channel expects {ch.input_size}"
        )
    return JointPmf(input_dist.probs[:, None] * ch.matrix, tuple(axes))


def check_stochastic_degraded(
    stronger: DiscreteChannel, weaker: DiscreteChannel, tol: float = DEGRADED_TOL
) -> DegradednessReport:
    """Search for a row-stochastic M with stronger . M ~ weaker.

    The search is a linear program: minimize t subject to
    |(stronger @ M - weaker)[x, j]| <= t for all entries, M >= 0, and unit
    row sums.  The optimum t is the smallest achievable max-norm residual,
    so feasibility (residual <= tol) is decided exactly up to solver
    tolerance.  The feasible set can be a polytope; one point of it is
    returned, with no uniqueness claim.
    """
    if stronger.input_size != weaker.input_size:
        raise DimensionMismatch(
            f"channels disagree on the input alphabet: "
            f"{stronger.input_size} vs {weaker.input_size}"
        )
    a = stronger.matrix
    b = weaker.matrix
    n_mid = stronger.output_size
    n_out = weaker.output_size
    n_var = n_mid * n_out + 1  # vec(M) row-major, then the residual bound t

    cost = np.zeros(n_var)
    cost[-1] = 1.0

    # (stronger @ M)[x, j] = sum_i a[x, i] M[i, j]; kron picks column j of every row.
    g = np.kron(a, np.eye(n_out))
    ones = np.ones((g.shape[0], 1))
    a_ub = np.vstack([np.hstack([g, -ones]), np.hstack([-g, -ones])])
    b_ub = np.concatenate([b.ravel(), -b.ravel()])

    a_eq = np.zeros((n_mid, n_var))
    for i in range(n_mid):
        a_eq[i, i * n_out : (i + 1) * n_out] = 1.0
    b_eq = np.ones(n_mid)

    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, method="highs")
    if not res.success:
        return DegradednessReport(feasible=False, residual=float("inf"), intermediate=None)

    m = np.clip(res.x[:-1].reshape(n_mid, n_out), 0.0, None)
    m /= m.sum(axis=1, keepdims=True)
    residual = float(np.max(np.abs(a @ m - b)))
    return DegradednessReport(
        feasible=residual <= tol,
        residual=residual,
        intermediate=DiscreteChannel(m),
    )
