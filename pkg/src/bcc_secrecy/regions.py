"""Achievable secrecy-rate regions for two-receiver broadcast channels.

Three computations are provided, all in bits per channel use:

* ``general_inner_bound``: the double-binning inner bound for arbitrary
  discrete channels, driven by a pair of auxiliary variables (V1, V2).
  Each auxiliary candidate yields a pentagon {r1 <= A, r2 <= B,
  r1 + r2 <= S}; its two dominant corners are collected and hulled.
* ``degraded_region_inner``: the layered (cloud/satellite) region for
  degraded channels, driven by a single auxiliary U.
* ``gaussian_region_point`` / ``gaussian_region_sweep``: the closed-form
  power-split region for the additive-Gaussian family, parameterized by
  the fraction ``alpha`` of power spent on the first receiver's layer.

Auxiliary distributions are searched on an explicit simplex grid: every
probability vector whose entries are integer multiples of the resolution
step.  The search is exhaustive and reproducible; its accuracy is
grid-limited and candidate counts are capped by an explicit budget rather
than silently truncated.  Candidates are independent, so evaluation is a
pure map followed by one hull reduction, and the result does not depend
on evaluation order.

Negative values of the rate formulas are clamped to zero pointwise: a
negative bound just means that candidate contributes nothing in that
coordinate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .channels import BudgetExceeded, DimensionMismatch, DiscreteChannel, Pmf, validate_pmf
from .information import entropy_last_axis

DEFAULT_RESOLUTION = 0.05
DEFAULT_BUDGET = 5_000_000
MAX_AUX_CARD = 12


class RatePoint(NamedTuple):
    """An achievable rate pair, bits per channel use."""

    r1: float
    r2: float


@dataclass(frozen=True)
class RegionFrontier:
    """Pareto-maximal boundary of a rate region, sorted by r1 ascending.

    When ``hulled`` is true the points, together with the origin and the
    axis feet (max r1, 0) and (0, max r2), are in convex position: the
    region is their convex hull, closed downward (time sharing included).
    """

    points: list[RatePoint]
    hulled: bool

    def as_array(self) -> np.ndarray:
        return np.array([[p.r1, p.r2] for p in self.points], dtype=np.float64)

    @property
    def max_r1(self) -> float:
        return max(p.r1 for p in self.points)

    @property
    def max_r2(self) -> float:
        return max(p.r2 for p in self.points)


@dataclass(frozen=True)
class GaussianParams:
    """Average power constraint and the three noise variances, weakest last."""

    power: float
    n1: float
    n2: float
    n3: float

    def __post_init__(self):
        if not self.power > 0:
            raise ValueError(f"power must be positive, got {self.power!r}")
        if not 0 < self.n1 <= self.n2 <= self.n3:
            raise ValueError(
                f"noise variances must satisfy 0 < n1 <= n2 <= n3, "
                f"got ({self.n1!r}, {self.n2!r}, {self.n3!r})"
            )


@dataclass(frozen=True)
class AuxGridSpec:
    """Grid over auxiliary distributions.

    Cardinalities default to the channel input alphabet size when None.
    ``resolution`` must be the reciprocal of a positive integer; the grid
    holds every probability vector with entries on that lattice.  When
    ``deterministic_x`` is set, the map from auxiliaries to the channel
    input ranges over deterministic functions only (any stochastic map is
    a convex combination reachable by enlarging the auxiliaries).
    """

    u_card: int | None = None
    v1_card: int | None = None
    v2_card: int | None = None
    resolution: float = DEFAULT_RESOLUTION
    deterministic_x: bool = True

    def __post_init__(self):
        if not 0.0 < self.resolution <= 1.0:
            raise ValueError(f"resolution must lie in (0, 1], got {self.resolution!r}")
        steps = round(1.0 / self.resolution)
        if steps < 1 or abs(1.0 / self.resolution - steps) > 1e-9:
            raise ValueError(f"resolution must be 1/k for integer k, got {self.resolution!r}")
        for name in ("u_card", "v1_card", "v2_card"):
            card = getattr(self, name)
            if card is not None and not 1 <= card <= MAX_AUX_CARD:
                raise ValueError(f"{name} must lie in [1, {MAX_AUX_CARD}], got {card!r}")

    @property
    def steps(self) -> int:
        return round(1.0 / self.resolution)


def capacity_fn(snr: float) -> float:
    """Gaussian capacity 0.5 * log2(1 + snr), bits per use."""
    if snr < 0:
        raise ValueError(f"snr must be nonnegative, got {snr!r}")
    return 0.5 * math.log2(1.0 + snr)


def gaussian_region_point(g: GaussianParams, alpha: float) -> RatePoint:
    """Rate pair for power split alpha (first layer) vs 1 - alpha (second).

    r1 is evaluated as C(aP/N1) - C(aP/N3); the power-split identity
    C(aP/N) + C((1-a)P/(aP+N)) = C(P/N) shows this equals the three-term
    form C(aP/N1) + C((1-a)P/(aP+N3)) - C(P/N3).  The difference form is
    monotone in the noise ordering, so both coordinates are nonnegative in
    floating point without clamping.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    p = g.power
    r1 = capacity_fn(alpha * p / g.n1) - capacity_fn(alpha * p / g.n3)
    r2 = capacity_fn((1.0 - alpha) * p / (alpha * p + g.n2)) - capacity_fn(
        (1.0 - alpha) * p / (alpha * p + g.n3)
    )
    return RatePoint(r1, r2)


def gaussian_region_sweep(g: GaussianParams, num_alphas: int = 101) -> RegionFrontier:
    """Evaluate the closed form on a uniform alpha grid and Pareto-filter.

    The grid {0, 1/(k-1), ..., 1} always contains both endpoints.  No
    convex hull is applied (the closed-form frontier is already concave).
    """
    if num_alphas < 2:
        raise ValueError(f"num_alphas must be at least 2, got {num_alphas!r}")
    points = np.array(
        [gaussian_region_point(g, a) for a in np.linspace(0.0, 1.0, num_alphas)]
    )
    front = _pareto(points)
    return RegionFrontier(points=[RatePoint(float(x), float(y)) for x, y in front], hulled=False)


def _pareto(arr: np.ndarray) -> np.ndarray:
    """Deduplicated Pareto-maximal points, sorted by r1 ascending."""
    arr = np.unique(np.asarray(arr, dtype=np.float64), axis=0)  # lex sort (r1, r2)
    keep: list[np.ndarray] = []
    best = -np.inf
    for row in arr[::-1]:  # r1 descending, ties resolved by r2 descending
        if row[1] > best:
            keep.append(row)
            best = row[1]
    return np.array(keep[::-1])


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_vertices(pts: np.ndarray) -> np.ndarray:
    """Convex hull by monotone chain; input rows unique and lex-sorted."""
    if len(pts) <= 2:
        return pts

    def chain(points):
        out: list[np.ndarray] = []
        for p in points:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def upper_right_hull(points: Sequence[RatePoint] | np.ndarray) -> RegionFrontier:
    """Pareto-maximal vertices of the convex hull of the points and (0, 0)."""
    arr = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if arr.size == 0:
        raise ValueError("empty point set")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite rate point")
    if np.any(arr < 0.0):
        raise ValueError("rate points must be nonnegative")
    arr = np.vstack([arr, [0.0, 0.0]])
    verts = _hull_vertices(np.unique(arr, axis=0))
    front = _pareto(verts)
    return RegionFrontier(points=[RatePoint(float(x), float(y)) for x, y in front], hulled=True)


def simplex_grid(dim: int, steps: int) -> np.ndarray:
    """All pmfs over `dim` outcomes with entries that are multiples of 1/steps."""
    if dim < 1:
        raise ValueError(f"dim must be positive, got {dim!r}")
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps!r}")
    rows = list(_compositions(steps, dim))
    return np.array(rows, dtype=np.float64) / steps


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head, *tail)


def _simplex_count(dim: int, steps: int) -> int:
    return math.comb(steps + dim - 1, dim - 1)


def _row_product(rows: np.ndarray, n_inputs: int) -> np.ndarray:
    """Every conditional P(out | in) whose rows are drawn from `rows`."""
    g = len(rows)
    idx = np.indices((g,) * n_inputs).reshape(n_inputs, -1).T
    return rows[idx]


def _deterministic_maps(n_inputs: int, n_outputs: int) -> np.ndarray:
    """One-hot conditionals for every function from inputs to outputs."""
    count = n_outputs**n_inputs
    maps = np.zeros((count, n_inputs, n_outputs))
    src = np.arange(n_inputs)
    for c, assignment in enumerate(itertools.product(range(n_outputs), repeat=n_inputs)):
        maps[c, src, list(assignment)] = 1.0
    return maps


def _check_shared_input(*channels: DiscreteChannel) -> int:
    sizes = {ch.input_size for ch in channels}
    if len(sizes) != 1:
        raise DimensionMismatch(f"channels disagree on the input alphabet: {sorted(sizes)}")
    return sizes.pop()


def _mi_from_joint(joint: np.ndarray) -> np.ndarray:
    """I(A;B) = H(A) + H(B) - H(A,B) for batched 2-d joints (..., a, b)."""
    ha = entropy_last_axis(joint.sum(axis=-1))
    hb = entropy_last_axis(joint.sum(axis=-2))
    hab = entropy_last_axis(joint.reshape(joint.shape[:-2] + (-1,)))
    return ha + hb - hab


def _degraded_rate_arrays(pu, pxu_batch, my1, my2, mz):
    """Clamped (r1, r2) for a batch of cloud-to-input conditionals.

    pu: (U,) cloud distribution; pxu_batch: (C, U, X) conditionals.
    r1 = I(X;Y1|U) + I(U;Z) - I(X;Z),  r2 = I(U;Y2) - I(U;Z).
    """
    h_y1_rows = entropy_last_axis(my1)
    h_z_rows = entropy_last_axis(mz)
    uy1 = pxu_batch @ my1
    uy2 = pxu_batch @ my2
    uz = pxu_batch @ mz
    px = np.einsum("u,cux->cx", pu, pxu_batch)
    pz = px @ mz
    py2 = np.einsum("u,cuy->cy", pu, uy2)
    i_xz = entropy_last_axis(pz) - px @ h_z_rows
    i_uz = entropy_last_axis(pz) - np.einsum("u,cu->c", pu, entropy_last_axis(uz))
    i_uy2 = entropy_last_axis(py2) - np.einsum("u,cu->c", pu, entropy_last_axis(uy2))
    i_xy1_u = np.einsum("u,cu->c", pu, entropy_last_axis(uy1) - pxu_batch @ h_y1_rows)
    r1 = np.maximum(i_xy1_u + i_uz - i_xz, 0.0)
    r2 = np.maximum(i_uy2 - i_uz, 0.0)
    return r1, r2


def degraded_rate_pair(
    pu: Pmf,
    pxu: DiscreteChannel,
    py1x: DiscreteChannel,
    py2x: DiscreteChannel,
    pzx: DiscreteChannel,
) -> RatePoint:
    """Clamped rate pair contributed by one (P(u), P(x|u)) candidate."""
    _check_shared_input(py1x, py2x, pzx)
    if pu.alphabet_size != pxu.input_size:
        raise DimensionMismatch("cloud distribution does not match the conditional's input")
    if pxu.output_size != py1x.input_size:
        raise DimensionMismatch("conditional output does not match the channel input")
    r1, r2 = _degraded_rate_arrays(
        pu.probs, pxu.matrix[None], py1x.matrix, py2x.matrix, pzx.matrix
    )
    return RatePoint(float(r1[0]), float(r2[0]))


def degraded_region_inner(
    py1x: DiscreteChannel,
    py2x: DiscreteChannel,
    pzx: DiscreteChannel,
    grid: AuxGridSpec = AuxGridSpec(),
    budget: int = DEFAULT_BUDGET,
) -> RegionFrontier:
    """Layered-scheme region: hull over gridded (P(u), P(x|u)) candidates."""
    nx = _check_shared_input(py1x, py2x, pzx)
    u_card = grid.u_card if grid.u_card is not None else nx
    steps = grid.steps
    n_pu = _simplex_count(u_card, steps)
    n_rows = _simplex_count(nx, steps)
    n_cond = n_rows**u_card
    total = n_pu * n_cond
    if total > budget:
        raise BudgetExceeded(
            f"grid too large: {n_pu} x {n_cond} = {total} candidates exceed budget {budget}"
        )
    pu_grid = simplex_grid(u_card, steps)
    pxu_batch = _row_product(simplex_grid(nx, steps), u_card)
    chunks = [np.array([[0.0, 0.0]])]
    for pu in pu_grid:
        r1, r2 = _degraded_rate_arrays(pu, pxu_batch, py1x.matrix, py2x.matrix, pzx.matrix)
        chunks.append(np.column_stack([r1, r2]))
    return upper_right_hull(np.vstack(chunks))


def _general_corner_arrays(joint_batch, xmap, my1, my2, mz):
    """Pentagon corner points for a batch of (V1, V2) joints under one x-map.

    joint_batch: (C, V1, V2); xmap: (V1, V2, X).  Bounds per candidate:
    A = I(V1;Y1) - I(V1;Z), B = I(V2;Y2) - I(V2;Z),
    S = I(V1;Y1) + I(V2;Y2) - I(V1,V2;Z) - I(V1;V2), each clamped at 0.
    """
    t_y1 = np.einsum("vwx,xy->vwy", xmap, my1)
    t_y2 = np.einsum("vwx,xy->vwy", xmap, my2)
    t_z = np.einsum("vwx,xz->vwz", xmap, mz)
    p_v1y1 = np.einsum("cvw,vwy->cvy", joint_batch, t_y1)
    p_v2y2 = np.einsum("cvw,vwy->cwy", joint_batch, t_y2)
    p_vvz = np.einsum("cvw,vwz->cvwz", joint_batch, t_z)
    c, v1, v2, nz = p_vvz.shape
    i_v1y1 = _mi_from_joint(p_v1y1)
    i_v2y2 = _mi_from_joint(p_v2y2)
    i_v12z = _mi_from_joint(p_vvz.reshape(c, v1 * v2, nz))
    i_v1z = _mi_from_joint(p_vvz.sum(axis=2))
    i_v2z = _mi_from_joint(p_vvz.sum(axis=1))
    i_v1v2 = _mi_from_joint(joint_batch)
    a = np.maximum(i_v1y1 - i_v1z, 0.0)
    b = np.maximum(i_v2y2 - i_v2z, 0.0)
    s = np.maximum(i_v1y1 + i_v2y2 - i_v12z - i_v1v2, 0.0)
    r1a = np.minimum(a, s)
    r2a = np.minimum(b, s - r1a)
    r2b = np.minimum(b, s)
    r1b = np.minimum(a, s - r2b)
    return np.vstack([np.column_stack([r1a, r2a]), np.column_stack([r1b, r2b])])


def general_rate_corners(
    joint_v1v2: np.ndarray,
    x_given_pair: np.ndarray,
    py1x: DiscreteChannel,
    py2x: DiscreteChannel,
    pzx: DiscreteChannel,
) -> tuple[RatePoint, RatePoint]:
    """Dominant pentagon corners for one (P(v1,v2), P(x|v1,v2)) candidate."""
    _check_shared_input(py1x, py2x, pzx)
    joint = np.asarray(joint_v1v2, dtype=np.float64)
    xmap = np.asarray(x_given_pair, dtype=np.float64)
    validate_pmf(joint.ravel())
    if xmap.shape[:2] != joint.shape or xmap.shape[2] != py1x.input_size:
        raise DimensionMismatch(
            f"x-map shape {xmap.shape} does not match joint {joint.shape} "
            f"and input alphabet {py1x.input_size}"
        )
    corners = _general_corner_arrays(joint[None], xmap, py1x.matrix, py2x.matrix, pzx.matrix)
    first, second = corners
    return (
        RatePoint(float(first[0]), float(first[1])),
        RatePoint(float(second[0]), float(second[1])),
    )


def general_inner_bound(
    py1x: DiscreteChannel,
    py2x: DiscreteChannel,
    pzx: DiscreteChannel,
    grid: AuxGridSpec = AuxGridSpec(),
    budget: int = DEFAULT_BUDGET,
) -> RegionFrontier:
    """Double-binning inner bound: hull over gridded auxiliary pairs.

    Joints P(v1, v2) range over the simplex grid on the product alphabet;
    the input map P(x|v1, v2) ranges over deterministic functions, or over
    gridded rows when grid.deterministic_x is false.
    """
    nx = _check_shared_input(py1x, py2x, pzx)
    v1 = grid.v1_card if grid.v1_card is not None else nx
    v2 = grid.v2_card if grid.v2_card is not None else nx
    steps = grid.steps
    n_joint = _simplex_count(v1 * v2, steps)
    if grid.deterministic_x:
        n_maps = nx ** (v1 * v2)
    else:
        n_maps = _simplex_count(nx, steps) ** (v1 * v2)
    total = n_joint * n_maps
    if total > budget:
        raise BudgetExceeded(
            f"grid too large: {n_joint} x {n_maps} = {total} candidates exceed budget {budget}"
        )
    joint_batch = simplex_grid(v1 * v2, steps).reshape(-1, v1, v2)
    if grid.deterministic_x:
        xmaps = _deterministic_maps(v1 * v2, nx).reshape(-1, v1, v2, nx)
    else:
        xmaps = _row_product(simplex_grid(nx, steps), v1 * v2).reshape(-1, v1, v2, nx)
    chunks = [np.array([[0.0, 0.0]])]
    for xmap in xmaps:
        chunks.append(
            _general_corner_arrays(joint_batch, xmap, py1x.matrix, py2x.matrix, pzx.matrix)
        )
    return upper_right_hull(np.vstack(chunks))


def wiretap_secrecy_capacity(
    main: DiscreteChannel,
    eve: DiscreteChannel,
    grid: AuxGridSpec = AuxGridSpec(),
    budget: int = DEFAULT_BUDGET,
) -> float:
    """Grid maximum of I(V;Y) - I(V;Z) over P(v) and P(x|v), clamped at 0.

    P(x|v) rows range over the full simplex grid, which contains every
    one-hot row; in particular the identity embedding V = X is always a
    candidate, so for degraded pairs the grid attains the single-letter
    optimum whenever the optimal input distribution lies on the grid.
    """
    nx = _check_shared_input(main, eve)
    v_card = grid.v1_card if grid.v1_card is not None else nx
    steps = grid.steps
    n_pv = _simplex_count(v_card, steps)
    n_cond = _simplex_count(nx, steps) ** v_card
    if n_pv * n_cond > budget:
        raise BudgetExceeded(
            f"grid too large: {n_pv} x {n_cond} = {n_pv * n_cond} candidates "
            f"exceed budget {budget}"
        )
    pv_grid = simplex_grid(v_card, steps)
    cond = _row_product(simplex_grid(nx, steps), v_card)
    t_y = cond @ main.matrix
    t_z = cond @ eve.matrix
    h_y_rows = entropy_last_axis(t_y)
    h_z_rows = entropy_last_axis(t_z)
    best = 0.0
    for pv in pv_grid:
        py = np.einsum("v,cvy->cy", pv, t_y)
        pz = np.einsum("v,cvz->cz", pv, t_z)
        i_y = entropy_last_axis(py) - np.einsum("v,cv->c", pv, h_y_rows)
        i_z = entropy_last_axis(pz) - np.einsum("v,cv->c", pv, h_z_rows)
        best = max(best, float(np.max(i_y - i_z)))
    return best
