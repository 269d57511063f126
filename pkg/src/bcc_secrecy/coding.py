"""Finite-blocklength simulation of randomized binning codes.

Two code constructions are implemented at small blocklength n:

* superposition: a two-layer codebook. Cloud words u^n carry the second
  receiver's message, satellite words x^n around each cloud word carry the
  first receiver's.  Each message indexes a bin of `l` interchangeable
  codewords; the encoder picks a bin member uniformly at random, and that
  dither is what denies the eavesdropper information about the messages.
* double binning: independent codebooks for two auxiliary sequences, one
  bin per message on each side; the encoder looks for a jointly typical
  pair inside the selected bins and synthesizes x^n from it.  At small n
  the search can come up empty, which is reported rather than hidden.

Decoders are maximum likelihood rather than typical-set decoders: at
n <= 16 typicality is vacuous, and ML is the optimal benchmark, so the
measured error rate lower-bounds any typicality decoder's.  Eavesdropper
uncertainty is not sampled at all; `exact_equivocation` enumerates every
possible eavesdropper observation and computes the conditional entropies
of the messages in closed form, which is what makes small-n secrecy
accounting exact.

All randomness comes from numpy's PCG64 seeded through SeedSequence with
a (seed, purpose-tag, ...) tuple, so every operation is a deterministic
function of its arguments and independent substreams never collide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import BudgetExceeded, DimensionMismatch, DiscreteChannel, Pmf, cascade

DEFAULT_CODEBOOK_SYMBOL_BUDGET = 1 << 22
DEFAULT_Z_SEQUENCE_BUDGET = 1 << 20
DEFAULT_COMBO_BUDGET = 1 << 16

_MASK64 = (1 << 64) - 1

# Purpose tags for substream derivation.
_TAG_CLOUD = 1
_TAG_SATELLITE = 2
_TAG_V1 = 3
_TAG_V2 = 4
_TAG_ENCODE = 5
_TAG_CHANNEL = 6
_TAG_MESSAGES = 7
_TAG_TRIALS = 8


def _rng(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & _MASK64, *tags]))


def _sample_iid(rng: np.random.Generator, probs: np.ndarray, shape: tuple) -> np.ndarray:
    """i.i.d. symbols by inverse-CDF on raw uniforms (stable across numpy versions)."""
    cdf = np.cumsum(probs)
    draws = np.searchsorted(cdf, rng.random(shape), side="right")
    return np.minimum(draws, len(probs) - 1).astype(np.int64)


def _sample_conditional(
    rng: np.random.Generator, rows: np.ndarray, conditions: np.ndarray
) -> np.ndarray:
    """One symbol per entry of `conditions`, drawn from the matching row."""
    cdf = np.cumsum(rows, axis=1)
    u = rng.random(conditions.shape)
    draws = (cdf[conditions] <= u[..., None]).sum(axis=-1)
    return np.minimum(draws, rows.shape[1] - 1).astype(np.int64)


@dataclass(frozen=True)
class CodeParams:
    """Blocklength, per-layer message counts m, bin sizes l, and the seed.

    Messages are w1 in [0, m1) for the first (satellite) layer and w2 in
    [0, m2) for the second (cloud) layer; each bin holds l interchangeable
    codewords.  Rates are log2(count)/n bits per use.
    """

    n: int
    m1: int
    m2: int
    l1: int
    l2: int
    seed: int

    def __post_init__(self):
        for name in ("n", "m1", "m2", "l1", "l2"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    @property
    def rate1(self) -> float:
        return math.log2(self.m1) / self.n

    @property
    def rate2(self) -> float:
        return math.log2(self.m2) / self.n

    @property
    def randomization_rate1(self) -> float:
        return math.log2(self.l1) / self.n

    @property
    def randomization_rate2(self) -> float:
        return math.log2(self.l2) / self.n


@dataclass(frozen=True)
class SuperpositionCodebook:
    """Two-layer codebook: u_words[w2, j2, :], x_words[w2, j2, w1, j1, :]."""

    u_words: np.ndarray
    x_words: np.ndarray
    pu: Pmf
    pxu: DiscreteChannel
    params: CodeParams


@dataclass(frozen=True)
class BinningCodebook:
    """Independent binned codebooks: v1_words[w1, j1, :], v2_words[w2, j2, :]."""

    v1_words: np.ndarray
    v2_words: np.ndarray
    pv1: Pmf
    pv2: Pmf
    x_map: np.ndarray  # P(x | v1, v2), validated row-stochastic
    epsilon: float
    params: CodeParams


@dataclass(frozen=True)
class EquivocationReport:
    """Exact per-use equivocations and their distance from perfect secrecy.

    gaps = (R1 - re1, R2 - re2, R1 + R2 - re12); all-zero gaps mean the
    eavesdropper's observation carries no information about the messages.
    """

    re1: float
    re2: float
    re12: float
    gaps: tuple[float, float, float]


@dataclass(frozen=True)
class TrialResult:
    """Monte-Carlo decoding outcome counts.

    pe_estimate is the union error frequency (either receiver wrong), and
    half_width its 95% normal-approximation confidence half-width.
    """

    trials: int
    errors_rx1: int
    errors_rx2: int
    errors_union: int
    pe_estimate: float
    half_width: float
    encoding_failures: int = 0


def build_superposition(
    params: CodeParams,
    pu: Pmf,
    pxu: DiscreteChannel,
    symbol_budget: int = DEFAULT_CODEBOOK_SYMBOL_BUDGET,
) -> SuperpositionCodebook:
    """Draw the two-layer codebook; bit-identical for identical arguments.

    Cloud words are i.i.d. from pu; each satellite word is drawn symbol by
    symbol from pxu conditioned on its cloud word.
    """
    if pu.alphabet_size != pxu.input_size:
        raise DimensionMismatch(
            f"cloud alphabet {pu.alphabet_size} does not match conditional input "
            f"{pxu.input_size}"
        )
    n, m1, m2, l1, l2 = params.n, params.m1, params.m2, params.l1, params.l2
    total_symbols = m2 * l2 * n + m2 * l2 * m1 * l1 * n
    if total_symbols > symbol_budget:
        raise BudgetExceeded(
            f"codebook needs {total_symbols} symbols, over the budget of {symbol_budget}"
        )
    u_words = _sample_iid(_rng(params.seed, _TAG_CLOUD), pu.probs, (m2, l2, n))
    conditions = np.broadcast_to(u_words[:, :, None, None, :], (m2, l2, m1, l1, n))
    x_words = _sample_conditional(_rng(params.seed, _TAG_SATELLITE), pxu.matrix, conditions)
    return SuperpositionCodebook(u_words=u_words, x_words=x_words, pu=pu, pxu=pxu, params=params)


def encode_superposition(
    cb: SuperpositionCodebook, w1: int, w2: int, noise_seed: int
) -> np.ndarray:
    """Pick a bin member uniformly in each layer and return its x^n."""
    params = cb.params
    if not 0 <= w1 < params.m1:
        raise ValueError(f"message w1={w1!r} outside [0, {params.m1})")
    if not 0 <= w2 < params.m2:
        raise ValueError(f"message w2={w2!r} outside [0, {params.m2})")
    rng = _rng(noise_seed, _TAG_ENCODE)
    j2 = int(rng.integers(params.l2))
    j1 = int(rng.integers(params.l1))
    return np.array(cb.x_words[w2, j2, w1, j1])


def transmit(x: np.ndarray, ch: DiscreteChannel, noise_seed: int) -> np.ndarray:
    """Send a sequence through a memoryless channel, one draw per symbol."""
    seq = np.asarray(x, dtype=np.int64)
    if seq.size and (seq.min() < 0 or seq.max() >= ch.input_size):
        raise ValueError(
            f"sequence symbols outside the channel input alphabet [0, {ch.input_size})"
        )
    return _sample_conditional(_rng(noise_seed, _TAG_CHANNEL), ch.matrix, seq)


def _log_matrix(matrix: np.ndarray) -> np.ndarray:
    return np.where(matrix > 0.0, np.log2(np.where(matrix > 0.0, matrix, 1.0)), -np.inf)


def _loglik_scores(words: np.ndarray, y: np.ndarray, log_matrix: np.ndarray) -> np.ndarray:
    """Per-word log-likelihoods of y.

    The per-symbol terms are sorted before summation so that words whose
    likelihoods agree in exact arithmetic (same multiset of factors) get
    bit-identical scores, keeping the lowest-index tie break meaningful.
    """
    per_symbol = log_matrix[words, y]
    return np.sort(per_symbol, axis=-1).sum(axis=-1)


def _check_observation(y: np.ndarray, n: int, ch: DiscreteChannel) -> np.ndarray:
    seq = np.asarray(y, dtype=np.int64)
    if seq.shape != (n,):
        raise DimensionMismatch(f"observation has shape {seq.shape}, expected ({n},)")
    if seq.size and (seq.min() < 0 or seq.max() >= ch.output_size):
        raise ValueError(
            f"observation symbols outside the channel output alphabet [0, {ch.output_size})"
        )
    return seq


def decode_rx2(cb: SuperpositionCodebook, y2: np.ndarray, ch_y2_given_u: DiscreteChannel) -> int:
    """ML bin estimate for the second receiver, over all cloud words.

    Ties break toward the lowest codeword index (bin-major order).
    """
    if ch_y2_given_u.input_size != cb.pu.alphabet_size:
        raise DimensionMismatch("composite channel input does not match the cloud alphabet")
    seq = _check_observation(y2, cb.params.n, ch_y2_given_u)
    scores = _loglik_scores(cb.u_words, seq, _log_matrix(ch_y2_given_u.matrix))
    return int(np.argmax(scores)) // cb.params.l2


def decode_rx1(
    cb: SuperpositionCodebook, y1: np.ndarray, ch_y1_given_x: DiscreteChannel
) -> tuple[int, int]:
    """Joint ML over all (cloud, satellite) pairs; returns (w1_hat, w2_hat).

    Ties break toward the lexicographically lowest (cloud, satellite) index.
    """
    if ch_y1_given_x.input_size != cb.pxu.output_size:
        raise DimensionMismatch("channel input does not match the transmit alphabet")
    seq = _check_observation(y1, cb.params.n, ch_y1_given_x)
    scores = _loglik_scores(cb.x_words, seq, _log_matrix(ch_y1_given_x.matrix))
    w2, _, w1, _ = np.unravel_index(int(np.argmax(scores)), scores.shape)
    return int(w1), int(w2)


def _sequence_digits(alphabet: int, n: int) -> np.ndarray:
    """digits[i] holds symbol i of every length-n sequence, row-major order."""
    count = alphabet**n
    idx = np.arange(count)
    digits = np.empty((n, count), dtype=np.int64)
    for i in range(n):
        digits[i] = (idx // (alphabet ** (n - 1 - i))) % alphabet
    return digits


def _plogp_sum(values: np.ndarray) -> float:
    v = values[values > 0.0]
    return float((v * np.log2(v)).sum())


def exact_equivocation(
    cb: SuperpositionCodebook,
    pzx: DiscreteChannel,
    z_budget: int = DEFAULT_Z_SEQUENCE_BUDGET,
    combo_budget: int = DEFAULT_COMBO_BUDGET,
) -> EquivocationReport:
    """Exact eavesdropper equivocations by enumerating every z^n.

    Messages are uniform and the encoder dithers uniformly over bin
    members, so P(z^n | w1, w2) is the bin-averaged product of transition
    probabilities.  The conditional entropies H(W1|Z^n), H(W2|Z^n) and
    H(W1,W2|Z^n) follow from the exact joint and are divided by n.

    Parameters
    ----------
    cb : SuperpositionCodebook
    pzx : DiscreteChannel
        Eavesdropper channel P(z|x).
    z_budget : int
        Cap on |Z|^n, the number of enumerated observation sequences.
    combo_budget : int
        Cap on m1*m2*l1*l2, the number of codeword roles enumerated.
    """
    params = cb.params
    n, m1, m2, l1, l2 = params.n, params.m1, params.m2, params.l1, params.l2
    if pzx.input_size != cb.pxu.output_size:
        raise DimensionMismatch("eavesdropper channel input does not match the transmit alphabet")
    count = pzx.output_size**n
    if count > z_budget:
        raise BudgetExceeded(f"|Z|^n = {count} observation sequences exceed budget {z_budget}")
    combos = m1 * m2 * l1 * l2
    if combos > combo_budget:
        raise BudgetExceeded(f"{combos} message/randomization combinations exceed {combo_budget}")

    mz = pzx.matrix
    digits = _sequence_digits(pzx.output_size, n)
    inv_messages = 1.0 / (m1 * m2)
    pz = np.zeros(count)
    pw1z = np.zeros((m1, count))
    pw2z = np.zeros((m2, count))
    joint_plogp = 0.0
    for w2 in range(m2):
        for w1 in range(m1):
            words = cb.x_words[w2, :, w1, :, :].reshape(l2 * l1, n)
            probs = np.ones((l2 * l1, count))
            for i in range(n):
                probs *= mz[words[:, i]][:, digits[i]]
            conditional = probs.sum(axis=0) / (l1 * l2)
            joint = conditional * inv_messages
            pz += joint
            pw1z[w1] += joint
            pw2z[w2] += joint
            joint_plogp += _plogp_sum(joint)

    h_z = -_plogp_sum(pz)
    h_w1z = -_plogp_sum(pw1z.ravel())
    h_w2z = -_plogp_sum(pw2z.ravel())
    h_wz = -joint_plogp
    re1 = max((h_w1z - h_z) / n, 0.0)
    re2 = max((h_w2z - h_z) / n, 0.0)
    re12 = max((h_wz - h_z) / n, 0.0)
    gaps = (params.rate1 - re1, params.rate2 - re2, params.rate1 + params.rate2 - re12)
    return EquivocationReport(re1=re1, re2=re2, re12=re12, gaps=gaps)


def _validate_conditional(arr: np.ndarray, name: str) -> np.ndarray:
    rows = np.asarray(arr, dtype=np.float64)
    if rows.ndim < 2:
        raise DimensionMismatch(f"{name} must have at least 2 axes, got shape {rows.shape}")
    if np.any(rows < 0.0) or np.any(np.abs(rows.sum(axis=-1) - 1.0) > 1e-9):
        raise ValueError(f"{name} rows must be probability vectors")
    return rows


def build_double_binning(
    params: CodeParams,
    pv1: Pmf,
    pv2: Pmf,
    x_map: np.ndarray,
    epsilon: float,
    symbol_budget: int = DEFAULT_CODEBOOK_SYMBOL_BUDGET,
) -> BinningCodebook:
    """Draw both binned codebooks; bit-identical for identical arguments."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    rows = _validate_conditional(x_map, "x_map")
    if rows.shape[:2] != (pv1.alphabet_size, pv2.alphabet_size):
        raise DimensionMismatch(
            f"x_map shape {rows.shape} does not match auxiliary alphabets "
            f"({pv1.alphabet_size}, {pv2.alphabet_size})"
        )
    n, m1, m2, l1, l2 = params.n, params.m1, params.m2, params.l1, params.l2
    total_symbols = (m1 * l1 + m2 * l2) * n
    if total_symbols > symbol_budget:
        raise BudgetExceeded(
            f"codebook needs {total_symbols} symbols, over the budget of {symbol_budget}"
        )
    v1_words = _sample_iid(_rng(params.seed, _TAG_V1), pv1.probs, (m1, l1, n))
    v2_words = _sample_iid(_rng(params.seed, _TAG_V2), pv2.probs, (m2, l2, n))
    return BinningCodebook(
        v1_words=v1_words,
        v2_words=v2_words,
        pv1=pv1,
        pv2=pv2,
        x_map=rows,
        epsilon=float(epsilon),
        params=params,
    )


def _empirical_joint(v1_word: np.ndarray, v2_word: np.ndarray, a1: int, a2: int) -> np.ndarray:
    counts = np.zeros((a1, a2))
    np.add.at(counts, (v1_word, v2_word), 1.0)
    return counts / len(v1_word)


def encode_double_binning(
    cb: BinningCodebook, w1: int, w2: int, noise_seed: int
) -> np.ndarray | None:
    """Encode by picking a jointly typical pair from the selected bins.

    A pair qualifies when the max-norm distance between its empirical
    joint type and the product target pv1 x pv2 is at most epsilon.  One
    qualifying pair is chosen uniformly at random and x^n is sampled per
    symbol from the pair map.  Returns None when no pair qualifies, which
    is an observable event at small blocklength.
    """
    params = cb.params
    if not 0 <= w1 < params.m1:
        raise ValueError(f"message w1={w1!r} outside [0, {params.m1})")
    if not 0 <= w2 < params.m2:
        raise ValueError(f"message w2={w2!r} outside [0, {params.m2})")
    a1, a2 = cb.pv1.alphabet_size, cb.pv2.alphabet_size
    target = np.outer(cb.pv1.probs, cb.pv2.probs)
    qualifying = []
    for j1 in range(params.l1):
        v1_word = cb.v1_words[w1, j1]
        for j2 in range(params.l2):
            v2_word = cb.v2_words[w2, j2]
            deviation = np.max(np.abs(_empirical_joint(v1_word, v2_word, a1, a2) - target))
            if deviation <= cb.epsilon:
                qualifying.append((j1, j2))
    if not qualifying:
        return None
    rng = _rng(noise_seed, _TAG_ENCODE)
    j1, j2 = qualifying[int(rng.integers(len(qualifying)))]
    pair_rows = cb.x_map.reshape(a1 * a2, -1)
    pair_index = cb.v1_words[w1, j1] * a2 + cb.v2_words[w2, j2]
    return _sample_conditional(rng, pair_rows, pair_index)


def _decode_binned(words: np.ndarray, y: np.ndarray, log_matrix: np.ndarray) -> int:
    """ML bin index over a binned codebook words[m, l, n]."""
    scores = _loglik_scores(words, y, log_matrix)
    return int(np.argmax(scores)) // words.shape[1]


def _binning_composites(
    cb: BinningCodebook, py1x: DiscreteChannel, py2x: DiscreteChannel
) -> tuple[DiscreteChannel, DiscreteChannel]:
    """Per-letter channels V1 -> Y1 and V2 -> Y2 induced by the pair map."""
    comp1 = np.einsum("w,vwx,xy->vy", cb.pv2.probs, cb.x_map, py1x.matrix)
    comp2 = np.einsum("v,vwx,xy->wy", cb.pv1.probs, cb.x_map, py2x.matrix)
    return DiscreteChannel(comp1), DiscreteChannel(comp2)


def run_error_experiment(
    cb: SuperpositionCodebook | BinningCodebook,
    channels: tuple[DiscreteChannel, DiscreteChannel],
    trials: int,
    seed: int,
) -> TrialResult:
    """Estimate the union decoding-error probability by Monte Carlo.

    Each trial draws uniform messages, encodes, sends the same x^n through
    both receiver channels with independent noise, and decodes with the ML
    decoders.  The union event counts a trial in which either receiver
    misses its own message.  For double-binning codebooks an encoding
    failure counts as an error at both receivers and is also tallied
    separately.
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials!r}")
    py1x, py2x = channels
    params = cb.params
    msg_rng = _rng(seed, _TAG_MESSAGES)
    trial_seeds = _rng(seed, _TAG_TRIALS).integers(0, _MASK64, size=(trials, 3), dtype=np.uint64)

    superposition = isinstance(cb, SuperpositionCodebook)
    if superposition:
        composite_rx2 = cascade(cb.pxu, py2x)
        log_rx1 = _log_matrix(py1x.matrix)
        log_rx2 = _log_matrix(composite_rx2.matrix)
    else:
        comp1, comp2 = _binning_composites(cb, py1x, py2x)
        log_rx1 = _log_matrix(comp1.matrix)
        log_rx2 = _log_matrix(comp2.matrix)

    errors_rx1 = errors_rx2 = errors_union = failures = 0
    for t in range(trials):
        w1 = int(msg_rng.integers(params.m1))
        w2 = int(msg_rng.integers(params.m2))
        if superposition:
            x = encode_superposition(cb, w1, w2, noise_seed=int(trial_seeds[t, 0]))
        else:
            x = encode_double_binning(cb, w1, w2, noise_seed=int(trial_seeds[t, 0]))
            if x is None:
                failures += 1
                errors_rx1 += 1
                errors_rx2 += 1
                errors_union += 1
                continue
        y1 = transmit(x, py1x, noise_seed=int(trial_seeds[t, 1]))
        y2 = transmit(x, py2x, noise_seed=int(trial_seeds[t, 2]))
        if superposition:
            w1_hat, _ = decode_rx1(cb, y1, py1x)
            w2_hat = decode_rx2(cb, y2, composite_rx2)
        else:
            w1_hat = _decode_binned(cb.v1_words, y1, log_rx1)
            w2_hat = _decode_binned(cb.v2_words, y2, log_rx2)
        err1 = w1_hat != w1
        err2 = w2_hat != w2
        errors_rx1 += err1
        errors_rx2 += err2
        errors_union += err1 or err2

    pe = errors_union / trials
    half_width = 1.96 * math.sqrt(pe * (1.0 - pe) / trials)
    return TrialResult(
        trials=trials,
        errors_rx1=errors_rx1,
        errors_rx2=errors_rx2,
        errors_union=errors_union,
        pe_estimate=pe,
        half_width=half_width,
        encoding_failures=failures,
    )
