"""Channel and experiment file formats, plus atomic artifact writers.

Three channel descriptions are accepted, discriminated by "type":

* "bcc": alphabet sizes x, y1, y2, z and a flat row-major "joint" array
  of length x*y1*y2*z holding P(y1, y2, z | x), index order (x, y1, y2, z).
* "bcc-marginals": the three marginal matrices "py1x", "py2x", "pzx",
  one row per input symbol.
* "awgn-bcc": "power" and noise variances "n1", "n2", "n3".

Entries in [-1e-12, 0) are clamped to zero at load time to absorb
decimal round-off in hand-written files; anything below that floor, or
any other invariant violation, is rejected with the violated invariant
named.  Output files are written to a temporary file and renamed into
place, so a failed run never leaves a partial artifact.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channels import (
    BroadcastChannel,
    DiscreteChannel,
    InvalidDistribution,
    Pmf,
    marginal_channel,
)
from .regions import GaussianParams

NEGATIVE_GRACE = 1e-12


@dataclass(frozen=True)
class MarginalTriple:
    """The three single-receiver channels of a broadcast setup."""

    py1x: DiscreteChannel
    py2x: DiscreteChannel
    pzx: DiscreteChannel


def _clamp_grace(arr: np.ndarray) -> np.ndarray:
    out = np.asarray(arr, dtype=np.float64).copy()
    mask = (out < 0.0) & (out >= -NEGATIVE_GRACE)
    out[mask] = 0.0
    return out


def _require(data: dict, key: str):
    if key not in data:
        raise InvalidDistribution(f"channel description is missing the {key!r} field")
    return data[key]


def parse_channel(data: dict) -> BroadcastChannel | MarginalTriple | GaussianParams:
    """Parse a channel description dict, naming the violated invariant on error."""
    if not isinstance(data, dict):
        raise InvalidDistribution(f"channel description must be an object, got {type(data).__name__}")
    kind = _require(data, "type")
    if kind == "bcc":
        sizes = tuple(int(_require(data, k)) for k in ("x", "y1", "y2", "z"))
        if any(s < 1 for s in sizes):
            raise InvalidDistribution(f"alphabet sizes must be positive, got {sizes}")
        flat = _clamp_grace(np.asarray(_require(data, "joint"), dtype=np.float64))
        expected = int(np.prod(sizes))
        if flat.ndim != 1 or flat.size != expected:
            raise InvalidDistribution(
                f"joint array has {flat.size} entries, expected {expected} for sizes {sizes}"
            )
        return BroadcastChannel(flat.reshape(sizes))
    if kind == "bcc-marginals":
        matrices = [
            DiscreteChannel(_clamp_grace(np.asarray(_require(data, k), dtype=np.float64)))
            for k in ("py1x", "py2x", "pzx")
        ]
        if not (matrices[0].input_size == matrices[1].input_size == matrices[2].input_size):
            raise InvalidDistribution("marginal matrices disagree on the input alphabet size")
        return MarginalTriple(*matrices)
    if kind == "awgn-bcc":
        return GaussianParams(
            power=float(_require(data, "power")),
            n1=float(_require(data, "n1")),
            n2=float(_require(data, "n2")),
            n3=float(_require(data, "n3")),
        )
    raise InvalidDistribution(f"unknown channel type {kind!r}")


def load_channel(path: str | Path) -> BroadcastChannel | MarginalTriple | GaussianParams:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidDistribution(f"{path}: not valid JSON ({exc})") from exc
    return parse_channel(data)


def as_marginals(channel: BroadcastChannel | MarginalTriple) -> MarginalTriple:
    """Reduce any discrete channel description to its three marginals."""
    if isinstance(channel, MarginalTriple):
        return channel
    if isinstance(channel, BroadcastChannel):
        return MarginalTriple(
            py1x=marginal_channel(channel, "y1"),
            py2x=marginal_channel(channel, "y2"),
            pzx=marginal_channel(channel, "z"),
        )
    raise InvalidDistribution("a discrete channel is required, not a Gaussian description")


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed simulation request (see the experiment JSON schema in README)."""

    scheme: str
    n: int
    m1: int
    m2: int
    l1: int
    l2: int
    seed: int
    trials: int
    marginals: MarginalTriple
    pu: Pmf | None
    pxu: DiscreteChannel | None
    pv1: Pmf | None
    pv2: Pmf | None
    pxv: np.ndarray | None
    epsilon: float


def parse_experiment(data: dict, base_dir: Path | None = None) -> ExperimentConfig:
    scheme = _require(data, "scheme")
    if scheme not in ("superposition", "double-binning"):
        raise InvalidDistribution(f"unknown scheme {scheme!r}")
    channel = _require(data, "channel")
    if isinstance(channel, str):
        path = Path(channel)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        channel = load_channel(path)
    else:
        channel = parse_channel(channel)
    marginals = as_marginals(channel)

    pu = pxu = pv1 = pv2 = pxv = None
    if scheme == "superposition":
        pu = Pmf(_clamp_grace(np.asarray(_require(data, "pu"), dtype=np.float64)))
        pxu = DiscreteChannel(_clamp_grace(np.asarray(_require(data, "pxu"), dtype=np.float64)))
    else:
        pv1 = Pmf(_clamp_grace(np.asarray(_require(data, "pv1"), dtype=np.float64)))
        pv2 = Pmf(_clamp_grace(np.asarray(_require(data, "pv2"), dtype=np.float64)))
        pxv = _clamp_grace(np.asarray(_require(data, "pxv"), dtype=np.float64))

    return ExperimentConfig(
        scheme=scheme,
        n=int(_require(data, "n")),
        m1=int(_require(data, "m1")),
        m2=int(_require(data, "m2")),
        l1=int(data.get("l1", 1)),
        l2=int(data.get("l2", 1)),
        seed=int(data.get("seed", 0)),
        trials=int(data.get("trials", 1000)),
        marginals=marginals,
        pu=pu,
        pxu=pxu,
        pv1=pv1,
        pv2=pv2,
        pxv=pxv,
        epsilon=float(data.get("epsilon", 0.1)),
    )


def _atomic_write(path: str | Path, text: str) -> None:
    target = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent or Path("."), prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        os.unlink(tmp_name)
        raise


def format_sig(value: float) -> str:
    """12 significant digits, the interchange precision for CSV artifacts."""
    return f"{value:.12g}"


def write_csv(path: str | Path, header: list[str], rows: list[list[float]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(format_sig(v) for v in row) for row in rows)
    _atomic_write(path, "\n".join(lines) + "\n")


def write_json(path: str | Path, payload) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_frontier_csv(path: str | Path) -> tuple[list[str], np.ndarray]:
    with open(path) as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines:
        raise InvalidDistribution(f"{path}: empty CSV")
    header = lines[0].split(",")
    try:
        rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    except ValueError as exc:
        raise InvalidDistribution(f"{path}: malformed CSV row ({exc})") from exc
    if rows.ndim != 2 or rows.shape[1] != len(header):
        raise InvalidDistribution(f"{path}: rows do not match header {header}")
    return header, rows
