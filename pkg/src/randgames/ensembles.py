"""Seeded random-matrix ensembles and matrix serialization.

All sampling is driven by a counter-based generator (Philox4x64-10 as
exposed by numpy) keyed on a ``(base, stream_index)`` pair, so streams are
splittable and stable across platforms and process boundaries.  Gaussian
variates come from numpy's ziggurat implementation of ``standard_normal``.

Determinism contract: identical (ensemble, dims, seed) triples produce
bit-identical matrices, regardless of how many other streams were drawn
in between.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

_U64 = (1 << 64) - 1

GAUSSIAN = "gaussian"
HAAR = "haar"
RADEMACHER = "rademacher"
BERNOULLI = "bernoulli"

_KINDS = (GAUSSIAN, HAAR, RADEMACHER, BERNOULLI)


class MatrixParseError(ValueError):
    """Raised when a serialized matrix cannot be parsed.

    ``line`` is the 1-based offending line for CSV input, or None for JSON.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class RandomSeed:
    """Key of one random stream: a 64-bit base and a 64-bit stream index."""

    base: int
    stream_index: int = 0

    def __post_init__(self):
        for name in ("base", "stream_index"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not (0 <= v <= _U64):
                raise ValueError(f"{name} must be an integer in [0, 2**64)")

    def generator(self) -> np.random.Generator:
        key = (int(self.base) << 64) | int(self.stream_index)
        return np.random.Generator(np.random.Philox(key=key))


def _mix64(z: int) -> int:
    # SplitMix64 finalizer; a bijection on 64-bit words.
    z = (z + 0x9E3779B97F4A7C15) & _U64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _U64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _U64
    return z ^ (z >> 31)


def derive_stream(seed: RandomSeed, index: int) -> RandomSeed:
    """Child stream ``index`` of ``seed``.

    Injective in ``index`` for a fixed parent: the parent's stream word is
    scrambled by a bijective mixer and the index is added mod 2**64, so two
    distinct indices can never collide under one parent.
    """
    if not (0 <= index <= _U64):
        raise ValueError("index must be an integer in [0, 2**64)")
    child = (_mix64(int(seed.stream_index)) + int(index)) & _U64
    return RandomSeed(base=seed.base, stream_index=child)


@dataclass(frozen=True)
class EnsembleSpec:
    """Which matrix law to draw from.

    kind: one of "gaussian", "haar", "rademacher", "bernoulli".
    p: success probability, used by the Bernoulli kind only.
    """

    kind: str
    p: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.kind == BERNOULLI:
            if self.p is None or not (0.0 <= self.p <= 1.0):
                raise ValueError("bernoulli ensemble needs p in [0, 1]")
        elif self.p is not None:
            raise ValueError(f"{self.kind} ensemble takes no p parameter")

    def label(self) -> str:
        if self.kind == BERNOULLI:
            return f"bernoulli({self.p:g})"
        return self.kind


def _check_dims(n: int, m: int) -> None:
    if n < 1 or m < 1:
        raise ValueError("matrix dimensions must be >= 1")


def sample_gaussian(n: int, m: int, seed: RandomSeed) -> np.ndarray:
    """n x m matrix of iid standard normal entries."""
    _check_dims(n, m)
    return seed.generator().standard_normal((n, m))


def sample_gaussian_vector(n: int, seed: RandomSeed) -> np.ndarray:
    """Length-n vector of iid standard normal entries."""
    _check_dims(n, 1)
    return seed.generator().standard_normal(n)


def sample_haar_orthogonal(n: int, seed: RandomSeed) -> np.ndarray:
    """n x n orthogonal matrix drawn from Haar measure.

    QR of a Gaussian matrix alone is not Haar distributed: the factorization
    is only unique up to the signs of diag(R), and LAPACK's convention biases
    them.  Rescaling each column of Q by sign(R_jj) removes the bias.
    """
    _check_dims(n, n)
    z = seed.generator().standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    s = np.where(d >= 0.0, 1.0, -1.0)
    return q * s


def sample_discrete(spec: EnsembleSpec, n: int, m: int, seed: RandomSeed) -> np.ndarray:
    """n x m matrix with iid +-1 (rademacher) or {0,1} (bernoulli) entries."""
    _check_dims(n, m)
    rng = seed.generator()
    if spec.kind == RADEMACHER:
        return 2.0 * rng.integers(0, 2, size=(n, m)).astype(np.float64) - 1.0
    if spec.kind == BERNOULLI:
        return (rng.random((n, m)) < spec.p).astype(np.float64)
    raise ValueError(f"sample_discrete does not handle kind {spec.kind!r}")


def sample_matrix(spec: EnsembleSpec, n: int, m: int, seed: RandomSeed) -> np.ndarray:
    """Draw one n x m matrix from the given ensemble."""
    if spec.kind == GAUSSIAN:
        return sample_gaussian(n, m, seed)
    if spec.kind == HAAR:
        if n != m:
            raise ValueError("haar ensemble requires n == m")
        return sample_haar_orthogonal(n, seed)
    return sample_discrete(spec, n, m, seed)


def _as_matrix(matrix: np.ndarray) -> np.ndarray:
    out = np.asarray(matrix, dtype=np.float64)
    if out.ndim != 2 or out.size == 0:
        raise ValueError("matrix must be 2-dimensional and non-empty")
    return out


def matrix_to_csv(matrix: np.ndarray) -> str:
    """CSV text: one row per line, no header, full float precision."""
    out = _as_matrix(matrix)
    lines = [",".join(f"{v:.17g}" for v in row) for row in out]
    return "\n".join(lines) + "\n"


def matrix_from_csv(text: str) -> np.ndarray:
    rows: list[list[float]] = []
    width = None
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        cells = raw.split(",")
        try:
            row = [float(c) for c in cells]
        except ValueError as exc:
            raise MatrixParseError(str(exc), line=lineno) from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise MatrixParseError(
                f"expected {width} columns, got {len(row)}", line=lineno
            )
        rows.append(row)
    if not rows:
        raise MatrixParseError("no rows found", line=lineno or None)
    return np.array(rows, dtype=np.float64)


def matrix_to_json(matrix: np.ndarray) -> str:
    out = _as_matrix(matrix)
    n, m = out.shape
    return json.dumps({"n": n, "m": m, "data": [list(map(float, r)) for r in out]})


def matrix_from_json(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixParseError(f"invalid JSON: {exc}") from None
    try:
        n, m, data = int(obj["n"]), int(obj["m"]), obj["data"]
    except (KeyError, TypeError, ValueError):
        raise MatrixParseError('expected an object with "n", "m", "data"') from None
    mat = np.asarray(data, dtype=np.float64)
    if mat.ndim != 2 or mat.shape != (n, m):
        raise MatrixParseError(f"data shape {mat.shape} does not match (n, m)=({n}, {m})")
    return mat
