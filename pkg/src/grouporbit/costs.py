"""Sparsifying cost functions evaluated over matrix/tensor entries.

A scalar cost f induces the orbit objective ``sum_ij f(|x_ij|)``.  Costs that
are even, vanish at zero, subadditive, and strictly concave after the
substitution ``x -> sqrt(x)`` are sparsifying: minimizing them over a unit
group orbit drives mass onto few entries.

Textual forms: ``lp:1.0 | lpneg:3 | capped:0.5,1.0 | log1p | entropy |
masked-lp:1,lower | inf | nnz:1e-6``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


def _magnitudes(data: np.ndarray) -> np.ndarray:
    mags = np.abs(np.asarray(data))
    if not np.all(np.isfinite(mags)):
        raise ValueError("non-finite data")
    return mags


@dataclass(frozen=True)
class EntrywisePow:
    """``sum |x|^p`` for p in (0, 2); p = 1 is the entrywise l1 cost."""

    p: float

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 2.0:
            raise ValueError(f"EntrywisePow needs p in (0, 2), got {self.p}")

    def evaluate(self, data: np.ndarray) -> float:
        return float(np.sum(_magnitudes(data) ** self.p))

    def scalar(self, x: float) -> float:
        return abs(x) ** self.p

    def describe(self) -> str:
        return f"lp:{self.p:g}"


@dataclass(frozen=True)
class EntrywisePowNeg:
    """``-sum |x|^p`` for p > 2 (minimizing it maximizes the power sum)."""

    p: float

    def __post_init__(self) -> None:
        if not self.p > 2.0:
            raise ValueError(f"EntrywisePowNeg needs p > 2, got {self.p}")

    def evaluate(self, data: np.ndarray) -> float:
        return float(-np.sum(_magnitudes(data) ** self.p))

    def scalar(self, x: float) -> float:
        return -(abs(x) ** self.p)

    def describe(self) -> str:
        return f"lpneg:{self.p:g}"


@dataclass(frozen=True)
class CappedPow:
    """``sum min(|x|^p, cap)``."""

    p: float
    cap: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 2.0:
            raise ValueError(f"CappedPow needs p in (0, 2), got {self.p}")
        if self.cap <= 0.0:
            raise ValueError(f"CappedPow needs cap > 0, got {self.cap}")

    def evaluate(self, data: np.ndarray) -> float:
        return float(np.sum(np.minimum(_magnitudes(data) ** self.p, self.cap)))

    def scalar(self, x: float) -> float:
        return min(abs(x) ** self.p, self.cap)

    def describe(self) -> str:
        return f"capped:{self.p:g},{self.cap:g}"


@dataclass(frozen=True)
class Log1p:
    """``sum log(1 + |x|)``."""

    def evaluate(self, data: np.ndarray) -> float:
        return float(np.sum(np.log1p(_magnitudes(data))))

    def scalar(self, x: float) -> float:
        return math.log1p(abs(x))

    def describe(self) -> str:
        return "log1p"


@dataclass(frozen=True)
class Entropy:
    """``sum -|x| log|x|`` with the continuous extension 0 at x = 0."""

    def evaluate(self, data: np.ndarray) -> float:
        mags = _magnitudes(data)
        out = np.zeros_like(mags, dtype=float)
        nz = mags > 0
        out[nz] = -mags[nz] * np.log(mags[nz])
        return float(np.sum(out))

    def scalar(self, x: float) -> float:
        ax = abs(x)
        return 0.0 if ax == 0.0 else -ax * math.log(ax)

    def describe(self) -> str:
        return "entropy"


@dataclass(frozen=True)
class MaskedPow:
    """``sum over masked entries |x|^p``; region is the strict lower or upper triangle.

    Used by the triangularizing decompositions: the mask marks the entries the
    orbit should annihilate.
    """

    p: float
    region: str = "lower"

    def __post_init__(self) -> None:
        if self.p <= 0.0:
            raise ValueError(f"MaskedPow needs p > 0, got {self.p}")
        if self.region not in ("lower", "upper"):
            raise ValueError(f"MaskedPow region must be 'lower' or 'upper', got {self.region!r}")

    def _mask(self, shape: tuple[int, int]) -> np.ndarray:
        rows, cols = np.indices(shape)
        return rows > cols if self.region == "lower" else rows < cols

    def evaluate(self, data: np.ndarray) -> float:
        mags = _magnitudes(data)
        if mags.ndim != 2:
            raise ValueError("MaskedPow applies to matrices")
        return float(np.sum(mags[self._mask(mags.shape)] ** self.p))

    def describe(self) -> str:
        return f"masked-lp:{self.p:g},{self.region}"


@dataclass(frozen=True)
class InfNorm:
    """``max |x|``."""

    def evaluate(self, data: np.ndarray) -> float:
        return float(np.max(_magnitudes(data)))

    def describe(self) -> str:
        return "inf"


@dataclass(frozen=True)
class Nnz:
    """Count of entries with ``|x| > threshold``.

    ``threshold=None`` means the relative default ``1e-6 * max|x|`` taken at
    evaluation time.
    """

    threshold: float | None = None

    def evaluate(self, data: np.ndarray) -> float:
        mags = _magnitudes(data)
        thr = self.threshold
        if thr is None:
            thr = 1e-6 * float(np.max(mags)) if mags.size else 0.0
        return float(np.count_nonzero(mags > thr))

    def describe(self) -> str:
        return "nnz" if self.threshold is None else f"nnz:{self.threshold:g}"


@dataclass(frozen=True)
class Combined:
    """Conical combination ``sum_k w_k * cost_k``."""

    terms: tuple[tuple[float, "Cost"], ...]

    def evaluate(self, data: np.ndarray) -> float:
        return float(sum(w * c.evaluate(data) for w, c in self.terms))

    def scalar(self, x: float) -> float:
        total = 0.0
        for w, c in self.terms:
            fn = getattr(c, "scalar", None)
            if fn is None:
                raise TypeError(f"{c.describe()} has no scalar form")
            total += w * fn(x)
        return float(total)

    def describe(self) -> str:
        return " + ".join(f"{w:g}*{c.describe()}" for w, c in self.terms)


Cost = (
    EntrywisePow
    | EntrywisePowNeg
    | CappedPow
    | Log1p
    | Entropy
    | MaskedPow
    | InfNorm
    | Nnz
    | Combined
)


def evaluate(cost: Cost, data: np.ndarray) -> float:
    """Evaluate a cost over the entries of ``data``."""
    return cost.evaluate(data)


def conical_combine(pairs: Sequence[tuple[float, Cost]]) -> Combined:
    """Nonnegative weighted sum of costs; at least one weight must be positive."""
    if not pairs:
        raise ValueError("conical_combine needs at least one term")
    for w, _ in pairs:
        if w < 0:
            raise ValueError(f"weights must be nonnegative, got {w}")
    if not any(w > 0 for w, _ in pairs):
        raise ValueError("at least one weight must be positive")
    return Combined(tuple((float(w), c) for w, c in pairs))


@dataclass(frozen=True)
class SparsifyReport:
    """Outcome of the sufficient-condition screen for a scalar cost candidate."""

    even: bool
    nonneg_at_zero: bool
    subadditive: bool
    strictly_concave: bool

    @property
    def passed(self) -> bool:
        return self.even and self.nonneg_at_zero and self.subadditive and self.strictly_concave


def _default_sample_pairs() -> tuple[np.ndarray, list[tuple[float, float]]]:
    # Grid 0..10 step 0.01; pair checks use a decimated subgrid plus seeded
    # random pairs so the screen stays cheap.
    xs = np.round(np.arange(0.01, 10.0 + 1e-9, 0.01), 10)
    coarse = np.round(np.arange(0.1, 10.0 + 1e-9, 0.1), 10)
    pairs = [(float(a), float(b)) for i, a in enumerate(coarse) for b in coarse[i:]]
    rng = np.random.default_rng(0)
    idx = rng.integers(0, xs.size, size=(2048, 2))
    pairs += [(float(xs[i]), float(xs[j])) for i, j in idx]
    return xs, pairs


def check_sparsifying(
    f: Callable[[float], float],
    samples: Sequence[float] | None = None,
    tol: float = 1e-9,
) -> SparsifyReport:
    """Numerically screen a scalar function for the sparsifying sufficient condition.

    Flags: evenness ``f(x) = f(-x)``; ``f(0) >= -tol``; subadditivity
    ``f(a) + f(b) >= f(a+b) - tol`` over sample pairs; strict midpoint
    concavity ``f((a+b)/2) > (f(a) + f(b))/2 + tol`` for distinct samples.

    Strict concavity plus subadditivity is sufficient but not necessary:
    ``|x|^p`` with 1 <= p < 2 and capped powers beyond their cap fail the
    strict screen yet still satisfy the orbit inequalities.  The default
    sample grid spans (0, 10]; pass explicit samples to screen a narrower
    domain (for example below a cap).
    """
    if samples is None:
        xs, pairs = _default_sample_pairs()
    else:
        xs = np.asarray(sorted({float(s) for s in samples if s > 0}), dtype=float)
        if xs.size == 0:
            raise ValueError("need positive samples")
        pairs = [(float(a), float(b)) for i, a in enumerate(xs) for b in xs[i:]]
    pos = [float(x) for x in xs]

    def safe(x: float) -> float:
        try:
            val = f(x)
        except (ValueError, ZeroDivisionError, OverflowError):
            return math.nan
        return float(val)

    f0 = safe(0.0)
    nonneg_at_zero = math.isfinite(f0) and f0 >= -tol

    even = all(
        math.isfinite(safe(x)) and math.isfinite(safe(-x)) and abs(safe(x) - safe(-x)) <= tol * max(1.0, abs(safe(x)))
        for x in pos
    )

    subadditive = True
    for a, b in pairs:
        fa, fb, fab = safe(a), safe(b), safe(a + b)
        if not (math.isfinite(fa) and math.isfinite(fb) and math.isfinite(fab)):
            subadditive = False
            break
        if fab > fa + fb + tol * max(1.0, abs(fa) + abs(fb)):
            subadditive = False
            break

    strictly_concave = True
    for a, b in pairs:
        if abs(a - b) <= 1e-12:
            continue
        fa, fb, fm = safe(a), safe(b), safe(0.5 * (a + b))
        if not (math.isfinite(fa) and math.isfinite(fb) and math.isfinite(fm)):
            strictly_concave = False
            break
        if fm <= 0.5 * (fa + fb) + tol:
            strictly_concave = False
            break

    return SparsifyReport(
        even=even,
        nonneg_at_zero=nonneg_at_zero,
        subadditive=subadditive,
        strictly_concave=strictly_concave,
    )


def parse_cost(text: str) -> Cost:
    """Parse textual cost syntax (see module docstring)."""
    text = text.strip()
    if text.startswith("lp:"):
        return EntrywisePow(float(text[3:]))
    if text.startswith("lpneg:"):
        return EntrywisePowNeg(float(text[6:]))
    if text.startswith("capped:"):
        parts = text[len("capped:") :].split(",")
        if len(parts) != 2:
            raise ValueError(f"bad capped cost syntax {text!r}")
        return CappedPow(float(parts[0]), float(parts[1]))
    if text == "log1p":
        return Log1p()
    if text == "entropy":
        return Entropy()
    if text.startswith("masked-lp:"):
        parts = text[len("masked-lp:") :].split(",")
        if len(parts) != 2:
            raise ValueError(f"bad masked cost syntax {text!r}")
        return MaskedPow(float(parts[0]), parts[1].strip())
    if text == "inf":
        return InfNorm()
    if text == "nnz":
        return Nnz()
    if text.startswith("nnz:"):
        return Nnz(float(text[4:]))
    raise ValueError(f"unknown cost syntax {text!r}")
