"""Finite discrete law of the per-stage return X.

A :class:`ReturnDistribution` is an immutable, validated list of
``(value, probability)`` atoms sorted by value.  All moments are exact finite
sums, so every closed form built on top of them can be checked exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DistributionFileError,
    EmptyDistribution,
    InsufficientSamples,
    KellyError,
    NonFiniteValue,
    NonPositiveProbability,
    ProbabilityMassNotOne,
)

MASS_TOLERANCE = 1e-12

FILE_HEADER = "value,probability"
_DECIMAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")


@dataclass(frozen=True)
class ReturnDistribution:
    """Discrete return law; build it with :func:`from_atoms`, not directly."""

    atoms: tuple[tuple[float, float], ...]

    @cached_property
    def values(self) -> np.ndarray:
        arr = np.array([v for v, _ in self.atoms], dtype=np.float64)
        arr.flags.writeable = False
        return arr

    @cached_property
    def probs(self) -> np.ndarray:
        arr = np.array([p for _, p in self.atoms], dtype=np.float64)
        arr.flags.writeable = False
        return arr

    @property
    def x_min(self) -> float:
        return self.atoms[0][0]

    @property
    def x_max(self) -> float:
        return self.atoms[-1][0]

    def __len__(self) -> int:
        return len(self.atoms)

    def __str__(self) -> str:
        body = ", ".join(f"{v:g} @ {p:g}" for v, p in self.atoms)
        return "{" + body + "}"


def from_atoms(pairs: Iterable[Sequence[float]]) -> ReturnDistribution:
    """Validate ``(value, probability)`` pairs and return a sorted distribution.

    Atoms with bit-identical values are merged by summing their probabilities.
    """
    merged: dict[float, float] = {}
    count = 0
    for pair in pairs:
        value, prob = float(pair[0]), float(pair[1])
        count += 1
        if not (math.isfinite(value) and math.isfinite(prob)):
            raise NonFiniteValue(f"non-finite atom ({pair[0]!r}, {pair[1]!r})")
        if prob <= 0.0:
            raise NonPositiveProbability(f"probability {prob!r} of atom {value!r} is not positive")
        # -0.0 and 0.0 hash alike; keep the positive zero
        value = value + 0.0
        merged[value] = merged.get(value, 0.0) + prob
    if count == 0:
        raise EmptyDistribution("a distribution needs at least one atom")

    total = math.fsum(merged.values())
    if abs(total - 1.0) > MASS_TOLERANCE:
        raise ProbabilityMassNotOne(f"probabilities sum to {total!r}, not 1")
    return ReturnDistribution(tuple(sorted(merged.items())))


def mean(d: ReturnDistribution) -> float:
    return math.fsum(p * x for x, p in d.atoms)


def second_moment(d: ReturnDistribution) -> float:
    return math.fsum(p * x * x for x, p in d.atoms)


def variance(d: ReturnDistribution) -> float:
    # Centred sum: never negative and exactly zero for a point mass.
    mu = mean(d)
    return math.fsum(p * (x - mu) ** 2 for x, p in d.atoms)


def support_bounds(d: ReturnDistribution) -> tuple[float, float]:
    """Smallest and largest atom.  No sign condition is imposed here."""
    return d.x_min, d.x_max


def estimate_from_samples(samples: Sequence[float]) -> tuple[float, float]:
    """Sample mean and unbiased (N-1) sample variance of observed returns."""
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise InsufficientSamples(f"need at least 2 samples, got {x.size}")
    mu_hat = math.fsum(x) / x.size
    sigma_sq_hat = math.fsum((x - mu_hat) ** 2) / (x.size - 1)
    return mu_hat, sigma_sq_hat


def parse_distribution(text: str) -> ReturnDistribution:
    """Parse the ``value,probability`` CSV text format.

    The first line must be the header; ``#`` lines and blank lines are skipped.
    """
    lines = text.splitlines()
    if not lines or lines[0].strip() != FILE_HEADER:
        raise DistributionFileError(f"expected header {FILE_HEADER!r}", line=1)

    pairs = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 2:
            raise DistributionFileError(f"expected 2 comma-separated fields, got {len(fields)}", line=lineno)
        for field in fields:
            if not _DECIMAL.fullmatch(field):
                raise DistributionFileError(f"not a decimal literal: {field!r}", line=lineno)
        pairs.append((float(fields[0]), float(fields[1])))

    try:
        return from_atoms(pairs)
    except DistributionFileError:
        raise
    except KellyError as exc:
        raise DistributionFileError(str(exc)) from exc


def read_distribution(path: str | Path) -> ReturnDistribution:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DistributionFileError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_distribution(text)


def format_distribution(d: ReturnDistribution) -> str:
    """Inverse of :func:`parse_distribution` (shortest round-trip float repr)."""
    rows = [FILE_HEADER] + [f"{x!r},{p!r}" for x, p in d.atoms]
    return "\n".join(rows) + "\n"
