"""
Closed-form lifespan probabilities under independent Zipf-distributed writes.

LBA i is written by each user write with probability p_i. The chance that it is
not written in x consecutive writes, (1 - p_i)^x, is evaluated as
exp(x * log1p(-p_i)) since p_i is tiny and x is large.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from lsgc.core.exceptions import ConfigError, EmptyWorkloadError
from lsgc.core.units import BLOCKS_PER_GIB, gib_to_blocks

# 10 GiB of 4 KiB blocks
DEFAULT_LBAS: int = 10 * BLOCKS_PER_GIB


@dataclass(frozen=True)
class ZipfModel:
    n: int
    alpha: float
    p: np.ndarray = field(init=False, repr=False, compare=False)
    log_q: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError("a Zipf model needs at least one LBA")
        if self.alpha < 0:
            raise ConfigError("alpha must be >= 0")
        weights = np.arange(1, self.n + 1, dtype=np.float64) ** -self.alpha
        p = weights / weights.sum()
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "log_q", np.log1p(-p))

    def not_written_within(self, x: float) -> np.ndarray:
        """(1 - p_i)^x per LBA."""
        return np.exp(x * self.log_q)

    def written_within(self, x: float) -> np.ndarray:
        """1 - (1 - p_i)^x per LBA."""
        return -np.expm1(x * self.log_q)


def cond_prob_user(model: ZipfModel, u0: float, v0: float) -> float:
    """Pr(u <= u0 | v <= v0) for a user write whose invalidated predecessor lived v."""
    if v0 <= 0:
        raise ConfigError("v0 must be >= 1 block")
    within_v = model.written_within(v0) * model.p
    denominator = within_v.sum()
    if denominator <= 0:
        raise EmptyWorkloadError("no user write satisfies v <= v0")
    numerator = (model.written_within(u0) * within_v).sum()
    return float(min(1.0, numerator / denominator))


def cond_prob_gc(model: ZipfModel, g0: float, r0: float) -> float:
    """Pr(u <= g0 + r0 | u > g0) for a block rewritten by GC at age g0."""
    if g0 < 0 or r0 < 0:
        raise ConfigError("g0 and r0 must be >= 0")
    alive_at_g0 = model.not_written_within(g0)
    denominator = (model.p * alive_at_g0).sum()
    if denominator <= 0:
        raise EmptyWorkloadError("no block survives to age g0")
    numerator = (model.p * (alive_at_g0 - model.not_written_within(g0 + r0))).sum()
    return float(min(1.0, max(0.0, numerator / denominator)))


def top_fraction_traffic(model: ZipfModel, frac: float) -> float:
    """Share of writes that go to the `frac` most frequently written LBAs."""
    if not 0 < frac <= 1:
        raise ConfigError("frac must lie in (0, 1]")
    count = math.floor(frac * model.n)
    if count >= model.n:
        return 1.0
    return float(model.p[:count].sum())


def probability_grid(
    kind: str,
    alphas: Sequence[float],
    first_gib: Sequence[float],
    second_gib: Sequence[float],
    n: int = DEFAULT_LBAS,
) -> Iterator[dict[str, float | str]]:
    """
    Rows for the `math` command.

    `kind` is `user` (first = u0, second = v0), `gc` (first = g0, second = r0)
    or `traffic` (first = top fractions, second unused). Sizes are in GiB.
    """
    for alpha in alphas:
        model = ZipfModel(n=n, alpha=alpha)
        if kind == "traffic":
            for frac in first_gib:
                yield {
                    "kind": kind,
                    "alpha": alpha,
                    "frac": frac,
                    "probability": top_fraction_traffic(model, frac),
                }
            continue
        for first in first_gib:
            for second in second_gib:
                first_blocks = gib_to_blocks(first)
                second_blocks = gib_to_blocks(second)
                if kind == "user":
                    value = cond_prob_user(model, first_blocks, second_blocks)
                    yield {"kind": kind, "alpha": alpha, "u0_gib": first, "v0_gib": second, "probability": value}
                elif kind == "gc":
                    value = cond_prob_gc(model, first_blocks, second_blocks)
                    yield {"kind": kind, "alpha": alpha, "g0_gib": first, "r0_gib": second, "probability": value}
                else:
                    raise ConfigError(f"unknown probability kind '{kind}'")
