"""
Seeded synthetic write streams.

Both generators draw i.i.d. Zipf ranks and map ranks to LBAs. `gen_two_region`
keeps the hottest ranks inside a hot region of `hot_fraction` x WSS LBAs and
reshuffles which hot LBA owns which hot rank every `churn_period_blocks`
writes, so per-LBA popularity drifts while the overall distribution stays put.
"""

from __future__ import annotations

import numpy as np

from lsgc.analysis.zipf_math import ZipfModel
from lsgc.core.models import SyntheticSpec


def _draw_ranks(rng: np.random.Generator, model: ZipfModel, count: int) -> np.ndarray:
    return rng.choice(model.n, size=count, p=model.p)


def gen_zipf(spec: SyntheticSpec) -> np.ndarray:
    rng = np.random.default_rng(spec.seed)
    model = ZipfModel(n=spec.wss_blocks, alpha=spec.alpha)
    permutation = rng.permutation(spec.wss_blocks)
    return permutation[_draw_ranks(rng, model, spec.total_writes)].astype(np.int64)


def hot_region_size(spec: SyntheticSpec) -> int:
    return min(spec.wss_blocks, max(1, round(spec.hot_fraction * spec.wss_blocks)))


def gen_two_region(spec: SyntheticSpec) -> np.ndarray:
    rng = np.random.default_rng(spec.seed)
    model = ZipfModel(n=spec.wss_blocks, alpha=spec.alpha)
    hot = hot_region_size(spec)
    cold_lbas = hot + rng.permutation(spec.wss_blocks - hot)

    total = spec.total_writes
    lbas = np.empty(total, dtype=np.int64)
    for start in range(0, total, spec.churn_period_blocks):
        stop = min(total, start + spec.churn_period_blocks)
        hot_lbas = rng.permutation(hot)
        ranks = _draw_ranks(rng, model, stop - start)
        is_hot = ranks < hot
        chunk = np.empty(stop - start, dtype=np.int64)
        chunk[is_hot] = hot_lbas[ranks[is_hot]]
        chunk[~is_hot] = cold_lbas[ranks[~is_hot] - hot]
        lbas[start:stop] = chunk
    return lbas
