from __future__ import annotations

import pytest

from lsgc.analysis.zipf_math import (
    DEFAULT_LBAS,
    ZipfModel,
    cond_prob_gc,
    cond_prob_user,
    probability_grid,
    top_fraction_traffic,
)
from lsgc.core.exceptions import ConfigError
from lsgc.core.units import gib_to_blocks

V0_GRID_GIB = (0.25, 0.5, 1, 2, 4)


@pytest.fixture(scope="module")
def skewed() -> ZipfModel:
    return ZipfModel(n=DEFAULT_LBAS, alpha=1.0)


@pytest.fixture(scope="module")
def uniform() -> ZipfModel:
    return ZipfModel(n=DEFAULT_LBAS, alpha=0.0)


def test_user_write_probability_values(skewed, uniform):
    assert cond_prob_user(skewed, gib_to_blocks(0.25), gib_to_blocks(4)) == pytest.approx(0.771, abs=0.002)

    lowest = min(cond_prob_user(skewed, gib_to_blocks(1), gib_to_blocks(v0)) for v0 in V0_GRID_GIB)
    assert lowest == pytest.approx(0.871, abs=0.002)

    assert cond_prob_user(uniform, gib_to_blocks(1), gib_to_blocks(2)) == pytest.approx(0.095, abs=0.001)


def test_gc_write_probability_values(skewed):
    r0 = gib_to_blocks(8)
    young = cond_prob_gc(skewed, gib_to_blocks(2), r0)
    old = cond_prob_gc(skewed, gib_to_blocks(32), r0)

    assert young == pytest.approx(0.412, abs=0.002)
    assert old == pytest.approx(0.149, abs=0.002)
    assert (young - old) * 100 == pytest.approx(26.4, abs=0.5)


def test_gc_probability_spread_at_mild_skew():
    model = ZipfModel(n=DEFAULT_LBAS, alpha=0.2)
    r0 = gib_to_blocks(8)
    spread = cond_prob_gc(model, gib_to_blocks(2), r0) - cond_prob_gc(model, gib_to_blocks(32), r0)
    assert spread * 100 == pytest.approx(3.5, abs=0.3)


@pytest.mark.parametrize(
    "alpha, expected",
    [(0.0, 0.20), (0.2, 0.276), (0.4, 0.381), (0.6, 0.524), (0.8, 0.711), (1.0, 0.895)],
)
def test_top20_traffic(alpha, expected):
    model = ZipfModel(n=DEFAULT_LBAS, alpha=alpha)
    assert top_fraction_traffic(model, 0.2) == pytest.approx(expected, abs=0.003)


def test_uniform_user_probability_ignores_v0():
    model = ZipfModel(n=1 << 14, alpha=0.0)
    values = [cond_prob_user(model, 4000, v0) for v0 in (1, 100, 5000, 40000)]
    assert max(values) - min(values) < 1e-9


def test_uniform_gc_probability_ignores_g0():
    model = ZipfModel(n=1 << 14, alpha=0.0)
    values = [cond_prob_gc(model, g0, 3000) for g0 in (0, 100, 5000, 40000)]
    assert max(values) - min(values) < 1e-9


def test_probabilities_are_monotone():
    model = ZipfModel(n=1 << 14, alpha=0.8)
    user = [cond_prob_user(model, u0, 2000) for u0 in (10, 100, 1000, 10000, 100000)]
    gc = [cond_prob_gc(model, 500, r0) for r0 in (0, 10, 100, 1000, 10000)]
    assert user == sorted(user)
    assert gc == sorted(gc)
    assert all(0 <= value <= 1 for value in user + gc)


def test_edge_values():
    model = ZipfModel(n=1 << 12, alpha=1.0)
    assert cond_prob_user(model, 64 * model.n * 100, 100) == pytest.approx(1.0, abs=1e-6)
    assert cond_prob_gc(model, 100, 0) == 0
    assert top_fraction_traffic(model, 1.0) == 1.0

    with pytest.raises(ConfigError):
        cond_prob_user(model, 10, 0)
    with pytest.raises(ConfigError):
        top_fraction_traffic(model, 0)
    with pytest.raises(ConfigError):
        ZipfModel(n=0, alpha=1.0)


def test_top_traffic_is_monotone_in_frac_and_alpha():
    models = [ZipfModel(n=1 << 12, alpha=alpha) for alpha in (0.0, 0.5, 1.0)]
    for model in models:
        shares = [top_fraction_traffic(model, frac) for frac in (0.1, 0.2, 0.5, 1.0)]
        assert shares == sorted(shares)
    by_alpha = [top_fraction_traffic(model, 0.2) for model in models]
    assert by_alpha == sorted(by_alpha)


def test_probability_grid_rows():
    rows = list(probability_grid("user", [0.0, 1.0], [0.25], [1, 4], n=1 << 12))
    assert len(rows) == 4
    assert rows[0] == {"kind": "user", "alpha": 0.0, "u0_gib": 0.25, "v0_gib": 1, "probability": rows[0]["probability"]}

    traffic = list(probability_grid("traffic", [0.0], [0.2, 1.0], [], n=1 << 12))
    assert [row["probability"] for row in traffic] == pytest.approx([0.2, 1.0], abs=1e-3)

    with pytest.raises(ConfigError):
        list(probability_grid("bogus", [1.0], [1], [1], n=1 << 12))
