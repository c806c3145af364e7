"""Raw pair correlation, gap histograms, and their reference laws."""

import math

import numpy as np
import pytest

from paircorr.stats import (PointSet, fractional_parts, gap_distribution,
                            pair_corr_count, uniform_points)


def naive_pair_count(points: np.ndarray, s: float) -> int:
    M = points.size
    d = np.abs(points[:, None] - points[None, :])
    d = np.minimum(d, 1.0 - d)
    mask = d <= s / M
    return int(mask.sum()) - M  # drop x = y


def test_fractional_parts_values_and_window():
    ps = fractional_parts(0.5, 1.0, 1, 100)
    assert ps.size == 100
    assert np.all((ps.points >= 0.0) & (ps.points < 1.0))
    assert ps.points[1] == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-12)
    assert ps.points[3] == 0.0  # n = 4 is a square


def test_fractional_parts_exclude_squares():
    ps = fractional_parts(0.5, 1.0, 1, 100, exclude_squares=True)
    assert ps.size == 90
    assert np.all(ps.points > 0.0)
    # alpha = 1, theta = 1/2: only the squares land exactly on 0


def test_fractional_parts_validation():
    with pytest.raises(ValueError):
        fractional_parts(1.0, 1.0, 1, 10)
    with pytest.raises(ValueError):
        fractional_parts(0.5, -1.0, 1, 10)
    with pytest.raises(ValueError):
        fractional_parts(0.5, 1.0, 5, 4)


def test_uniform_points_deterministic():
    a = uniform_points(1000, seed=42)
    b = uniform_points(1000, seed=42)
    c = uniform_points(1000, seed=43)
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, c.points)
    assert a.theta is None and "iid uniform" in a.window


def test_pair_corr_hand_examples():
    two = PointSet(None, None, 1, 2, False, np.array([0.1, 0.2]))
    est = pair_corr_count(two, 0.5)
    assert est.count == 2 and est.normalized == 1.0
    far = PointSet(None, None, 1, 2, False, np.array([0.0, 0.5]))
    assert pair_corr_count(far, 0.5).count == 0
    assert pair_corr_count(two, 0.5).poisson_ref == 1.0


def test_pair_corr_validation_and_short_circuit():
    ps = uniform_points(50, seed=0)
    with pytest.raises(ValueError):
        pair_corr_count(ps, -1.0)
    # radius >= 1/2 covers the torus
    assert pair_corr_count(ps, 25.0).count == 50 * 49


def test_pair_corr_matches_naive_oracle():
    for seed in range(5):
        rng = np.random.default_rng(seed)
        M = int(rng.integers(50, 400))
        pts = rng.random(M)
        ps = PointSet(None, None, 1, M, False, pts)
        for s in (0.3, 1.0, 2.7):
            assert pair_corr_count(ps, s).count == naive_pair_count(pts, s)


def test_pair_corr_translation_invariance():
    rng = np.random.default_rng(9)
    pts = rng.random(300)
    shifted = np.mod(pts + 0.374, 1.0)
    a = PointSet(None, None, 1, 300, False, pts)
    b = PointSet(None, None, 1, 300, False, shifted)
    for s in (0.5, 1.0, 3.0):
        assert pair_corr_count(a, s).count == pair_corr_count(b, s).count
    ga = gap_distribution(a, bins=40)
    gb = gap_distribution(b, bins=40)
    assert np.array_equal(ga.counts, gb.counts)


def test_gap_distribution_mass_and_edges():
    ps = uniform_points(5000, seed=1)
    gh = gap_distribution(ps, bins=80)
    w = gh.edges[1] - gh.edges[0]
    mass = float(gh.density.sum() * w) + gh.overflow_count / gh.n_points
    assert mass == pytest.approx(1.0, abs=1e-9)
    assert gh.edges[0] == 0.0 and gh.edges[-1] == 4.0
    assert int(gh.counts.sum()) + gh.overflow_count == gh.n_points
    with pytest.raises(ValueError):
        gap_distribution(ps, bins=0)


def test_gap_distribution_equally_spaced_spike():
    # dyadic spacing and offset keep every gap exactly 1/256 in floats
    pts = (np.arange(256) / 256.0 + 0.125) % 1.0
    ps = PointSet(None, None, 1, 256, False, pts)
    # 83 bins put the rescaled spike at 1.0 strictly inside a bin
    gh = gap_distribution(ps, bins=83)
    hot = np.argmax(gh.counts)
    assert gh.counts[hot] == 256
    assert gh.edges[hot] < 1.0 < gh.edges[hot + 1]


def test_gap_sum_is_one():
    rng = np.random.default_rng(10)
    pts = rng.random(777)
    ps = PointSet(None, None, 1, 777, False, pts)
    vs = np.sort(pts)
    gaps = np.diff(vs, append=vs[0] + 1.0)
    assert float(gaps.sum()) == pytest.approx(1.0, abs=1e-12)
    gh = gap_distribution(ps, bins=80)
    mass = float(gh.density.sum() * (gh.edges[1] - gh.edges[0]))
    assert mass + gh.overflow_count / 777 == pytest.approx(1.0, abs=1e-12)


def test_uniform_gaps_follow_exponential_law():
    # 5 seeds at N = 1e5; compare to the exact per-bin average of e^-s
    worst = 0.0
    for seed in range(5):
        gh = gap_distribution(uniform_points(10**5, seed=seed), bins=80)
        w = gh.edges[1] - gh.edges[0]
        ref = (np.exp(-gh.edges[:-1]) - np.exp(-gh.edges[1:])) / w
        sel = gh.midpoints <= 0.5
        worst = max(worst, float(np.max(np.abs(gh.density[sel] - ref[sel]))))
    assert worst < 0.05


def test_squares_create_close_pairs():
    # sqrt(n) mod 1 with the squares kept shows an excess at small s
    kept = fractional_parts(0.5, 1.0, 1, 10**4)
    dropped = fractional_parts(0.5, 1.0, 1, 10**4, exclude_squares=True)
    s = 0.25
    assert pair_corr_count(kept, s).normalized > 2.0 * pair_corr_count(dropped, s).normalized
    assert pair_corr_count(dropped, s).normalized < 2.0 * s * 1.5
