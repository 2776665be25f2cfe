import math

import numpy as np
import pytest

from wquantile import (
    DecaySpec,
    DomainError,
    EmptySampleError,
    EstimatorKind,
    MovingQuantileTracker,
    WeightedSample,
    assign_group_weights,
    decay_weights,
    estimate,
    whf_quantile,
)


class TestDecay:
    def test_half_life_law(self):
        d = DecaySpec(7.0)
        assert np.allclose(d.weight([0, 7, 14]), [1, 0.5, 0.25])

    def test_decay_weights(self):
        assert np.array_equal(decay_weights(1, 3.0), [1.0])
        assert np.allclose(decay_weights(3, 1.0), [0.25, 0.5, 1])
        w = decay_weights(50, 4.5)
        assert w[-1] == 1 and np.all(np.diff(w) > 0)

    def test_decay_weights_rejects(self):
        with pytest.raises(DomainError):
            decay_weights(3, 0)
        with pytest.raises(DomainError):
            decay_weights(0, 1)

    def test_group_weights(self):
        assert np.allclose(assign_group_weights([1, 1, 2, 2], 1), [0.5, 0.5, 1, 1])
        assert np.allclose(assign_group_weights([5, 5, 5], 2), 1)
        assert np.allclose(assign_group_weights([1, 2, 4], 1), [0.125, 0.25, 1])
        with pytest.raises(DomainError):
            assign_group_weights([2, 1], 1)

    @pytest.mark.parametrize("half_life, floor", [(0, 1e-6), (-1, 1e-6), (math.inf, 1e-6), (1, 1.0), (1, -0.1)])
    def test_decay_rejects(self, half_life, floor):
        with pytest.raises(DomainError):
            DecaySpec(half_life, floor)

    def test_max_age(self):
        d = DecaySpec(10, 1e-6)
        a = d.max_age
        ratio = 1 - 2 ** (-1 / 10)
        assert 2 ** (-a / 10) * ratio == pytest.approx(1e-6)
        assert math.isinf(DecaySpec(10, 0).max_age)
        assert d.retained_bound == math.ceil(10 * math.log2(1e6)) + 1


class TestTracker:
    def test_single_value(self):
        t = MovingQuantileTracker(DecaySpec(5))
        assert t.push(3.5).quantile(0.5) == 3.5

    def test_empty(self):
        with pytest.raises(EmptySampleError):
            MovingQuantileTracker(DecaySpec(5)).quantile(0.5)

    def test_rejects_missing(self):
        with pytest.raises(DomainError):
            MovingQuantileTracker(DecaySpec(5)).push(math.nan)

    def test_constant_stream(self):
        d = DecaySpec(3, 1e-3)
        t = MovingQuantileTracker(d)
        for _ in range(10 * d.retained_bound):
            t.push(4.25)
        assert np.all(t.quantiles([0, 0.1, 0.5, 1]) == 4.25)

    def test_equals_batch_without_eviction(self):
        rng = np.random.default_rng(3)
        x = rng.standard_cauchy(300)
        t = MovingQuantileTracker(DecaySpec(12.5, 0.0))
        for k in range(1, x.size + 1):
            t.push(x[k - 1])
            batch = whf_quantile(WeightedSample(x[:k], decay_weights(k, 12.5)), 0.3)
            assert t.quantile(0.3) == pytest.approx(batch, abs=1e-12)

    def test_equals_batch_on_retained_window(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=400)
        d = DecaySpec(5, 1e-4)
        t = MovingQuantileTracker(d, EstimatorKind.hd())
        t.extend(x)
        k = len(t)
        assert k < x.size
        window = WeightedSample(x[-k:], decay_weights(k, 5))
        assert t.quantile(0.7) == pytest.approx(estimate(window, EstimatorKind.hd(), [0.7])[0], abs=1e-12)

    def test_retained_bound_and_floor(self):
        for h, floor in [(1, 1e-2), (2.5, 1e-6), (10, 1e-3)]:
            d = DecaySpec(h, floor)
            t = MovingQuantileTracker(d)
            for i in range(int(5 * d.retained_bound)):
                t.push(float(i))
                assert len(t) <= d.retained_bound
                w = t.snapshot().weights
                assert np.all(w / w.sum() >= floor * (1 - 1e-12))

    def test_eviction_error_shrinks_with_floor(self):
        rng = np.random.default_rng(11)
        errors = {1e-3: 0.0, 1e-6: 0.0, 1e-9: 0.0}
        for _ in range(100):
            x = rng.normal(size=200)
            full = MovingQuantileTracker(DecaySpec(8, 0.0)).extend(x).quantile(0.5)
            for floor in errors:
                q = MovingQuantileTracker(DecaySpec(8, floor)).extend(x).quantile(0.5)
                errors[floor] = max(errors[floor], abs(q - full))
        assert errors[1e-3] >= errors[1e-6] >= errors[1e-9]
        assert errors[1e-6] <= 1e-4

    def test_groups(self):
        t = MovingQuantileTracker(DecaySpec(1, 0.0))
        t.extend([1, 2, 3, 4], groups=[1, 1, 2, 2])
        snap = t.snapshot()
        assert np.allclose(snap.weights, [0.5, 0.5, 1, 1])
        assert np.allclose(snap.weights, assign_group_weights([1, 1, 2, 2], 1))

    def test_groups_rules(self):
        t = MovingQuantileTracker(DecaySpec(1))
        t.push(1.0, group=3)
        with pytest.raises(DomainError):
            t.push(2.0, group=2)
        with pytest.raises(DomainError):
            t.push(2.0)

    def test_group_eviction(self):
        t = MovingQuantileTracker(DecaySpec(1, 0.01))
        t.extend(np.arange(100.0), groups=np.arange(100) // 10)
        assert set(t.snapshot().values // 10) <= set(range(9 - math.floor(t.decay.max_age), 10))

    def test_deterministic(self):
        x = np.random.default_rng(5).normal(size=500)
        a = [MovingQuantileTracker(DecaySpec(6)).extend(x[:k]).quantile(0.9) for k in (100, 500)]
        b = [MovingQuantileTracker(DecaySpec(6)).extend(x[:k]).quantile(0.9) for k in (100, 500)]
        assert a == b
