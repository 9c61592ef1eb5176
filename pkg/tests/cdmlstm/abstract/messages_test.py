import numpy as np
import pytest

from cdmlstm.abstract.messages import CdmRecord, Event, NormStats
from cdmlstm.abstract.messages import PredictionDistribution, RolloutResult
from cdmlstm.abstract.messages import TCA_REACHED, MAX_STEPS


@pytest.fixture
def stats():
    return NormStats([1.0, 10.0, 0.0], [2.0, 5.0, 1.0], [True, True, False])


def test_record_rejects_non_finite_values():
    with pytest.raises(ValueError):
        CdmRecord('1', [1.0, np.nan])


def test_record_time_to_tca():
    record = CdmRecord('1', [3.0, 2.5], time_arg=1)
    assert record.time_to_tca == 2.5


def test_event_rejects_foreign_cdms():
    with pytest.raises(ValueError):
        Event('1', [CdmRecord('2', [1.0])])


def test_event_values_and_times():
    event = Event.from_values('7', [[3.0, 1.0], [2.0, 1.5]])
    assert len(event) == 2
    assert np.allclose(event.values, [[3.0, 1.0], [2.0, 1.5]])
    assert np.allclose(event.times_to_tca, [3.0, 2.0])


def test_norm_stats_are_read_only(stats):
    with pytest.raises(ValueError):
        stats.mean[0] = 3.0


def test_norm_stats_reject_zero_std():
    with pytest.raises(ValueError):
        NormStats([0.0], [0.0], [True])


def test_norm_stats_round_trip(stats):
    assert NormStats.from_dict(stats.to_dict()) == stats


def test_identical_samples_have_zero_std(stats):
    sample = np.array([0.1, -0.7, 3.0])
    distribution = PredictionDistribution(np.tile(sample, (5, 1)), stats)
    assert np.all(distribution.std == 0.0)
    assert np.array_equal(distribution.mean, sample)


def test_symmetric_samples_have_zero_mean(stats):
    samples = np.array([[-0.3, -1.2, -2.0], [0.3, 1.2, 2.0]])
    distribution = PredictionDistribution(samples, stats)
    assert np.all(distribution.mean == 0.0)


def test_physical_statistics(stats):
    samples = np.array([[0.0, 1.0, 4.0], [2.0, 1.0, 6.0]])
    distribution = PredictionDistribution(samples, stats)
    assert np.allclose(distribution.physical_mean, [3.0, 15.0, 5.0])
    assert np.allclose(distribution.physical_std, [2.0, 0.0, 1.0])


def test_distribution_needs_one_sample(stats):
    with pytest.raises(ValueError):
        PredictionDistribution(np.zeros((0, 3)), stats)


@pytest.fixture
def result(stats):
    prefix = np.zeros((2, 3))
    trajectories = [np.ones((3, 3)), 2.0 * np.ones((1, 3))]
    return RolloutResult(prefix, trajectories, [TCA_REACHED, MAX_STEPS],
                         stats)


def test_rollout_attrition(result):
    assert result.num_steps == 3
    assert result.num_alive == [2, 1, 1]
    assert result.termination_reason == MAX_STEPS
    assert result.step_distribution(0).num_samples == 2
    assert np.allclose(result.step_distribution(0).mean, 1.5)
    assert len(result.distributions) == 3


def test_rollout_file_round_trip(result, tmp_path):
    filepath = str(tmp_path / 'rollout.json')
    result.save(filepath, ['a', 'b', 'c'])
    loaded = RolloutResult.load(filepath)
    assert loaded.feature_names == ['a', 'b', 'c']
    assert loaded.reasons == result.reasons
    assert loaded.stats == result.stats
    for trajectory, loaded_trajectory in zip(
            result.trajectories, loaded.trajectories):
        assert np.array_equal(trajectory, loaded_trajectory)
