import numpy as np
import pytest

from cdmlstm.abstract.messages import Event, NormStats, RolloutResult
from cdmlstm.abstract.messages import PredictionDistribution
from cdmlstm.abstract.messages import TCA_REACHED, MAX_STEPS
from cdmlstm.backend.forecasting import predict_next, rollout, summarize
from cdmlstm.backend.forecasting import rollout_bands, quantile_name
from cdmlstm.backend.forecasting import map_ordered, normalize_prefix
from cdmlstm.models import init_params


class CountdownModel(object):
    """Predicts the input CDM with its time to TCA decreased by one.
    """
    dropout_rate = 0.0

    def predict(self, inputs, masks=None):
        outputs = np.array(inputs, copy=True)
        outputs[..., 0] = outputs[..., 0] - 1.0
        return outputs


def linear_quantile(values, quantile):
    values = sorted(values)
    position = quantile * (len(values) - 1)
    lower = int(np.floor(position))
    upper = min(lower + 1, len(values) - 1)
    weight = position - lower
    return values[lower] * (1.0 - weight) + values[upper] * weight


@pytest.fixture
def identity_stats():
    return NormStats(np.zeros(3), np.ones(3), [True, True, True])


@pytest.fixture
def model():
    return init_params(input_dim=3, hidden=8, num_layers=2, seed=0,
                       dropout_rate=0.2)


@pytest.fixture
def prefix():
    return np.array([[3.0, 0.5, -0.2],
                     [2.5, 0.4, -0.1],
                     [2.0, 0.2, 0.1]])


def test_deterministic_model_gives_identical_samples(identity_stats, prefix):
    model = init_params(input_dim=3, hidden=8, num_layers=2, seed=0,
                        dropout_rate=0.0)
    distribution = predict_next(prefix, model, identity_stats, 5)
    assert distribution.num_samples == 5
    assert np.all(distribution.samples == distribution.samples[0])
    assert np.all(distribution.std == 0.0)
    assert np.array_equal(distribution.mean, distribution.samples[0])


def test_dropout_spreads_samples(model, identity_stats, prefix):
    distribution = predict_next(prefix, model, identity_stats, 50)
    assert np.all(distribution.std > 0.0)


def test_single_sample_matches_one_forward_pass(
        model, identity_stats, prefix):
    distribution = predict_next(prefix, model, identity_stats, 1, seed=7)
    masks = model.sample_dropout_masks(1, [7, 0])
    expected = model.predict(prefix[None], masks)[0, -1]
    assert np.array_equal(distribution.samples[0], expected)


def test_more_samples_keep_earlier_samples(model, identity_stats, prefix):
    few = predict_next(prefix, model, identity_stats, 5, seed=3)
    many = predict_next(prefix, model, identity_stats, 10, seed=3)
    assert np.array_equal(few.samples, many.samples[:5])


def test_workers_do_not_change_samples(model, identity_stats, prefix):
    serial = predict_next(prefix, model, identity_stats, 8, seed=1)
    threaded = predict_next(prefix, model, identity_stats, 8, seed=1,
                            workers=3)
    assert np.array_equal(serial.samples, threaded.samples)


def test_prediction_accepts_events(model, identity_stats, prefix):
    event = Event.from_values('event', prefix)
    from_event = predict_next(event, model, identity_stats, 3)
    from_array = predict_next(prefix, model, identity_stats, 3)
    assert np.array_equal(from_event.samples, from_array.samples)


@pytest.mark.parametrize('num_samples', [0, -1])
def test_invalid_number_of_samples(model, identity_stats, prefix,
                                   num_samples):
    with pytest.raises(ValueError):
        predict_next(prefix, model, identity_stats, num_samples)


def test_prefix_validation(identity_stats, prefix):
    with pytest.raises(ValueError):
        normalize_prefix(prefix[:, :2], identity_stats)
    with pytest.raises(ValueError):
        normalize_prefix(np.zeros((0, 3)), identity_stats)
    with pytest.raises(ValueError):
        normalize_prefix(prefix, None)


def test_prefix_normalization_keeps_time_position():
    stats = NormStats([1.0, 0.0], [2.0, 1.0], [True, True])
    event = Event.from_values('event', [[3.0, 5.0], [5.0, 4.0]], time_arg=1)
    normalized, time_arg = normalize_prefix(event, stats)
    assert time_arg == 1
    assert np.allclose(normalized, [[1.0, 5.0], [2.0, 4.0]])


def test_rollout_stops_at_tca(identity_stats, prefix):
    result = rollout(prefix, CountdownModel(), identity_stats, 4, 30)
    assert result.termination_reason == TCA_REACHED
    for trajectory in result.trajectories:
        assert np.allclose(trajectory[:, 0], [1.0, 0.0])
    assert result.num_alive == [4, 4]


def test_rollout_is_capped_by_max_steps(identity_stats, prefix):
    prefix = prefix.copy()
    prefix[:, 0] = prefix[:, 0] + 10.0
    result = rollout(prefix, CountdownModel(), identity_stats, 3, 2)
    assert result.termination_reason == MAX_STEPS
    assert [len(trajectory) for trajectory in result.trajectories] == [2] * 3


def test_rollout_with_one_step(model, identity_stats, prefix):
    result = rollout(prefix, model, identity_stats, 5, max_steps=1)
    assert [len(trajectory) for trajectory in result.trajectories] == [1] * 5


def test_rollout_of_prefix_at_tca(model, identity_stats, prefix):
    prefix = prefix.copy()
    prefix[-1, 0] = 0.0
    result = rollout(prefix, model, identity_stats, 4)
    assert result.num_steps == 0
    assert result.reasons == [TCA_REACHED] * 4
    bands = rollout_bands(result, ['time_to_tca', 'a', 'b'])
    assert len(bands) == 0
    assert list(bands.columns) == ['step', 'feature', 'mean', 'std', 'p05',
                                   'p50', 'p95', 'n_alive']


def test_rollout_samples_are_seeded(model, identity_stats, prefix):
    result_A = rollout(prefix, model, identity_stats, 3, 3, seed=2)
    result_B = rollout(prefix, model, identity_stats, 3, 3, seed=2,
                       workers=2)
    for trajectory_A, trajectory_B in zip(result_A.trajectories,
                                          result_B.trajectories):
        assert np.array_equal(trajectory_A, trajectory_B)


@pytest.mark.parametrize('max_steps', [0, -3])
def test_invalid_max_steps(model, identity_stats, prefix, max_steps):
    with pytest.raises(ValueError):
        rollout(prefix, model, identity_stats, 2, max_steps)


@pytest.mark.parametrize('quantile, name', [
    (0.05, 'p05'), (0.5, 'p50'), (0.95, 'p95'), (0.1, 'p10')])
def test_quantile_name(quantile, name):
    assert quantile_name(quantile) == name


def test_summarize_reports_physical_statistics():
    stats = NormStats([1.0, 2.0], [2.0, 1.0], [True, False])
    samples = np.array([[0.0, 4.0], [3.0, 1.0], [1.0, 0.0],
                        [4.0, 3.0], [2.0, 2.0]])
    distribution = PredictionDistribution(samples, stats)
    table = summarize(distribution, ['miss_distance', 'category'])
    assert list(table.columns) == ['feature', 'mean', 'std', 'p05', 'p50',
                                   'p95']
    assert list(table['feature']) == ['miss_distance', 'category']
    assert np.allclose(table['mean'], [2.0 * 2.0 + 1.0, 2.0])
    assert np.allclose(table['std'], [2.0 * np.sqrt(2.0), np.sqrt(2.0)])
    for quantile, column in zip([0.05, 0.5, 0.95], ['p05', 'p50', 'p95']):
        expected = [linear_quantile(samples[:, 0], quantile) * 2.0 + 1.0,
                    linear_quantile(samples[:, 1], quantile)]
        assert np.allclose(table[column], expected)


def test_summarize_rejects_wrong_names(identity_stats):
    distribution = PredictionDistribution(np.zeros((2, 3)), identity_stats)
    with pytest.raises(ValueError):
        summarize(distribution, ['a', 'b'])


def test_rollout_bands_count_alive_trajectories(identity_stats):
    trajectories = [np.ones((2, 3)), np.zeros((1, 3))]
    result = RolloutResult(np.zeros((1, 3)), trajectories,
                           [TCA_REACHED, TCA_REACHED], identity_stats)
    bands = rollout_bands(result, ['a', 'b', 'c'])
    assert list(bands['step']) == [1, 1, 1, 2, 2, 2]
    assert list(bands['n_alive']) == [2, 2, 2, 1, 1, 1]
    assert np.allclose(bands['mean'], [0.5, 0.5, 0.5, 1.0, 1.0, 1.0])


def test_map_ordered_keeps_order():
    values = map_ordered(lambda arg: arg ** 2, range(20), workers=4)
    assert values == [arg ** 2 for arg in range(20)]
