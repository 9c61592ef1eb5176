from collections import OrderedDict

import numpy as np
import pytest

from cdmlstm.abstract.errors import NonFiniteError
from cdmlstm.models import StackedLSTM, init_params, param_count
from cdmlstm.models import weight_shapes


@pytest.fixture
def model():
    return init_params(input_dim=5, hidden=8, num_layers=2, seed=0)


@pytest.fixture
def inputs():
    return np.random.default_rng(1).normal(size=(3, 4, 5))


def test_default_architecture_parameter_count():
    assert param_count(52, 256, 2) == 857140


def test_initialized_default_model_parameter_count():
    model = init_params()
    assert model.count_params() == 857140
    assert model.num_params == 857140


def test_parameter_count_of_a_single_layer():
    # 4H(D + H) + 8H weights and biases plus the D x H head and D biases
    assert param_count(3, 2, 1) == 4 * 2 * (3 + 2) + 8 * 2 + 3 * 2 + 3


def test_invalid_dimensions_raise():
    with pytest.raises(ValueError):
        param_count(52, 0, 2)
    with pytest.raises(ValueError):
        StackedLSTM(5, 8, 2, dropout_rate=1.0)


def test_weight_order():
    names = list(weight_shapes(5, 8, 2, 5).keys())
    assert names == ['lstm_1/W_ih', 'lstm_1/W_hh', 'lstm_1/b_ih',
                     'lstm_1/b_hh', 'lstm_2/W_ih', 'lstm_2/W_hh',
                     'lstm_2/b_ih', 'lstm_2/b_hh', 'head/W', 'head/b']


def test_initialization_is_bounded_and_seeded(model):
    bound = 1.0 / np.sqrt(8)
    for tensor in model.weights.values():
        assert np.all(np.abs(tensor) <= bound)
    same_model = init_params(input_dim=5, hidden=8, num_layers=2, seed=0)
    for name, tensor in model.weights.items():
        assert np.array_equal(tensor, same_model.weights[name])


def test_weights_are_validated(model):
    weights = OrderedDict(model.weights)
    weights['head/b'] = np.zeros(4)
    with pytest.raises(ValueError):
        model.weights = weights
    del weights['head/b']
    with pytest.raises(ValueError):
        model.weights = weights


def test_forward_shape(model, inputs):
    predictions, cache = model.forward(inputs)
    assert predictions.shape == (3, 4, 5)
    assert cache.top_hidden.shape == (3, 4, 8)


def test_forward_rejects_wrong_width(model):
    with pytest.raises(ValueError):
        model.forward(np.zeros((1, 2, 4)))


def test_forward_detects_non_finite_values(model, inputs):
    inputs[1, 2, 3] = np.nan
    with pytest.raises(NonFiniteError) as error:
        model.forward(inputs)
    assert 'layer 1, step 3' in str(error.value)


def test_predictions_do_not_depend_on_later_steps(model, inputs):
    full = model.predict(inputs)
    prefix = model.predict(inputs[:, :2])
    assert np.allclose(full[:, :2], prefix)


def test_predictions_do_not_depend_on_padding_layout(model, inputs):
    alone = model.predict(inputs[:1, :2])
    padded = inputs[:2].copy()
    padded[0, 2:] = 0.0
    batched = model.predict(padded)
    assert np.allclose(batched[0, :2], alone[0])


def test_keep_rate_of_dropout_masks():
    model = StackedLSTM(10, 10, 2, dropout_rate=0.2)
    masks = model.sample_dropout_masks(10000, 0)
    keep = masks['lstm_1'] > 0.0
    assert keep.size == 100000
    assert abs(keep.mean() - 0.8) < 0.01
    assert np.allclose(np.unique(masks['head']), [0.0, 1.25])


def test_disabled_dropout_sites_are_ones():
    model = StackedLSTM(5, 8, 2, dropout_rate=0.5, dropout_sites=['head'])
    masks = model.sample_dropout_masks(4, 0)
    assert np.all(masks['lstm_1'] == 1.0)
    assert np.all(masks['lstm_2'] == 1.0)
    assert sorted(masks.keys()) == ['head', 'lstm_1', 'lstm_2']


def test_disabled_dropout_sites_leave_predictions_unchanged():
    model = init_params(5, 8, 2, seed=0, dropout_rate=0.5,
                        dropout_sites=['head'])
    inputs = np.random.default_rng(1).normal(size=(4, 3, 5))
    masks = model.sample_dropout_masks(4, 0)
    masks['head'] = np.ones_like(masks['head'])
    assert np.allclose(model.predict(inputs, masks), model.predict(inputs))


def test_unknown_dropout_site_raises():
    with pytest.raises(ValueError):
        StackedLSTM(5, 8, 2, dropout_sites=['lstm_3'])


def test_masks_change_predictions(model, inputs):
    masks = model.sample_dropout_masks(3, 0)
    assert not np.allclose(model.predict(inputs, masks),
                           model.predict(inputs))


def test_masks_are_seeded(model):
    masks_A = model.sample_dropout_masks(3, [0, 1])
    masks_B = model.sample_dropout_masks(3, [0, 1])
    for site in model.sites:
        assert np.array_equal(masks_A[site], masks_B[site])


def test_backward_returns_congruent_gradients(model, inputs):
    predictions, cache = model.forward(inputs)
    gradients = model.backward(cache, np.ones_like(predictions))
    assert list(gradients.keys()) == list(model.weights.keys())
    for name, gradient in gradients.items():
        assert gradient.shape == model.weights[name].shape


def test_backward_ignores_zero_gradient_steps(model, inputs):
    predictions, cache = model.forward(inputs)
    d_predictions = np.zeros_like(predictions)
    gradients = model.backward(cache, d_predictions)
    for gradient in gradients.values():
        assert np.all(gradient == 0.0)


def test_copy_is_independent(model):
    copied = model.copy()
    copied.weights['head/b'][0] = 100.0
    assert model.weights['head/b'][0] != 100.0
    assert copied.config == model.config


def test_storage_precision_rounds_through_float32(model):
    stored = model.to_storage_precision()
    for name, tensor in model.weights.items():
        expected = tensor.astype(np.float32).astype(np.float64)
        assert np.array_equal(stored.weights[name], expected)
