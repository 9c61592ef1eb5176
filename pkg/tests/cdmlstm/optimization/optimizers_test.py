from collections import OrderedDict

import numpy as np
import pytest

from cdmlstm.abstract.errors import NonFiniteError
from cdmlstm.models import init_params
from cdmlstm.optimization import Adam, AdamState, adam_step
from cdmlstm.optimization.optimizers import clip_by_global_norm


@pytest.fixture
def weights():
    return OrderedDict([('W', np.array([[0.5, -0.5], [1.0, 2.0]])),
                        ('b', np.array([0.0, 0.1]))])


@pytest.fixture
def state(weights):
    return AdamState(weights)


def test_first_step_moves_by_the_learning_rate(weights, state):
    gradients = OrderedDict((name, np.ones_like(tensor))
                            for name, tensor in weights.items())
    updated, state = adam_step(weights, gradients, state)
    for name, tensor in weights.items():
        assert np.allclose(updated[name] - tensor, -1e-4 / (1.0 + 1e-8),
                           rtol=0.0, atol=1e-14)
    assert state.t == 1


def test_step_direction_follows_gradient_sign(weights, state):
    gradients = OrderedDict([('W', np.array([[2.0, -3.0], [0.5, -0.1]])),
                             ('b', np.array([-1.0, 4.0]))])
    updated = adam_step(weights, gradients, state)[0]
    for name in weights.keys():
        assert np.all(np.sign(weights[name] - updated[name]) ==
                      np.sign(gradients[name]))


def test_zero_gradient_keeps_weights(weights, state):
    gradients = OrderedDict((name, np.zeros_like(tensor))
                            for name, tensor in weights.items())
    updated = adam_step(weights, gradients, state)[0]
    for name, tensor in weights.items():
        assert np.array_equal(updated[name], tensor)


def test_moments_are_bias_corrected(weights, state):
    gradients = OrderedDict((name, np.full_like(tensor, 0.3))
                            for name, tensor in weights.items())
    for step_arg in range(5):
        weights, state = adam_step(weights, gradients, state)
    assert np.allclose(state.m['b'], 0.3 * (1.0 - 0.9 ** 5))
    assert np.allclose(state.v['b'], 0.09 * (1.0 - 0.999 ** 5))


@pytest.mark.parametrize('value', [np.nan, np.inf])
def test_non_finite_gradient_names_the_tensor(weights, state, value):
    gradients = OrderedDict((name, np.zeros_like(tensor))
                            for name, tensor in weights.items())
    gradients['b'][1] = value
    with pytest.raises(NonFiniteError) as error:
        adam_step(weights, gradients, state)
    assert error.value.location == 'b'
    assert state.t == 0


def test_clip_by_global_norm():
    gradients = OrderedDict([('a', np.array([3.0])), ('b', np.array([4.0]))])
    clipped = clip_by_global_norm(gradients, 1.0)
    assert np.allclose(clipped['a'], 0.6)
    assert np.allclose(clipped['b'], 0.8)
    assert clip_by_global_norm(gradients, 10.0) is gradients


def test_optimizer_updates_model_weights():
    model = init_params(input_dim=3, hidden=4, num_layers=1, seed=0)
    before = model.copy()
    optimizer = Adam(model, learning_rate=1e-2)
    gradients = OrderedDict((name, np.ones_like(tensor))
                            for name, tensor in model.weights.items())
    optimizer.step(model, gradients)
    for name, tensor in model.weights.items():
        assert np.allclose(before.weights[name] - tensor, 1e-2)
