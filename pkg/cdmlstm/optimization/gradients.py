import logging
from collections import OrderedDict

import numpy as np

from ..backend.sequence import pad_pairs
from ..abstract.messages import SequencePair
from ..models.lstm_net import init_params
from .losses.mse import mse_loss

LOGGER = logging.getLogger(__name__)


def relative_error(analytic, numeric, floor=1e-6):
    """Elementwise ``|a - n| / max(|a|, |n|, floor)``.
    """
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return np.abs(analytic - numeric) / scale


def batch_loss(model, batch, masks=None):
    predictions = model.forward(batch.inputs, masks)[0]
    return mse_loss(predictions, batch.targets, batch.mask)[0]


def numerical_gradients(model, batch, masks=None, epsilon=1e-5):
    """Central finite differences of the masked MSE w.r.t. every weight.

    # Returns
        ``OrderedDict`` congruent to ``model.weights``.
    """
    weights = model.weights
    gradients = OrderedDict()
    for name, tensor in weights.items():
        gradient = np.zeros_like(tensor)
        for index in np.ndindex(tensor.shape):
            original = tensor[index]
            tensor[index] = original + epsilon
            loss_plus = batch_loss(model, batch, masks)
            tensor[index] = original - epsilon
            loss_minus = batch_loss(model, batch, masks)
            tensor[index] = original
            gradient[index] = (loss_plus - loss_minus) / (2.0 * epsilon)
        gradients[name] = gradient
    return gradients


def _random_batch(random, input_dim, num_steps, batch_size):
    pairs = []
    for sequence_arg in range(batch_size):
        length = max(num_steps - sequence_arg, 1)
        values = random.normal(size=(length + 1, input_dim))
        pairs.append(SequencePair(values[:-1], values[1:],
                                  'sequence_{}'.format(sequence_arg)))
    return pad_pairs(pairs)


class GradientCheck(object):
    """Outcome of ``check_gradients``.

    # Properties
        errors: ``OrderedDict`` from tensor name to its maximum relative
            error.
        max_error: Float.
        passed: Boolean.
    """
    def __init__(self, errors, tolerance):
        self.errors = errors
        self.tolerance = tolerance

    @property
    def max_error(self):
        return max(self.errors.values())

    @property
    def worst_tensor(self):
        return max(self.errors, key=self.errors.get)

    @property
    def passed(self):
        return self.max_error < self.tolerance

    def __repr__(self):
        status = 'PASS' if self.passed else 'FAIL'
        return '{} max relative error {:.3e} ({})'.format(
            status, self.max_error, self.worst_tensor)


def check_gradients(seed=0, input_dim=5, hidden=8, num_layers=2,
                    num_steps=4, batch_size=2, dropout_rate=0.2,
                    epsilon=1e-5, tolerance=1e-4, corrupt=False):
    """Compares BPTT gradients with central finite differences.

    A small random network and padded batch are built from ``seed``; the
    sequences have lengths ``num_steps, num_steps - 1, ...`` so padding
    is exercised, and fixed dropout masks are used on both sides.

    # Arguments
        seed: Int.
        input_dim: Int.
        hidden: Int.
        num_layers: Int.
        num_steps: Int.
        batch_size: Int.
        dropout_rate: Float.
        epsilon: Float. Finite-difference step.
        tolerance: Float. Maximum accepted relative error.
        corrupt: Boolean. Scales one analytic gradient by ``1.1``; the
            check must then fail.

    # Returns
        ``GradientCheck``.
    """
    random = np.random.default_rng(seed)
    model = init_params(input_dim, hidden, num_layers, seed,
                        dropout_rate=dropout_rate)
    batch = _random_batch(random, input_dim, num_steps, batch_size)
    masks = None
    if dropout_rate > 0.0:
        masks = model.sample_dropout_masks(batch_size, [seed, 1])
    predictions, cache = model.forward(batch.inputs, masks)
    d_predictions = mse_loss(predictions, batch.targets, batch.mask)[1]
    analytic = model.backward(cache, d_predictions)
    if corrupt:
        analytic['lstm_1/W_hh'] = analytic['lstm_1/W_hh'] * 1.1
    numeric = numerical_gradients(model, batch, masks, epsilon)
    errors = OrderedDict()
    for name in analytic.keys():
        errors[name] = float(np.max(
            relative_error(analytic[name], numeric[name])))
    result = GradientCheck(errors, tolerance)
    LOGGER.info('Gradient check seed %d: %s', seed, result)
    return result
