from collections import OrderedDict

import numpy as np

from ..abstract.errors import NonFiniteError


class AdamState(object):
    """Moments, step counter and hyperparameters of Adam.

    # Arguments
        weights: Dictionary of numpy arrays used to shape the moments.
        learning_rate: Float.
        beta_1: Float. Decay of the first moment.
        beta_2: Float. Decay of the second moment.
        epsilon: Float.
    """
    def __init__(self, weights, learning_rate=1e-4, beta_1=0.9,
                 beta_2=0.999, epsilon=1e-8):
        self.m = OrderedDict(
            (name, np.zeros_like(tensor)) for name, tensor in weights.items())
        self.v = OrderedDict(
            (name, np.zeros_like(tensor)) for name, tensor in weights.items())
        self.t = 0
        self.learning_rate = learning_rate
        self.beta_1, self.beta_2 = beta_1, beta_2
        self.epsilon = epsilon


def adam_step(weights, gradients, state):
    """Bias-corrected Adam update.

    # Arguments
        weights: Dictionary of numpy arrays.
        gradients: Dictionary of numpy arrays congruent to ``weights``.
        state: ``AdamState``. Updated in place.

    # Returns
        New ``OrderedDict`` of weights and ``state``.

    # Raises
        NonFiniteError: naming the first non-finite gradient tensor.
    """
    for name, gradient in gradients.items():
        if gradient.shape != weights[name].shape:
            raise ValueError('Gradient shape mismatch for', name)
        if not np.all(np.isfinite(gradient)):
            raise NonFiniteError(name, 'Non-finite gradient in')
    state.t = state.t + 1
    correction_1 = 1.0 - state.beta_1 ** state.t
    correction_2 = 1.0 - state.beta_2 ** state.t
    updated = OrderedDict()
    for name, tensor in weights.items():
        gradient = gradients[name]
        state.m[name] = state.beta_1 * state.m[name] + (
            1.0 - state.beta_1) * gradient
        state.v[name] = state.beta_2 * state.v[name] + (
            1.0 - state.beta_2) * gradient ** 2
        m_hat = state.m[name] / correction_1
        v_hat = state.v[name] / correction_2
        step = state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)
        updated[name] = tensor - step
    return updated, state


def clip_by_global_norm(gradients, clip_norm):
    """Rescales gradients so their joint L2 norm is at most ``clip_norm``.
    """
    norm = np.sqrt(sum([np.sum(gradient ** 2)
                        for gradient in gradients.values()]))
    if norm <= clip_norm:
        return gradients
    scale = clip_norm / norm
    return OrderedDict(
        (name, gradient * scale) for name, gradient in gradients.items())


class Adam(object):
    """Adam optimizer updating the weights of a ``StackedLSTM``.

    # Arguments
        model: ``StackedLSTM``.
        learning_rate: Float.
        beta_1: Float.
        beta_2: Float.
        epsilon: Float.
        clip_norm: Float or ``None``. Global gradient-norm threshold.
    """
    def __init__(self, model, learning_rate=1e-4, beta_1=0.9, beta_2=0.999,
                 epsilon=1e-8, clip_norm=None):
        self.state = AdamState(
            model.weights, learning_rate, beta_1, beta_2, epsilon)
        self.clip_norm = clip_norm

    def step(self, model, gradients):
        if self.clip_norm is not None:
            gradients = clip_by_global_norm(gradients, self.clip_norm)
        model.weights, self.state = adam_step(
            model.weights, gradients, self.state)
        return model
