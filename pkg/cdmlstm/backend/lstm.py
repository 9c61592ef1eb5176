import numpy as np

GATE_ORDER = 'ifgo'


class LSTMLayerParams(object):
    """Weights of one LSTM layer with gate blocks ordered ``[i, f, g, o]``.

    # Properties
        W_ih: Numpy array of shape ``(4 * hidden, input_dim)``.
        W_hh: Numpy array of shape ``(4 * hidden, hidden)``.
        b_ih: Numpy array of shape ``(4 * hidden)``.
        b_hh: Numpy array of shape ``(4 * hidden)``.
    """
    def __init__(self, W_ih, W_hh, b_ih, b_hh):
        hidden = W_hh.shape[1]
        if W_hh.shape != (4 * hidden, hidden):
            raise ValueError('Invalid recurrent weight shape', W_hh.shape)
        if W_ih.shape[0] != 4 * hidden:
            raise ValueError('Invalid input weight shape', W_ih.shape)
        if b_ih.shape != (4 * hidden,) or b_hh.shape != (4 * hidden,):
            raise ValueError('Invalid bias shapes', b_ih.shape, b_hh.shape)
        self.W_ih, self.W_hh = W_ih, W_hh
        self.b_ih, self.b_hh = b_ih, b_hh

    @property
    def hidden(self):
        return self.W_hh.shape[1]

    @property
    def input_dim(self):
        return self.W_ih.shape[1]


def sigmoid(x):
    # tanh form does not overflow for large negative inputs
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def split_gates(preactivations):
    """Splits ``(..., 4 * hidden)`` into the four gate blocks.
    """
    return np.split(preactivations, 4, axis=-1)


def lstm_cell_forward(x, h, c, params):
    """Advances one LSTM layer by one time step.

    # Arguments
        x: Numpy array of shape ``(batch_size, input_dim)``.
        h: Numpy array of shape ``(batch_size, hidden)``.
        c: Numpy array of shape ``(batch_size, hidden)``.
        params: ``LSTMLayerParams``.

    # Returns
        Next hidden state, next cell state and a cache tuple for
        ``lstm_cell_backward``.
    """
    if x.shape[-1] != params.input_dim:
        raise ValueError('Input has {} features, layer expects {}'.format(
            x.shape[-1], params.input_dim))
    if h.shape[-1] != params.hidden or c.shape[-1] != params.hidden:
        raise ValueError('State size does not match hidden size',
                         h.shape, c.shape)
    preactivations = (np.dot(x, params.W_ih.T) + params.b_ih +
                      np.dot(h, params.W_hh.T) + params.b_hh)
    a_i, a_f, a_g, a_o = split_gates(preactivations)
    i, f, g, o = sigmoid(a_i), sigmoid(a_f), np.tanh(a_g), sigmoid(a_o)
    c_next = f * c + i * g
    tanh_c = np.tanh(c_next)
    h_next = o * tanh_c
    cache = (x, h, c, i, f, g, o, tanh_c)
    return h_next, c_next, cache


def lstm_cell_backward(dh, dc, cache, params):
    """Backpropagates one LSTM step.

    # Arguments
        dh: Numpy array. Gradient w.r.t. the step's hidden output.
        dc: Numpy array. Gradient w.r.t. the step's cell output coming
            from the following step.
        cache: Tuple returned by ``lstm_cell_forward``.
        params: ``LSTMLayerParams``.

    # Returns
        Gradients w.r.t. the input, the previous hidden state, the previous
        cell state and the gate pre-activations ``(batch_size, 4 * hidden)``.
    """
    x, h, c, i, f, g, o, tanh_c = cache
    dc = dc + dh * o * (1.0 - tanh_c ** 2)
    da_i = dc * g * i * (1.0 - i)
    da_f = dc * c * f * (1.0 - f)
    da_g = dc * i * (1.0 - g ** 2)
    da_o = dh * tanh_c * o * (1.0 - o)
    d_preactivations = np.concatenate([da_i, da_f, da_g, da_o], axis=-1)
    dx = np.dot(d_preactivations, params.W_ih)
    dh_previous = np.dot(d_preactivations, params.W_hh)
    dc_previous = dc * f
    return dx, dh_previous, dc_previous, d_preactivations
