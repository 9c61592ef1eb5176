from collections import OrderedDict

import numpy as np

from ..abstract.errors import NonFiniteError
from ..abstract.messages import Batch
from ..backend.lstm import LSTMLayerParams, GATE_ORDER
from ..backend.lstm import lstm_cell_forward, lstm_cell_backward


def param_count(input_dim, hidden, num_layers, output_dim=None):
    """Number of learnable scalars of a stacked LSTM with a linear head.

    Every layer has input and recurrent weights plus two bias vectors.

    # Arguments
        input_dim: Int. Width of the CDM feature vector.
        hidden: Int. Units per LSTM layer.
        num_layers: Int.
        output_dim: Int or ``None``. Defaults to ``input_dim``.

    # Returns
        Int.
    """
    if output_dim is None:
        output_dim = input_dim
    for name, value in [('input_dim', input_dim), ('hidden', hidden),
                        ('num_layers', num_layers),
                        ('output_dim', output_dim)]:
        if value < 1:
            raise ValueError('``{}`` must be at least 1'.format(name), value)
    count = 0
    layer_input_dim = input_dim
    for layer_arg in range(num_layers):
        count = count + (4 * hidden * layer_input_dim +
                         4 * hidden * hidden + 8 * hidden)
        layer_input_dim = hidden
    return count + output_dim * hidden + output_dim


def layer_name(layer_arg):
    return 'lstm_{}'.format(layer_arg + 1)


def weight_shapes(input_dim, hidden, num_layers, output_dim):
    """Ordered mapping from tensor name to shape; the checkpoint order.
    """
    shapes = OrderedDict()
    layer_input_dim = input_dim
    for layer_arg in range(num_layers):
        name = layer_name(layer_arg)
        shapes[name + '/W_ih'] = (4 * hidden, layer_input_dim)
        shapes[name + '/W_hh'] = (4 * hidden, hidden)
        shapes[name + '/b_ih'] = (4 * hidden,)
        shapes[name + '/b_hh'] = (4 * hidden,)
        layer_input_dim = hidden
    shapes['head/W'] = (output_dim, hidden)
    shapes['head/b'] = (output_dim,)
    return shapes


class ForwardCache(object):
    """Intermediate values of ``StackedLSTM.forward`` needed by BPTT.

    # Properties
        layer_inputs: List of numpy arrays ``(batch, time, layer_input)``
            after dropout.
        cell_caches: List (per layer) of lists (per step) of cell caches.
        top_hidden: Numpy array ``(batch, time, hidden)`` before the ReLU.
        head_inputs: Numpy array ``(batch, time, hidden)`` after ReLU and
            dropout.
        masks: Dictionary of dropout masks or ``None``.
    """
    def __init__(self, layer_inputs, cell_caches, top_hidden, head_inputs,
                 masks):
        self.layer_inputs = layer_inputs
        self.cell_caches = cell_caches
        self.top_hidden = top_hidden
        self.head_inputs = head_inputs
        self.masks = masks


class StackedLSTM(object):
    """Stacked LSTM whose last hidden state goes through a ReLU and a linear
    head predicting the next CDM.

    Dropout masks are drawn once per sequence and reused at every time step.
    Dropout sites are the inputs of every LSTM layer (``'lstm_1'``,
    ``'lstm_2'``, ...) and the input of the head (``'head'``).

    # Arguments
        input_dim: Int. CDM feature width.
        hidden: Int. Units per LSTM layer.
        num_layers: Int.
        output_dim: Int or ``None``. Defaults to ``input_dim``.
        dropout_rate: Float in ``[0, 1)``.
        dropout_sites: List of site names or ``None`` for every site.
        weights: Ordered dictionary of numpy arrays or ``None`` for zeros.

    # Properties
        weights: ``OrderedDict`` from tensor name to float64 numpy array.
        sites: List of every dropout site name.
    """
    def __init__(self, input_dim=52, hidden=256, num_layers=2,
                 output_dim=None, dropout_rate=0.2, dropout_sites=None,
                 weights=None):
        if output_dim is None:
            output_dim = input_dim
        self.num_params = param_count(
            input_dim, hidden, num_layers, output_dim)
        if not (0.0 <= dropout_rate < 1.0):
            raise ValueError('``dropout_rate`` must be in [0, 1)',
                             dropout_rate)
        self.input_dim, self.hidden = input_dim, hidden
        self.num_layers, self.output_dim = num_layers, output_dim
        self.dropout_rate = dropout_rate
        self.sites = [layer_name(arg) for arg in range(num_layers)] + ['head']
        if dropout_sites is None:
            dropout_sites = list(self.sites)
        for site in dropout_sites:
            if site not in self.sites:
                raise ValueError('Unknown dropout site', site)
        self.dropout_sites = list(dropout_sites)
        self.shapes = weight_shapes(input_dim, hidden, num_layers, output_dim)
        if weights is None:
            weights = OrderedDict(
                (name, np.zeros(shape)) for name, shape in self.shapes.items())
        self.weights = weights

    @property
    def weights(self):
        return self._weights

    @weights.setter
    def weights(self, weights):
        ordered = OrderedDict()
        for name, shape in self.shapes.items():
            if name not in weights:
                raise ValueError('Missing weight tensor', name)
            tensor = np.asarray(weights[name], dtype=np.float64)
            if tensor.shape != shape:
                raise ValueError('Invalid shape for {}: {} != {}'.format(
                    name, tensor.shape, shape))
            ordered[name] = tensor
        self._weights = ordered

    @property
    def gate_order(self):
        return GATE_ORDER

    @property
    def config(self):
        return {'input_dim': self.input_dim, 'hidden': self.hidden,
                'num_layers': self.num_layers, 'output_dim': self.output_dim,
                'dropout_rate': self.dropout_rate,
                'dropout_sites': self.dropout_sites}

    def count_params(self):
        return sum([tensor.size for tensor in self.weights.values()])

    def layer_params(self, layer_arg):
        name = layer_name(layer_arg)
        return LSTMLayerParams(
            self.weights[name + '/W_ih'], self.weights[name + '/W_hh'],
            self.weights[name + '/b_ih'], self.weights[name + '/b_hh'])

    def copy(self, weights=None):
        """Returns a model with the same configuration and copied weights.
        """
        if weights is None:
            weights = self.weights
        weights = OrderedDict(
            (name, np.array(tensor, copy=True))
            for name, tensor in weights.items())
        return StackedLSTM(weights=weights, **self.config)

    def to_storage_precision(self):
        """Returns a copy whose weights are rounded through float32.
        """
        weights = OrderedDict(
            (name, tensor.astype(np.float32).astype(np.float64))
            for name, tensor in self.weights.items())
        return self.copy(weights)

    def _site_size(self, site):
        return self.input_dim if site == 'lstm_1' else self.hidden

    def sample_dropout_masks(self, num_sequences, seed):
        """Draws one inverted-dropout keep mask per site and sequence.

        # Arguments
            num_sequences: Int.
            seed: Int, sequence of Ints, or a numpy ``Generator``.

        # Returns
            Dictionary from site name to a numpy array of shape
            ``(num_sequences, site_size)`` with values in
            ``{0, 1 / (1 - dropout_rate)}``. Disabled sites are ones.
        """
        random = np.random.default_rng(seed)
        keep_probability = 1.0 - self.dropout_rate
        masks = {}
        for site in self.sites:
            shape = (num_sequences, self._site_size(site))
            keep = random.random(shape) < keep_probability
            if site in self.dropout_sites:
                masks[site] = keep / keep_probability
            else:
                masks[site] = np.ones(shape)
        return masks

    def _run_layer(self, layer_arg, layer_input):
        params = self.layer_params(layer_arg)
        batch_size, num_steps = layer_input.shape[:2]
        h = np.zeros((batch_size, self.hidden))
        c = np.zeros((batch_size, self.hidden))
        outputs = np.zeros((batch_size, num_steps, self.hidden))
        caches = []
        for step_arg in range(num_steps):
            h, c, cache = lstm_cell_forward(
                layer_input[:, step_arg], h, c, params)
            if not (np.all(np.isfinite(h)) and np.all(np.isfinite(c))):
                raise NonFiniteError('layer {}, step {}'.format(
                    layer_arg + 1, step_arg + 1))
            outputs[:, step_arg] = h
            caches.append(cache)
        return outputs, caches

    def forward(self, inputs, masks=None):
        """Runs the network over padded sequences.

        # Arguments
            inputs: ``Batch`` or numpy array ``(batch, time, input_dim)``.
            masks: Dictionary returned by ``sample_dropout_masks`` or
                ``None`` for no dropout.

        # Returns
            Predictions ``(batch, time, output_dim)`` and a
            ``ForwardCache``.
        """
        if isinstance(inputs, Batch):
            inputs = inputs.inputs
        inputs = np.asarray(inputs, dtype=np.float64)
        if inputs.ndim != 3 or inputs.shape[2] != self.input_dim:
            raise ValueError('Expected inputs (batch, time, {}), got {}'
                             .format(self.input_dim, inputs.shape))
        layer_inputs, cell_caches = [], []
        layer_input = inputs
        for layer_arg in range(self.num_layers):
            if masks is not None:
                site_mask = masks[layer_name(layer_arg)]
                layer_input = layer_input * site_mask[:, None, :]
            layer_inputs.append(layer_input)
            layer_input, caches = self._run_layer(layer_arg, layer_input)
            cell_caches.append(caches)
        top_hidden = layer_input
        head_inputs = np.maximum(top_hidden, 0.0)
        if masks is not None:
            head_inputs = head_inputs * masks['head'][:, None, :]
        predictions = (np.dot(head_inputs, self.weights['head/W'].T) +
                       self.weights['head/b'])
        if not np.all(np.isfinite(predictions)):
            raise NonFiniteError('head')
        cache = ForwardCache(
            layer_inputs, cell_caches, top_hidden, head_inputs, masks)
        return predictions, cache

    def predict(self, inputs, masks=None):
        return self.forward(inputs, masks)[0]

    def _backward_layer(self, layer_arg, d_outputs, cache):
        params = self.layer_params(layer_arg)
        caches = cache.cell_caches[layer_arg]
        batch_size, num_steps = d_outputs.shape[:2]
        dh_next = np.zeros((batch_size, self.hidden))
        dc_next = np.zeros((batch_size, self.hidden))
        d_preactivations = np.zeros((batch_size, num_steps, 4 * self.hidden))
        d_inputs = np.zeros(cache.layer_inputs[layer_arg].shape)
        for step_arg in reversed(range(num_steps)):
            dh = d_outputs[:, step_arg] + dh_next
            d_input, dh_next, dc_next, d_step = lstm_cell_backward(
                dh, dc_next, caches[step_arg], params)
            d_preactivations[:, step_arg] = d_step
            d_inputs[:, step_arg] = d_input
        previous_hidden = np.stack(
            [step_cache[1] for step_cache in caches], axis=1)
        name = layer_name(layer_arg)
        axes = ([0, 1], [0, 1])
        gradients = OrderedDict()
        gradients[name + '/W_ih'] = np.tensordot(
            d_preactivations, cache.layer_inputs[layer_arg], axes)
        gradients[name + '/W_hh'] = np.tensordot(
            d_preactivations, previous_hidden, axes)
        gradients[name + '/b_ih'] = d_preactivations.sum(axis=(0, 1))
        gradients[name + '/b_hh'] = d_preactivations.sum(axis=(0, 1))
        return d_inputs, gradients

    def backward(self, cache, d_predictions):
        """Backpropagation through time of ``d_predictions``.

        # Arguments
            cache: ``ForwardCache`` of the matching ``forward`` call.
            d_predictions: Numpy array ``(batch, time, output_dim)``. Padded
                steps must hold zeros.

        # Returns
            ``OrderedDict`` of gradients congruent to ``weights``.
        """
        expected_shape = cache.head_inputs.shape[:2] + (self.output_dim,)
        if d_predictions.shape != expected_shape:
            raise ValueError('Gradient shape {} does not match {}'.format(
                d_predictions.shape, expected_shape))
        axes = ([0, 1], [0, 1])
        gradients = OrderedDict()
        gradients['head/W'] = np.tensordot(
            d_predictions, cache.head_inputs, axes)
        gradients['head/b'] = d_predictions.sum(axis=(0, 1))
        d_outputs = np.dot(d_predictions, self.weights['head/W'])
        if cache.masks is not None:
            d_outputs = d_outputs * cache.masks['head'][:, None, :]
        d_outputs = d_outputs * (cache.top_hidden > 0.0)
        for layer_arg in reversed(range(self.num_layers)):
            d_outputs, layer_gradients = self._backward_layer(
                layer_arg, d_outputs, cache)
            gradients.update(layer_gradients)
            if cache.masks is not None:
                site_mask = cache.masks[layer_name(layer_arg)]
                d_outputs = d_outputs * site_mask[:, None, :]
        return OrderedDict(
            (name, gradients[name]) for name in self.weights.keys())

    def __repr__(self):
        return 'StackedLSTM({}, hidden={}, layers={}, params={})'.format(
            self.input_dim, self.hidden, self.num_layers, self.num_params)


def init_params(input_dim=52, hidden=256, num_layers=2, seed=0,
                output_dim=None, dropout_rate=0.2, dropout_sites=None):
    """Builds a ``StackedLSTM`` with weights uniform in ``±1/sqrt(hidden)``.

    Tensors are drawn in checkpoint order from one generator keyed by
    ``seed``.

    # Returns
        ``StackedLSTM``.
    """
    model = StackedLSTM(input_dim, hidden, num_layers, output_dim,
                        dropout_rate, dropout_sites)
    random = np.random.default_rng(seed)
    bound = 1.0 / np.sqrt(hidden)
    model.weights = OrderedDict(
        (name, random.uniform(-bound, bound, shape))
        for name, shape in model.shapes.items())
    return model
