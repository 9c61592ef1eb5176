import logging
import time

import numpy as np
import pandas as pd
from tensorflow.keras.utils import Progbar

from ..abstract.errors import NonFiniteError, TrainingDivergedError
from ..abstract.sequence import PaddedSequence
from ..backend.sequence import build_training_pair, make_batches
from ..backend.standardization import fit_normalizer, normalize_events
from ..models.lstm_net import init_params
from .losses.mse import mse_loss, masked_squared_error
from .optimizers import Adam

LOGGER = logging.getLogger(__name__)


class TrainConfig(object):
    """Hyperparameters of ``fit``.

    # Arguments
        epochs: Int. At least one.
        batch_size: Int.
        learning_rate: Float.
        beta_1: Float.
        beta_2: Float.
        epsilon: Float.
        dropout_rate: Float in ``[0, 1)``.
        hidden: Int. Units per LSTM layer.
        num_layers: Int.
        seed: Int. Keys initialization, shuffling and dropout masks.
        clip_norm: Float or ``None``. Gradient clipping is off by default.
        checkpoint_every: Int. Periodic checkpoint cadence in epochs, zero
            for only the final checkpoint.
        heldout: Boolean. Computes the test-split loss at every epoch.
        verbose: Int. If positive a progress bar is displayed.
    """
    def __init__(self, epochs=500, batch_size=128, learning_rate=1e-4,
                 beta_1=0.9, beta_2=0.999, epsilon=1e-8, dropout_rate=0.2,
                 hidden=256, num_layers=2, seed=0, clip_norm=None,
                 checkpoint_every=0, heldout=True, verbose=0):
        if epochs < 1:
            raise ValueError('``epochs`` must be at least 1', epochs)
        if batch_size < 1:
            raise ValueError('``batch_size`` must be at least 1', batch_size)
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.beta_1, self.beta_2, self.epsilon = beta_1, beta_2, epsilon
        self.dropout_rate = dropout_rate
        self.hidden, self.num_layers = hidden, num_layers
        self.seed = seed
        self.clip_norm = clip_norm
        self.checkpoint_every = checkpoint_every
        self.heldout = heldout
        self.verbose = verbose

    def to_dict(self):
        return dict(self.__dict__)


class TrainHistory(object):
    """Per-epoch training record.

    # Properties
        epochs: List of Ints starting at one.
        loss: List of floats. Training loss over every valid cell.
        heldout_loss: List of floats or ``None`` entries.
        seconds: List of floats. Wall-clock time of every epoch.
    """
    COLUMNS = ['epoch', 'loss', 'heldout_loss', 'seconds']

    def __init__(self):
        self.epochs, self.loss = [], []
        self.heldout_loss, self.seconds = [], []

    def append(self, epoch, loss, heldout_loss, seconds):
        self.epochs.append(epoch)
        self.loss.append(loss)
        self.heldout_loss.append(heldout_loss)
        self.seconds.append(seconds)

    def __len__(self):
        return len(self.epochs)

    def to_frame(self):
        return pd.DataFrame({'epoch': self.epochs, 'loss': self.loss,
                             'heldout_loss': self.heldout_loss,
                             'seconds': self.seconds}, columns=self.COLUMNS)

    def save(self, filepath):
        self.to_frame().to_csv(filepath, sep='\t', index=False,
                               float_format='%.10g', na_rep='nan')

    @classmethod
    def load(cls, filepath):
        frame = pd.read_csv(filepath, sep='\t')
        history = cls()
        for row in frame.itertuples(index=False):
            heldout_loss = None
            if not np.isnan(row.heldout_loss):
                heldout_loss = float(row.heldout_loss)
            history.append(int(row.epoch), float(row.loss), heldout_loss,
                           float(row.seconds))
        return history


def build_pairs(events, stats):
    """Normalizes events and builds their shifted training pairs.
    """
    return [build_training_pair(event)
            for event in normalize_events(events, stats)]


def train_step(model, optimizer, batch, masks=None):
    """Forward, masked MSE, BPTT and one optimizer update on ``batch``.

    # Returns
        Batch loss, its sum of squared errors and its number of valid cells.
    """
    predictions, cache = model.forward(batch.inputs, masks)
    loss, d_predictions = mse_loss(predictions, batch.targets, batch.mask)
    squared_error, num_cells = masked_squared_error(
        predictions, batch.targets, batch.mask)
    gradients = model.backward(cache, d_predictions)
    optimizer.step(model, gradients)
    return loss, squared_error, num_cells


def evaluate_loss(model, sequence):
    """Dropout-free MSE over every valid cell of the batches in ``sequence``.
    """
    total_squared_error, total_cells = 0.0, 0
    for batch in sequence:
        predictions = model.predict(batch.inputs)
        squared_error, num_cells = masked_squared_error(
            predictions, batch.targets, batch.mask)
        total_squared_error = total_squared_error + squared_error
        total_cells = total_cells + num_cells
    return total_squared_error / total_cells


def _run_epoch(model, optimizer, sequence, epoch, seed):
    total_squared_error, total_cells = 0.0, 0
    for batch_arg, batch in enumerate(sequence):
        masks = None
        if model.dropout_rate > 0.0:
            masks = model.sample_dropout_masks(
                len(batch), [seed, epoch, batch_arg])
        loss, squared_error, num_cells = train_step(
            model, optimizer, batch, masks)
        LOGGER.debug('epoch %d batch %d loss %.6f', epoch + 1, batch_arg, loss)
        total_squared_error = total_squared_error + squared_error
        total_cells = total_cells + num_cells
    return total_squared_error / total_cells


def _call_callbacks(callbacks, method, *args):
    for callback in callbacks:
        getattr(callback, method)(*args)


def fit(split, schema, config, callbacks=None):
    """Fits a ``StackedLSTM`` to the shifted CDM sequences of ``split.train``.

    The normalizer is fitted on the training events only. Every epoch
    reshuffles the batches with ``seed + epoch`` and draws fresh dropout
    masks for every batch.

    # Arguments
        split: ``DatasetSplit``.
        schema: ``FeatureSchema``.
        config: ``TrainConfig``.
        callbacks: List of Keras ``Callback`` instances. They receive the
            model through ``set_model`` and ``{'stats', 'schema', 'config'}``
            through ``set_params``.

    # Returns
        ``StackedLSTM``, ``NormStats`` and ``TrainHistory``.

    # Raises
        TrainingDivergedError: if the loss stops being finite; the model it
            carries holds the weights of the last finite epoch.
    """
    if len(split.train) == 0:
        raise ValueError('Training split has no events')
    callbacks = callbacks or []
    stats = fit_normalizer(split.train, schema)
    sequence = PaddedSequence(
        build_pairs(split.train, stats), config.batch_size, config.seed)
    heldout_batches = None
    if config.heldout and len(split.test) > 0:
        heldout_batches = make_batches(
            build_pairs(split.test, stats), config.batch_size)
    model = init_params(schema.width, config.hidden, config.num_layers,
                        config.seed, dropout_rate=config.dropout_rate)
    LOGGER.info('Training %s on %d events', model, len(split.train))
    optimizer = Adam(model, config.learning_rate, config.beta_1,
                     config.beta_2, config.epsilon, config.clip_norm)
    history = TrainHistory()
    params = {'stats': stats, 'schema': schema, 'config': config,
              'history': history}
    for callback in callbacks:
        callback.set_model(model)
        callback.set_params(params)
    progress = Progbar(config.epochs) if config.verbose > 0 else None
    last_good = model.copy()
    _call_callbacks(callbacks, 'on_train_begin', {})
    for epoch in range(config.epochs):
        start = time.time()
        sequence.set_epoch(epoch)
        try:
            loss = _run_epoch(model, optimizer, sequence, epoch, config.seed)
            if not np.isfinite(loss):
                raise NonFiniteError('epoch {}'.format(epoch + 1))
        except NonFiniteError as error:
            LOGGER.warning('Divergence in epoch %d (%s); restoring epoch %d',
                           epoch + 1, error, len(history))
            model.weights = last_good.weights
            _call_callbacks(callbacks, 'on_train_end', {'diverged': True})
            raise TrainingDivergedError(epoch + 1, model, len(history))
        heldout_loss = None
        if heldout_batches is not None:
            heldout_loss = evaluate_loss(model, heldout_batches)
        seconds = time.time() - start
        history.append(epoch + 1, loss, heldout_loss, seconds)
        last_good = model.copy()
        LOGGER.info('epoch %d loss %.6f heldout %s (%.2fs)', epoch + 1, loss,
                    heldout_loss, seconds)
        if progress is not None:
            progress.update(epoch + 1, values=[('loss', loss)])
        logs = {'loss': loss, 'heldout_loss': heldout_loss}
        _call_callbacks(callbacks, 'on_epoch_end', epoch, logs)
    _call_callbacks(callbacks, 'on_train_end', {'diverged': False})
    return model, stats, history
