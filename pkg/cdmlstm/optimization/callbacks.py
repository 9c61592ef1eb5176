import os
import logging

from tensorflow.keras.callbacks import Callback

from ..abstract.errors import CheckpointError
from ..backend.serialization import save_checkpoint
from ..evaluation import evaluate_model

LOGGER = logging.getLogger(__name__)


class SaveCheckpoint(Callback):
    """Writes periodic and final checkpoints during ``fit``.

    Periodic files are named ``<stem>_epoch_<epoch>.ckpt`` next to
    ``filepath``; the final checkpoint is written to ``filepath``.

    # Arguments
        filepath: String. Path of the final checkpoint.
        period: Int. Epoch cadence of periodic checkpoints, zero to disable.
        seed: Int. Training seed stored in the header.
        split: Dictionary with the ``test_fraction`` and ``min_length`` of
            the training split, stored in the header.

    # Properties
        saved_epoch: Int or ``None``. Epoch of the last final checkpoint
            written.
    """
    def __init__(self, filepath, period=0, seed=0, split=None):
        super(SaveCheckpoint, self).__init__()
        self.filepath = filepath
        self.period = period
        self.seed = seed
        self.split = split
        self.epoch = 0
        self.saved_epoch = None

    def _save(self, filepath):
        save_checkpoint(filepath, self.model, self.params['stats'],
                        self.params['schema'], self.seed, self.epoch,
                        self.split)

    def periodic_path(self, epoch):
        stem = os.path.splitext(self.filepath)[0]
        return '{}_epoch_{:03d}.ckpt'.format(stem, epoch)

    def on_epoch_end(self, epoch, logs=None):
        self.epoch = epoch + 1
        if self.period > 0 and (self.epoch % self.period) == 0:
            self._save(self.periodic_path(self.epoch))

    def on_train_end(self, logs=None):
        # after a divergence the model holds the last finite weights
        history = self.params['history']
        self.epoch = len(history)
        try:
            self._save(self.filepath)
        except CheckpointError as error:
            if not (logs or {}).get('diverged', False):
                raise
            LOGGER.error('No checkpoint written after divergence: %s', error)
            return
        self.saved_epoch = self.epoch


class EvaluateMSE(Callback):
    """Evaluates the MSE of the model on held-out events during training.

    # Arguments
        events: List of ``Event`` in physical units.
        period: Int. Indicates how often the evaluation is performed.
        save_path: String. Directory of ``MSE_Evaluation_Log.txt``.
        num_samples: Int. Monte Carlo samples per prediction.
        seed: Int.
    """
    def __init__(self, events, period, save_path, num_samples=1, seed=0):
        super(EvaluateMSE, self).__init__()
        self.events = events
        self.period = period
        self.save_path = save_path
        self.num_samples = num_samples
        self.seed = seed

    def on_epoch_end(self, epoch, logs=None):
        if (epoch + 1) % self.period != 0:
            return
        report = evaluate_model(
            self.model, self.params['stats'], self.events,
            self.num_samples, self.seed,
            feature_names=self.params['schema'].names)
        result_str = 'MSE: {:.4f} (baseline {:.4f})'.format(
            report.mse, report.baseline_mse)
        LOGGER.info('Epoch %d %s', epoch + 1, result_str)
        filename = os.path.join(self.save_path, 'MSE_Evaluation_Log.txt')
        with open(filename, 'a') as eval_log_file:
            eval_log_file.write('Epoch: {}\n{}\n'.format(
                str(epoch + 1), result_str))
