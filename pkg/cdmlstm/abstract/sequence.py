from tensorflow.keras.utils import Sequence
import numpy as np

from ..backend.sequence import shuffle_order, take_batch


class PaddedSequence(Sequence):
    """Serves right-padded ``Batch`` objects built from sequence pairs.

    The order of the pairs is a permutation keyed by ``shuffle_seed`` and
    the current epoch, so every epoch is reproducible.

    # Arguments
        pairs: List of ``SequencePair``.
        batch_size: Int.
        shuffle_seed: Int or ``None``. If ``None`` pairs keep their order.
    """
    def __init__(self, pairs, batch_size, shuffle_seed=None):
        super(PaddedSequence, self).__init__()
        if batch_size < 1:
            raise ValueError('``batch_size`` must be at least 1', batch_size)
        self.pairs = pairs
        self.batch_size = batch_size
        self.shuffle_seed = shuffle_seed
        self.set_epoch(0)

    def set_epoch(self, epoch):
        """Reorders the pairs for ``epoch``.
        """
        self.epoch = epoch
        shuffle_seed = self.shuffle_seed
        if shuffle_seed is not None:
            shuffle_seed = shuffle_seed + epoch
        self.order = shuffle_order(len(self.pairs), shuffle_seed)

    def on_epoch_end(self):
        self.set_epoch(self.epoch + 1)

    def __len__(self):
        return int(np.ceil(len(self.pairs) / float(self.batch_size)))

    def __getitem__(self, batch_index):
        if batch_index < 0 or batch_index >= len(self):
            raise IndexError('Batch index out of range', batch_index)
        return take_batch(self.pairs, self.order, self.batch_size, batch_index)

    def __iter__(self):
        for batch_index in range(len(self)):
            yield self[batch_index]
