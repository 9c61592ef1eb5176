import numpy as np

from ..abstract.messages import SequencePair, Batch


def build_training_pair(event):
    """Builds the one-step-shifted input and target of an event.

    # Arguments
        event: ``Event`` with at least two CDMs.

    # Returns
        ``SequencePair`` with inputs CDMs ``1..T-1`` and targets ``2..T``.
    """
    if len(event) < 2:
        raise ValueError('Event {} has fewer than two CDMs'.format(
            event.event_id))
    values = event.values
    return SequencePair(values[:-1], values[1:], event.event_id)


def pad_pairs(pairs):
    """Right-pads pairs with zeros to the longest pair.

    # Arguments
        pairs: List of ``SequencePair``.

    # Returns
        ``Batch``.
    """
    if len(pairs) == 0:
        raise ValueError('Cannot pad an empty list of pairs')
    lengths = np.array([len(pair) for pair in pairs], dtype=np.int64)
    num_features = pairs[0].inputs.shape[1]
    shape = (len(pairs), lengths.max(), num_features)
    inputs, targets = np.zeros(shape), np.zeros(shape)
    for pair_arg, pair in enumerate(pairs):
        inputs[pair_arg, :len(pair)] = pair.inputs
        targets[pair_arg, :len(pair)] = pair.targets
    mask = np.arange(lengths.max())[None, :] < lengths[:, None]
    event_ids = [pair.event_id for pair in pairs]
    return Batch(inputs, targets, mask, lengths, event_ids)


def shuffle_order(num_pairs, shuffle_seed=None):
    """Permutation of ``num_pairs`` keyed by ``shuffle_seed``.

    If ``shuffle_seed`` is ``None`` the identity order is returned.
    """
    if shuffle_seed is None:
        return np.arange(num_pairs)
    return np.random.default_rng(shuffle_seed).permutation(num_pairs)


def take_batch(pairs, order, batch_size, batch_index):
    """Pads the ``batch_index``-th slice of ``order`` of size ``batch_size``.
    """
    pair_args = order[batch_size * batch_index:batch_size * (batch_index + 1)]
    return pad_pairs([pairs[pair_arg] for pair_arg in pair_args])


def make_batches(pairs, batch_size=128, shuffle_seed=None):
    """Shuffles pairs with ``shuffle_seed`` and pads them in batches.

    # Arguments
        pairs: List of ``SequencePair``.
        batch_size: Int. The last batch may be smaller.
        shuffle_seed: Int or ``None``. If ``None`` the order is kept.

    # Returns
        List of ``Batch``.
    """
    if batch_size < 1:
        raise ValueError('``batch_size`` must be at least 1', batch_size)
    order = shuffle_order(len(pairs), shuffle_seed)
    num_batches = int(np.ceil(len(pairs) / float(batch_size)))
    return [take_batch(pairs, order, batch_size, batch_index)
            for batch_index in range(num_batches)]
