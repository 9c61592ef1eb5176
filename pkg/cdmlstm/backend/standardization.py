import logging

import numpy as np

from ..abstract.messages import NormStats, Event

LOGGER = logging.getLogger(__name__)


def fit_normalizer(train_events, schema):
    """Computes per-feature mean and population standard deviation.

    Features with zero variance get a standard deviation of one.

    # Arguments
        train_events: List of ``Event``. Statistics use every CDM.
        schema: ``FeatureSchema``. Only continuous features are applied.

    # Returns
        ``NormStats``.
    """
    if len(train_events) == 0:
        raise ValueError('Cannot fit a normalizer without training events')
    values = np.concatenate([event.values for event in train_events], axis=0)
    if values.shape[1] != schema.width:
        raise ValueError('Events have {} features, schema has {}'.format(
            values.shape[1], schema.width))
    mean = values.mean(axis=0)
    std = values.std(axis=0)
    is_constant = std == 0.0
    for feature_arg in np.flatnonzero(is_constant):
        LOGGER.warning('Feature %s has zero variance; using std 1',
                       schema.names[feature_arg])
    std = np.where(is_constant, 1.0, std)
    return NormStats(mean, std, schema.continuous_mask)


def transform(values, stats):
    """Maps applied features to ``(x - mean) / std``.

    # Arguments
        values: Numpy array with last dimension ``num_features``.
        stats: ``NormStats``.

    # Returns
        Numpy array with the same shape as ``values``.
    """
    values = np.asarray(values, dtype=np.float64)
    normalized = (values - stats.mean) / stats.std
    return np.where(stats.applied_mask, normalized, values)


def inverse_transform(values, stats):
    """Maps normalized values back to physical units.

    # Arguments
        values: Numpy array with last dimension ``num_features``.
        stats: ``NormStats``.

    # Returns
        Numpy array with the same shape as ``values``.
    """
    values = np.asarray(values, dtype=np.float64)
    physical = values * stats.std + stats.mean
    return np.where(stats.applied_mask, physical, values)


def normalize_events(events, stats):
    """Returns copies of ``events`` with normalized values.
    """
    normalized_events = []
    for event in events:
        time_arg = event.cdms[0].time_arg if len(event) > 0 else 0
        normalized_events.append(Event.from_values(
            event.event_id, transform(event.values, stats), time_arg))
    return normalized_events
