import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd

from ..abstract.messages import CdmRecord, Event
from ..abstract.messages import PredictionDistribution, RolloutResult
from ..abstract.messages import TCA_REACHED, MAX_STEPS, DEFAULT_QUANTILES
from .standardization import transform, inverse_transform

LOGGER = logging.getLogger(__name__)


def _prefix_values(prefix):
    if isinstance(prefix, Event):
        return prefix.values, prefix.cdms[0].time_arg if len(prefix) else 0
    if len(prefix) > 0 and isinstance(prefix[0], CdmRecord):
        values = np.stack([cdm.values for cdm in prefix])
        return values, prefix[0].time_arg
    return np.asarray(prefix, dtype=np.float64), None


def normalize_prefix(prefix, stats):
    """Validates a physical-space prefix and maps it to normalized space.

    # Arguments
        prefix: ``Event``, list of ``CdmRecord`` or numpy array
            ``(num_cdms, num_features)``.
        stats: ``NormStats``.

    # Returns
        Numpy array ``(num_cdms, num_features)`` and the time feature
        position carried by the records (``None`` for arrays).
    """
    if stats is None:
        raise ValueError('Normalization statistics are not fitted')
    values, time_arg = _prefix_values(prefix)
    if values.ndim != 2 or len(values) < 1:
        raise ValueError('Prefix must hold at least one CDM')
    if values.shape[1] != stats.width:
        raise ValueError('Prefix has {} features, model expects {}'.format(
            values.shape[1], stats.width))
    return transform(values, stats), time_arg


def _sample_next(model, sequence, seed):
    masks = None
    if model.dropout_rate > 0.0:
        masks = model.sample_dropout_masks(1, seed)
    return model.predict(sequence[None], masks)[0, -1]


def map_ordered(function, args, workers):
    """Maps ``function`` over ``args`` with up to ``workers`` threads keeping
    the order of ``args``.
    """
    if workers <= 1:
        return [function(arg) for arg in args]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, args))


def predict_next(prefix, model, stats, num_samples=50, seed=0,
                 quantiles=DEFAULT_QUANTILES, workers=1):
    """Samples the next CDM of an event with Monte Carlo dropout.

    Sample ``i`` runs the network over the whole prefix with dropout masks
    drawn from ``(seed, i)`` and keeps the last output. Samples do not
    depend on ``num_samples`` or on ``workers``.

    # Arguments
        prefix: ``Event``, list of ``CdmRecord`` or numpy array in
            physical units.
        model: ``StackedLSTM``.
        stats: ``NormStats`` the model was trained with.
        num_samples: Int. At least one.
        seed: Int.
        quantiles: Tuple of floats.
        workers: Int. Samples evaluated concurrently.

    # Returns
        ``PredictionDistribution`` in normalized space.
    """
    if num_samples < 1:
        raise ValueError('``num_samples`` must be at least 1', num_samples)
    sequence = normalize_prefix(prefix, stats)[0]
    samples = map_ordered(
        lambda sample_arg: _sample_next(model, sequence, [seed, sample_arg]),
        range(num_samples), workers)
    return PredictionDistribution(np.array(samples), stats, quantiles)


def _physical_time(values, stats, time_arg):
    return inverse_transform(values, stats)[..., time_arg]


def _roll_trajectory(model, sequence, stats, max_steps, seed, time_arg):
    generated = []
    for step_arg in range(max_steps):
        inputs = np.concatenate([sequence, np.array(generated).reshape(
            -1, sequence.shape[1])], axis=0)
        next_cdm = _sample_next(model, inputs, seed + [step_arg])
        generated.append(next_cdm)
        if _physical_time(next_cdm, stats, time_arg) <= 0.0:
            return np.array(generated), TCA_REACHED
    return np.array(generated).reshape(-1, sequence.shape[1]), MAX_STEPS


def rollout(prefix, model, stats, num_samples=50, max_steps=30, seed=0,
            time_arg=None, quantiles=DEFAULT_QUANTILES, workers=1):
    """Autoregressively extends an event until the predicted TCA.

    Every trajectory feeds its own sampled CDMs back as inputs with fresh
    masks drawn from ``(seed, trajectory, step)`` and stops after a CDM
    whose physical time to TCA is not positive, or after ``max_steps``.

    # Arguments
        prefix: ``Event``, list of ``CdmRecord`` or numpy array in
            physical units.
        model: ``StackedLSTM``.
        stats: ``NormStats``.
        num_samples: Int. Number of trajectories.
        max_steps: Int. Hard cap on generated CDMs per trajectory.
        seed: Int.
        time_arg: Int or ``None``. Position of the time to TCA; taken from
            the records when ``None``.
        quantiles: Tuple of floats.
        workers: Int. Trajectories evaluated concurrently.

    # Returns
        ``RolloutResult``.
    """
    if num_samples < 1:
        raise ValueError('``num_samples`` must be at least 1', num_samples)
    if max_steps < 1:
        raise ValueError('``max_steps`` must be at least 1', max_steps)
    sequence, record_time_arg = normalize_prefix(prefix, stats)
    if time_arg is None:
        time_arg = 0 if record_time_arg is None else record_time_arg
    width = sequence.shape[1]
    if _physical_time(sequence[-1], stats, time_arg) <= 0.0:
        LOGGER.info('Prefix already reached TCA; nothing to roll out')
        trajectories = [np.zeros((0, width)) for arg in range(num_samples)]
        reasons = [TCA_REACHED] * num_samples
        return RolloutResult(sequence, trajectories, reasons, stats, quantiles)
    results = map_ordered(
        lambda sample_arg: _roll_trajectory(
            model, sequence, stats, max_steps, [seed, sample_arg], time_arg),
        range(num_samples), workers)
    trajectories = [trajectory for trajectory, reason in results]
    reasons = [reason for trajectory, reason in results]
    LOGGER.info('Rolled out %d trajectories of up to %d steps',
                num_samples, max([len(trajectory)
                                  for trajectory in trajectories]))
    return RolloutResult(sequence, trajectories, reasons, stats, quantiles)


def quantile_name(quantile):
    """Column name of a quantile e.g. ``0.05`` becomes ``'p05'``.
    """
    return 'p{:02d}'.format(int(round(100 * quantile)))


def summarize(distribution, feature_names):
    """Per-feature physical-space statistics of a prediction.

    # Arguments
        distribution: ``PredictionDistribution``.
        feature_names: List of strings or a ``FeatureSchema``.

    # Returns
        Pandas ``DataFrame`` with columns ``feature``, ``mean``, ``std`` and
        one column per quantile.
    """
    if hasattr(feature_names, 'names'):
        feature_names = feature_names.names
    if len(feature_names) != distribution.samples.shape[1]:
        raise ValueError('Got {} names for {} features'.format(
            len(feature_names), distribution.samples.shape[1]))
    table = pd.DataFrame({'feature': list(feature_names),
                          'mean': distribution.physical_mean,
                          'std': distribution.physical_std})
    quantile_values = distribution.physical_quantiles
    for quantile, values in zip(distribution.quantiles, quantile_values):
        table[quantile_name(quantile)] = values
    return table


def rollout_bands(result, feature_names):
    """Stacks ``summarize`` over every rollout step.

    # Returns
        Pandas ``DataFrame`` with columns ``step``, ``feature``, ``mean``,
        ``std``, the quantile columns and ``n_alive``. Steps start at one.
    """
    tables = []
    for step_arg, num_alive in enumerate(result.num_alive):
        table = summarize(result.step_distribution(step_arg), feature_names)
        table.insert(0, 'step', step_arg + 1)
        table['n_alive'] = num_alive
        tables.append(table)
    if len(tables) == 0:
        columns = (['step', 'feature', 'mean', 'std'] +
                   [quantile_name(quantile) for quantile in result.quantiles] +
                   ['n_alive'])
        return pd.DataFrame(columns=columns)
    return pd.concat(tables, ignore_index=True)
