import logging

import numpy as np
import pandas as pd

from ..backend.forecasting import map_ordered
from ..backend.sequence import build_training_pair, make_batches
from ..backend.standardization import normalize_events

LOGGER = logging.getLogger(__name__)
PERSISTENCE = 'persistence'


class EvalReport(object):
    """Next-CDM prediction errors of a predictor over a set of events.

    Errors are measured in normalized feature space.

    # Arguments
        name: String. Predictor name e.g. ``'persistence'`` or ``'model'``.
        feature_squared_error: Numpy array ``(num_features)``. Sum of squared
            errors of every feature over the evaluated steps.
        num_steps: Int. Evaluated predictions, ``sum(T_i - 1)``.
        num_events: Int.
        num_samples: Int. Monte Carlo samples per prediction, zero for the
            baseline.
        baseline_mse: Float or ``None``. Persistence MSE on the same events.
        feature_names: List of strings or ``None``.

    # Properties
        mse: Float. Mean over every evaluated cell.
        feature_mse: Numpy array ``(num_features)``.
        num_cells: Int. ``num_steps * num_features``.
    """
    def __init__(self, name, feature_squared_error, num_steps, num_events,
                 num_samples=0, baseline_mse=None, feature_names=None):
        if num_steps < 1:
            raise ValueError('Evaluation needs at least one consecutive pair')
        self.name = name
        self.feature_squared_error = np.asarray(
            feature_squared_error, dtype=np.float64)
        self.num_steps = num_steps
        self.num_events = num_events
        self.num_samples = num_samples
        self.baseline_mse = baseline_mse
        self.feature_names = feature_names

    @property
    def num_features(self):
        return len(self.feature_squared_error)

    @property
    def num_cells(self):
        return self.num_steps * self.num_features

    @property
    def mse(self):
        return float(np.sum(self.feature_squared_error) / self.num_cells)

    @property
    def feature_mse(self):
        return self.feature_squared_error / self.num_steps

    @property
    def improvement(self):
        """Relative MSE reduction w.r.t. ``baseline_mse``."""
        if self.baseline_mse is None or self.baseline_mse == 0.0:
            return float('nan')
        return (self.baseline_mse - self.mse) / self.baseline_mse

    def summary(self):
        """Machine-readable key-value summary.
        """
        baseline_mse = self.baseline_mse
        return {'name': self.name, 'mse': self.mse,
                'num_samples': self.num_samples,
                'num_events': self.num_events,
                'num_cdms': self.num_steps + self.num_events,
                'num_cells': self.num_cells,
                'baseline_mse': float('nan') if baseline_mse is None
                else baseline_mse,
                'improvement': self.improvement}

    def feature_table(self):
        names = self.feature_names
        if names is None:
            names = ['feature_{}'.format(arg)
                     for arg in range(self.num_features)]
        return pd.DataFrame({'feature': names, 'mse': self.feature_mse})

    def write_summary(self, filepath):
        with open(filepath, 'w') as filedata:
            for key, value in self.summary().items():
                if isinstance(value, float):
                    value = '{:.10g}'.format(value)
                filedata.write('{} = {}\n'.format(key, value))

    def write_feature_table(self, filepath):
        self.feature_table().to_csv(
            filepath, sep='\t', index=False, float_format='%.10g')

    def __repr__(self):
        return 'EvalReport({}, mse={:.4f}, num_samples={})'.format(
            self.name, self.mse, self.num_samples)


def _check_events(events):
    if len(events) == 0:
        raise ValueError('No events to evaluate')
    for event in events:
        if len(event) < 2:
            raise ValueError('Event {} has fewer than two CDMs'.format(
                event.event_id))


def persistence_baseline(events, stats, feature_names=None):
    """Scores the predictor that repeats the previous CDM.

    # Arguments
        events: List of ``Event`` in physical units, each with two or more
            CDMs.
        stats: ``NormStats``.
        feature_names: List of strings or ``None``.

    # Returns
        ``EvalReport`` named ``'persistence'``.
    """
    _check_events(events)
    feature_squared_error = np.zeros(stats.width)
    num_steps = 0
    for event in normalize_events(events, stats):
        difference = event.values[1:] - event.values[:-1]
        feature_squared_error = feature_squared_error + np.sum(
            difference ** 2, axis=0)
        num_steps = num_steps + len(difference)
    report = EvalReport(PERSISTENCE, feature_squared_error, num_steps,
                        len(events), 0, None, feature_names)
    report.baseline_mse = report.mse
    LOGGER.info('Persistence baseline MSE %.4f over %d events',
                report.mse, len(events))
    return report


def _sample_mean(samples):
    # centered on the first sample so identical samples keep their value
    deviations = [sample - samples[0] for sample in samples]
    return samples[0] + np.mean(deviations, axis=0)


def _predict_batch(model, batch, num_samples, seed, batch_arg, workers):
    if model.dropout_rate == 0.0:
        return model.predict(batch.inputs)

    def sample(sample_arg):
        masks = model.sample_dropout_masks(
            len(batch), [seed, sample_arg, batch_arg])
        return model.predict(batch.inputs, masks)
    return _sample_mean(map_ordered(sample, range(num_samples), workers))


def evaluate_model(model, stats, events, num_samples=1, seed=0,
                   batch_size=128, feature_names=None, workers=1):
    """Scores the Monte Carlo mean prediction of every next CDM.

    Each event is run once per sample over its whole observed sequence;
    step ``t`` of the output is the prediction of CDM ``t + 1`` given the
    first ``t`` CDMs. Sample ``i`` of batch ``b`` uses masks drawn from
    ``(seed, i, b)``.

    # Arguments
        model: ``StackedLSTM`` or any object with ``predict``,
            ``dropout_rate`` and ``sample_dropout_masks``.
        stats: ``NormStats`` the model was trained with.
        events: List of ``Event`` in physical units.
        num_samples: Int. At least one.
        seed: Int.
        batch_size: Int. Events per forward pass.
        feature_names: List of strings or ``None``.
        workers: Int. Samples evaluated concurrently.

    # Returns
        ``EvalReport`` named ``'model'`` with the persistence MSE of the
        same events as ``baseline_mse``.
    """
    if num_samples < 1:
        raise ValueError('``num_samples`` must be at least 1', num_samples)
    _check_events(events)
    pairs = [build_training_pair(event)
             for event in normalize_events(events, stats)]
    batches = make_batches(pairs, batch_size)
    feature_squared_error = np.zeros(stats.width)
    num_steps = 0
    for batch_arg, batch in enumerate(batches):
        predictions = _predict_batch(
            model, batch, num_samples, seed, batch_arg, workers)
        difference = np.where(
            batch.mask[..., None], predictions - batch.targets, 0.0)
        feature_squared_error = feature_squared_error + np.sum(
            difference ** 2, axis=(0, 1))
        num_steps = num_steps + batch.num_valid_steps
    baseline = persistence_baseline(events, stats, feature_names)
    report = EvalReport('model', feature_squared_error, num_steps,
                        len(events), num_samples, baseline.mse,
                        feature_names)
    LOGGER.info('Model MSE %.4f with %d samples (baseline %.4f)',
                report.mse, num_samples, baseline.mse)
    return report


def compare(reports, baseline_mse=None):
    """Tabulates reports by increasing MSE.

    # Arguments
        reports: List of ``EvalReport``. Ties keep their input order.
        baseline_mse: Float or ``None``. Reference for the improvement
            column; defaults to the persistence report in ``reports`` or
            the ``baseline_mse`` of the first report.

    # Returns
        Pandas ``DataFrame`` with columns ``name``, ``num_samples``,
        ``mse`` and ``improvement``.
    """
    if len(reports) == 0:
        raise ValueError('Nothing to compare')
    if baseline_mse is None:
        baselines = [report.mse for report in reports
                     if report.name == PERSISTENCE]
        if len(baselines) > 0:
            baseline_mse = baselines[0]
        else:
            baseline_mse = reports[0].baseline_mse
    rows = []
    for report in reports:
        improvement = float('nan')
        if baseline_mse is not None and baseline_mse != 0.0:
            improvement = (baseline_mse - report.mse) / baseline_mse
        rows.append({'name': report.name, 'num_samples': report.num_samples,
                     'mse': report.mse, 'improvement': improvement})
    table = pd.DataFrame(
        rows, columns=['name', 'num_samples', 'mse', 'improvement'])
    table = table.sort_values('mse', kind='mergesort')
    return table.reset_index(drop=True)
