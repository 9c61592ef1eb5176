import json
import numpy as np

TCA_REACHED = 'tca_reached'
MAX_STEPS = 'max_steps'
DEFAULT_QUANTILES = (0.05, 0.50, 0.95)


class CdmRecord(object):
    """One conjunction data message projected onto a ``FeatureSchema``.

    # Properties
        event_id: String. Identifier of the conjunction event.
        values: Numpy array of shape ``(num_features)``.
        time_arg: Int. Position of the time to TCA inside ``values``.
        time_to_tca: Float. Days until the time of closest approach.
    """
    def __init__(self, event_id, values, time_arg=0):
        self.event_id = event_id
        self.values = values
        self.time_arg = time_arg

    @property
    def values(self):
        return self._values

    @values.setter
    def values(self, values):
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError('CDM values must be a vector', values.shape)
        if not np.all(np.isfinite(values)):
            raise ValueError('CDM values must be finite', self.event_id)
        self._values = values

    @property
    def time_to_tca(self):
        return float(self._values[self.time_arg])

    def __len__(self):
        return len(self._values)

    def __repr__(self):
        return 'CdmRecord({}, time_to_tca={})'.format(
            self.event_id, self.time_to_tca)


class Event(object):
    """Ordered sequence of the CDMs issued for one conjunction.

    # Arguments
        event_id: String.
        cdms: List of ``CdmRecord`` sharing ``event_id``, sorted by
            non-increasing time to TCA.

    # Properties
        values: Numpy array of shape ``(num_cdms, num_features)``.
        times_to_tca: Numpy array of shape ``(num_cdms)``.
    """
    def __init__(self, event_id, cdms):
        for cdm in cdms:
            if cdm.event_id != event_id:
                raise ValueError('CDM from event {} in event {}'.format(
                    cdm.event_id, event_id))
        self.event_id = event_id
        self.cdms = list(cdms)
        if len(self.cdms) > 0:
            self._values = np.stack([cdm.values for cdm in self.cdms])
        else:
            self._values = np.zeros((0, 0))

    @classmethod
    def from_values(cls, event_id, values, time_arg=0):
        cdms = [CdmRecord(event_id, row, time_arg) for row in values]
        return cls(event_id, cdms)

    @property
    def values(self):
        return self._values

    @property
    def times_to_tca(self):
        return np.array([cdm.time_to_tca for cdm in self.cdms])

    def __len__(self):
        return len(self.cdms)

    def __repr__(self):
        return 'Event({}, num_cdms={})'.format(self.event_id, len(self))


class DatasetSplit(object):
    """Disjoint train and test events.

    # Properties
        train: List of ``Event``.
        test: List of ``Event``.
        seed: Int. Seed of the permutation that produced the split.
        test_fraction: Float.
    """
    def __init__(self, train, test, seed, test_fraction):
        self.train = train
        self.test = test
        self.seed = seed
        self.test_fraction = test_fraction

    def __repr__(self):
        return 'DatasetSplit(train={}, test={}, seed={})'.format(
            len(self.train), len(self.test), self.seed)


class NormStats(object):
    """Per-feature standardization statistics.

    # Properties
        mean: Numpy array of shape ``(num_features)``.
        std: Numpy array of shape ``(num_features)``, strictly positive.
        applied_mask: Boolean numpy array; ``False`` entries pass through.
    """
    def __init__(self, mean, std, applied_mask):
        self.mean = np.asarray(mean, dtype=np.float64)
        self.std = np.asarray(std, dtype=np.float64)
        self.applied_mask = np.asarray(applied_mask, dtype=bool)
        if not (self.mean.shape == self.std.shape == self.applied_mask.shape):
            raise ValueError('Inconsistent normalization shapes')
        if np.any(self.std[self.applied_mask] <= 0.0):
            raise ValueError('Standard deviations must be positive')
        self.mean.setflags(write=False)
        self.std.setflags(write=False)
        self.applied_mask.setflags(write=False)

    @property
    def width(self):
        return len(self.mean)

    def to_dict(self):
        return {'mean': self.mean.tolist(), 'std': self.std.tolist(),
                'applied_mask': self.applied_mask.tolist()}

    @classmethod
    def from_dict(cls, description):
        return cls(description['mean'], description['std'],
                   description['applied_mask'])

    def __eq__(self, other):
        if not isinstance(other, NormStats):
            return NotImplemented
        return (np.array_equal(self.mean, other.mean) and
                np.array_equal(self.std, other.std) and
                np.array_equal(self.applied_mask, other.applied_mask))


class SequencePair(object):
    """Input and one-step-shifted target of an event.

    # Properties
        inputs: Numpy array of shape ``(num_cdms - 1, num_features)``.
        targets: Numpy array of shape ``(num_cdms - 1, num_features)``.
        event_id: String.
    """
    def __init__(self, inputs, targets, event_id):
        if inputs.shape != targets.shape:
            raise ValueError('Input and target shapes differ',
                             inputs.shape, targets.shape)
        self.inputs = inputs
        self.targets = targets
        self.event_id = event_id

    def __len__(self):
        return len(self.inputs)


class Batch(object):
    """Right-padded mini-batch of sequence pairs.

    # Properties
        inputs: Numpy array of shape ``(batch_size, max_length, features)``.
        targets: Numpy array of shape ``(batch_size, max_length, features)``.
        mask: Boolean numpy array of shape ``(batch_size, max_length)``.
        lengths: Int numpy array of shape ``(batch_size)``.
        event_ids: List of strings.
    """
    def __init__(self, inputs, targets, mask, lengths, event_ids=None):
        self.inputs = inputs
        self.targets = targets
        self.mask = mask
        self.lengths = lengths
        self.event_ids = event_ids

    @property
    def num_valid_steps(self):
        return int(self.mask.sum())

    def __len__(self):
        return len(self.lengths)


class PredictionDistribution(object):
    """Monte Carlo dropout samples of one predicted CDM.

    # Arguments
        samples: Numpy array of shape ``(num_samples, num_features)`` in
            normalized space.
        stats: ``NormStats`` used to report physical-space values.
        quantiles: Tuple of floats in ``[0, 1]``.

    # Properties
        mean: Numpy array of shape ``(num_features)``.
        std: Numpy array of shape ``(num_features)``. Population std.
        quantile_values: Numpy array of shape
            ``(num_quantiles, num_features)`` in normalized space.
        physical_mean: ``mean`` mapped back to physical units.
    """
    def __init__(self, samples, stats, quantiles=DEFAULT_QUANTILES):
        samples = np.asarray(samples, dtype=np.float64)
        if samples.ndim != 2 or len(samples) < 1:
            raise ValueError('At least one sample is required')
        self.samples = samples
        self.stats = stats
        self.quantiles = tuple(quantiles)

    @property
    def num_samples(self):
        return len(self.samples)

    def _deviations(self):
        # centered on the first sample so identical samples give exact zeros
        return self.samples - self.samples[0]

    @property
    def mean(self):
        return self.samples[0] + self._deviations().mean(axis=0)

    @property
    def std(self):
        return self._deviations().std(axis=0)

    @property
    def quantile_values(self):
        return np.quantile(self.samples, self.quantiles, axis=0)

    @property
    def physical_mean(self):
        return _denormalize(self.mean, self.stats)

    @property
    def physical_std(self):
        scale = np.where(self.stats.applied_mask, self.stats.std, 1.0)
        return self.std * scale

    @property
    def physical_quantiles(self):
        return _denormalize(self.quantile_values, self.stats)

    def __repr__(self):
        return 'PredictionDistribution(num_samples={})'.format(
            self.num_samples)


def _denormalize(values, stats):
    physical = values * stats.std + stats.mean
    return np.where(stats.applied_mask, physical, values)


class RolloutResult(object):
    """Autoregressive continuations of an observed event prefix.

    # Arguments
        prefix: Numpy array of shape ``(num_observed, num_features)`` in
            normalized space.
        trajectories: List with one numpy array per Monte Carlo sample of
            shape ``(num_generated, num_features)`` in normalized space.
        reasons: List of strings, ``'tca_reached'`` or ``'max_steps'``.
        stats: ``NormStats``.
        quantiles: Tuple of floats.

    # Properties
        distributions: List of ``PredictionDistribution``, one per step,
            built from the trajectories alive at that step.
        num_alive: List of Ints, trajectories alive at each step.
        termination_reason: ``'tca_reached'`` if every trajectory reached
            TCA, ``'max_steps'`` otherwise.
    """
    def __init__(self, prefix, trajectories, reasons, stats,
                 quantiles=DEFAULT_QUANTILES):
        if len(trajectories) != len(reasons):
            raise ValueError('One termination reason per trajectory')
        self.prefix = np.asarray(prefix, dtype=np.float64)
        self.trajectories = [np.asarray(trajectory, dtype=np.float64)
                             for trajectory in trajectories]
        self.reasons = list(reasons)
        self.stats = stats
        self.quantiles = tuple(quantiles)
        self.feature_names = None

    @property
    def num_steps(self):
        return max([len(trajectory) for trajectory in self.trajectories])

    @property
    def num_alive(self):
        return [sum([len(trajectory) > step_arg
                     for trajectory in self.trajectories])
                for step_arg in range(self.num_steps)]

    @property
    def termination_reason(self):
        if all([reason == TCA_REACHED for reason in self.reasons]):
            return TCA_REACHED
        return MAX_STEPS

    def step_distribution(self, step_arg):
        """Distribution of step ``step_arg`` over alive trajectories.
        """
        samples = [trajectory[step_arg] for trajectory in self.trajectories
                   if len(trajectory) > step_arg]
        return PredictionDistribution(
            np.array(samples), self.stats, self.quantiles)

    @property
    def distributions(self):
        return [self.step_distribution(step_arg)
                for step_arg in range(self.num_steps)]

    def to_dict(self):
        return {'prefix': self.prefix.tolist(),
                'trajectories': [trajectory.tolist()
                                 for trajectory in self.trajectories],
                'reasons': self.reasons,
                'stats': self.stats.to_dict(),
                'quantiles': list(self.quantiles)}

    @classmethod
    def from_dict(cls, description):
        width = len(description['prefix'][0])
        trajectories = [np.array(trajectory).reshape(-1, width)
                        for trajectory in description['trajectories']]
        return cls(description['prefix'], trajectories,
                   description['reasons'],
                   NormStats.from_dict(description['stats']),
                   description['quantiles'])

    def save(self, filepath, feature_names=None):
        description = self.to_dict()
        if feature_names is not None:
            description['feature_names'] = list(feature_names)
        with open(filepath, 'w') as filedata:
            json.dump(description, filedata)

    @classmethod
    def load(cls, filepath):
        with open(filepath, 'r') as filedata:
            description = json.load(filedata)
        result = cls.from_dict(description)
        result.feature_names = description.get('feature_names')
        return result

    def __repr__(self):
        return 'RolloutResult(num_trajectories={}, num_steps={})'.format(
            len(self.trajectories), self.num_steps)
