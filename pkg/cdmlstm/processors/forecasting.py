from ..abstract import Processor
from ..abstract.messages import DEFAULT_QUANTILES
from ..backend.forecasting import predict_next
from ..backend.forecasting import rollout
from ..backend.forecasting import summarize


class PredictNext(Processor):
    """Monte Carlo dropout distribution of the next CDM of a prefix.

    # Arguments
        model: ``StackedLSTM``.
        stats: ``NormStats``.
        num_samples: Int.
        seed: Int.
        quantiles: Tuple of floats.
        workers: Int.
    """
    def __init__(self, model, stats, num_samples=50, seed=0,
                 quantiles=DEFAULT_QUANTILES, workers=1):
        super(PredictNext, self).__init__()
        self.model = model
        self.stats = stats
        self.num_samples = num_samples
        self.seed = seed
        self.quantiles = quantiles
        self.workers = workers

    def call(self, prefix):
        return predict_next(prefix, self.model, self.stats, self.num_samples,
                            self.seed, self.quantiles, self.workers)


class Rollout(Processor):
    """Autoregressive continuation of a prefix until the predicted TCA.

    # Arguments
        model: ``StackedLSTM``.
        stats: ``NormStats``.
        num_samples: Int.
        max_steps: Int.
        seed: Int.
        time_arg: Int or ``None``.
        quantiles: Tuple of floats.
        workers: Int.
    """
    def __init__(self, model, stats, num_samples=50, max_steps=30, seed=0,
                 time_arg=None, quantiles=DEFAULT_QUANTILES, workers=1):
        super(Rollout, self).__init__()
        self.model = model
        self.stats = stats
        self.num_samples = num_samples
        self.max_steps = max_steps
        self.seed = seed
        self.time_arg = time_arg
        self.quantiles = quantiles
        self.workers = workers

    def call(self, prefix):
        return rollout(prefix, self.model, self.stats, self.num_samples,
                       self.max_steps, self.seed, self.time_arg,
                       self.quantiles, self.workers)


class Summarize(Processor):
    """Per-feature physical-space table of a ``PredictionDistribution``.

    # Arguments
        feature_names: List of strings or ``FeatureSchema``.
        keep_distribution: Boolean. If ``True`` the distribution is returned
            before the table.
    """
    def __init__(self, feature_names, keep_distribution=False):
        super(Summarize, self).__init__()
        self.feature_names = feature_names
        self.keep_distribution = keep_distribution

    def call(self, distribution):
        table = summarize(distribution, self.feature_names)
        if self.keep_distribution:
            return distribution, table
        return table
