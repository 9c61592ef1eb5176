from ..abstract import SequentialProcessor
from ..abstract.messages import DEFAULT_QUANTILES
from .. import processors as pr


class PredictNextCDM(SequentialProcessor):
    """Monte Carlo dropout prediction of the next CDM of an event.

    # Arguments
        model: ``StackedLSTM``.
        stats: ``NormStats`` the model was trained with.
        feature_names: List of strings or ``FeatureSchema``.
        num_samples: Int.
        seed: Int.
        quantiles: Tuple of floats.
        workers: Int.

    # Example
        ``` python
        predict = PredictNextCDM(model, stats, schema, num_samples=50)
        inferences = predict(event.cdms[:3])
        print(inferences['summary'])
        ```

    # Returns
        A function that takes the observed CDMs and outputs a dictionary
        with ``keys``: ``distribution`` and ``summary``.
    """
    def __init__(self, model, stats, feature_names, num_samples=50, seed=0,
                 quantiles=DEFAULT_QUANTILES, workers=1):
        super(PredictNextCDM, self).__init__()
        self.add(pr.PredictNext(
            model, stats, num_samples, seed, quantiles, workers))
        self.add(pr.Summarize(feature_names, keep_distribution=True))
        self.add(pr.WrapOutput(['distribution', 'summary']))


class RolloutEvent(SequentialProcessor):
    """Predicts the remaining CDMs of an event until the predicted TCA.

    # Arguments
        model: ``StackedLSTM``.
        stats: ``NormStats``.
        schema: ``FeatureSchema``. Locates the time to TCA.
        num_samples: Int. Number of trajectories.
        max_steps: Int.
        seed: Int.
        quantiles: Tuple of floats.
        workers: Int.

    # Returns
        A function that takes the observed CDMs and outputs a
        ``RolloutResult`` carrying the schema feature names.
    """
    def __init__(self, model, stats, schema, num_samples=50, max_steps=30,
                 seed=0, quantiles=DEFAULT_QUANTILES, workers=1):
        super(RolloutEvent, self).__init__()
        self.schema = schema
        self.add(pr.Rollout(model, stats, num_samples, max_steps, seed,
                            schema.time_arg, quantiles, workers))

    def __call__(self, prefix):
        result = super(RolloutEvent, self).__call__(prefix)
        result.feature_names = self.schema.names
        return result
