from ..abstract import SequentialProcessor
from .. import processors as pr


class PreprocessKelvins(SequentialProcessor):
    """Parses a Kelvins-format CDM table, cleans it and groups the
    surviving records into events with at least ``min_length`` CDMs.

    # Arguments
        schema: ``FeatureSchema``.
        min_length: Int.
        skip_bad_rows: Boolean.

    # Example
        ``` python
        from cdmlstm.datasets import kelvins_schema
        from cdmlstm.pipelines import PreprocessKelvins

        preprocess = PreprocessKelvins(kelvins_schema())
        events = preprocess('train_data.csv')
        print(preprocess.counts)
        ```

    # Returns
        A function that takes a CSV path or stream and outputs a list of
        ``Event``.
    """
    def __init__(self, schema, min_length=2, skip_bad_rows=False):
        super(PreprocessKelvins, self).__init__()
        self.schema = schema
        self.add(pr.ParseKelvinsCSV(skip_bad_rows, schema.event_key))
        self.add(pr.CleanRecords(schema))
        self.add(pr.GroupEvents())
        self.add(pr.FilterMinLength(min_length))

    @property
    def counts(self):
        """Counts of the last call: ``records``, ``dropped_missing``,
        ``dropped_sigma``, ``cdms``, ``events``, ``kept_events`` and
        ``kept_cdms``.
        """
        counts = dict(self.get_processor('CleanRecords').counts or {})
        counts.update(self.get_processor('FilterMinLength').counts or {})
        return counts


class SplitKelvins(SequentialProcessor):
    """``PreprocessKelvins`` followed by a seeded train/test split.

    # Arguments
        schema: ``FeatureSchema``.
        test_fraction: Float.
        seed: Int.
        min_length: Int.
    """
    def __init__(self, schema, test_fraction=0.15, seed=0, min_length=2):
        super(SplitKelvins, self).__init__()
        self.preprocess = PreprocessKelvins(schema, min_length)
        self.add(self.preprocess)
        self.add(pr.SplitTrainTest(test_fraction, seed))
