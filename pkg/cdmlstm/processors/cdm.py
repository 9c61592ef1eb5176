from ..abstract import Processor
from ..backend.cdm import parse_kelvins_csv
from ..backend.cdm import clean_with_counts
from ..backend.cdm import group_events
from ..backend.cdm import filter_min_length
from ..backend.cdm import split_train_test
from ..backend.sequence import build_training_pair
from ..backend.standardization import transform
from ..backend.standardization import inverse_transform
from ..backend.standardization import normalize_events


class ParseKelvinsCSV(Processor):
    """Parses a Kelvins-format CDM table into a ``DataFrame``.

    # Arguments
        skip_bad_rows: Boolean. If ``True`` malformed rows are skipped.
        event_key: String. Column holding the event identifier.
    """
    def __init__(self, skip_bad_rows=False, event_key='event_id'):
        super(ParseKelvinsCSV, self).__init__()
        self.skip_bad_rows = skip_bad_rows
        self.event_key = event_key

    def call(self, source):
        return parse_kelvins_csv(source, self.skip_bad_rows, self.event_key)


class CleanRecords(Processor):
    """Applies the cleaning rules of a ``FeatureSchema``.

    The per-rule counts of the last call are kept in ``counts``.

    # Arguments
        schema: ``FeatureSchema``.
    """
    def __init__(self, schema):
        super(CleanRecords, self).__init__()
        self.schema = schema
        self.counts = None

    def call(self, records):
        cdms, self.counts = clean_with_counts(records, self.schema)
        return cdms


class GroupEvents(Processor):
    """Groups CDM records into events sorted by decreasing time to TCA.
    """
    def __init__(self):
        super(GroupEvents, self).__init__()

    def call(self, records):
        return group_events(records)


class FilterMinLength(Processor):
    """Keeps events with at least ``min_length`` CDMs.

    The event counts before and after the last call are kept in ``counts``.

    # Arguments
        min_length: Int.
    """
    def __init__(self, min_length=2):
        super(FilterMinLength, self).__init__()
        if min_length < 1:
            raise ValueError('``min_length`` must be at least 1', min_length)
        self.min_length = min_length
        self.counts = None

    def call(self, events):
        kept_events = filter_min_length(events, self.min_length)
        kept_cdms = sum([len(event) for event in kept_events])
        self.counts = {'events': len(events), 'kept_events': len(kept_events),
                       'kept_cdms': kept_cdms}
        return kept_events


class SplitTrainTest(Processor):
    """Splits events into a ``DatasetSplit``.

    # Arguments
        test_fraction: Float in ``[0, 1]``.
        seed: Int.
    """
    def __init__(self, test_fraction=0.15, seed=0):
        super(SplitTrainTest, self).__init__()
        self.test_fraction = test_fraction
        self.seed = seed

    def call(self, events):
        return split_train_test(events, self.test_fraction, self.seed)


class Standardize(Processor):
    """Standardizes feature vectors or whole events.

    # Arguments
        stats: ``NormStats``.
    """
    def __init__(self, stats):
        super(Standardize, self).__init__()
        self.stats = stats

    def call(self, values):
        if isinstance(values, list):
            return normalize_events(values, self.stats)
        return transform(values, self.stats)


class Destandardize(Processor):
    """Maps normalized feature vectors back to physical units.

    # Arguments
        stats: ``NormStats``.
    """
    def __init__(self, stats):
        super(Destandardize, self).__init__()
        self.stats = stats

    def call(self, values):
        return inverse_transform(values, self.stats)


class BuildTrainingPair(Processor):
    """Builds the one-step-shifted ``SequencePair`` of an event.
    """
    def __init__(self):
        super(BuildTrainingPair, self).__init__()

    def call(self, event):
        return build_training_pair(event)
