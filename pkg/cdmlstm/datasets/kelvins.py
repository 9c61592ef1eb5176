import os
import logging

from .utils import kelvins_schema, get_data_dir
from ..abstract import Loader
from ..backend.cdm import parse_kelvins_csv
from ..backend.cdm import clean_with_counts
from ..backend.cdm import group_events
from ..backend.cdm import filter_min_length
from ..backend.cdm import split_train_test

LOGGER = logging.getLogger(__name__)


class Kelvins(Loader):
    """Class for loading the Kelvins collision avoidance challenge CDMs.

    # Arguments
        path: String or ``None``. Full path to ``train_data.csv``; defaults
            to ``$CDMLSTM_DATA_DIR/kelvins/train_data.csv``.
        split: String. Valid option contain 'train', 'test' or 'all'.
        schema: ``FeatureSchema`` or ``None`` for ``kelvins_schema()``.
        test_fraction: Float. Fraction of events in the test split.
        seed: Int. Seed of the train/test permutation.
        min_length: Int. Events with fewer CDMs are discarded.
        skip_bad_rows: Boolean.

    # Properties
        counts: Dictionary with the cleaning counts of the last load,
            including ``events`` and ``kept_events``.

    # References
        -[Kelvins Collision Avoidance Challenge](https://kelvins.esa.int/\
            collision-avoidance-challenge/data/)
    """
    def __init__(self, path=None, split='train', schema=None,
                 test_fraction=0.15, seed=0, min_length=2,
                 skip_bad_rows=False):
        if path is None:
            path = os.path.join(get_data_dir(), 'kelvins', 'train_data.csv')
        if schema is None:
            schema = kelvins_schema()
        super(Kelvins, self).__init__(path, split, schema, 'Kelvins')
        self.test_fraction = test_fraction
        self.seed = seed
        self.min_length = min_length
        self.skip_bad_rows = skip_bad_rows
        self.counts = None

    def load_events(self):
        """Parses, cleans and groups every event with enough CDMs.
        """
        records = parse_kelvins_csv(
            self.path, self.skip_bad_rows, self.schema.event_key)
        cdms, counts = clean_with_counts(records, self.schema)
        events = group_events(cdms)
        kept_events = filter_min_length(events, self.min_length)
        counts['events'] = len(events)
        counts['kept_events'] = len(kept_events)
        counts['kept_cdms'] = sum([len(event) for event in kept_events])
        self.counts = counts
        LOGGER.info('Loaded %d events with at least %d CDMs',
                    len(kept_events), self.min_length)
        return kept_events

    def load_data(self):
        events = self.load_events()
        if self.split == 'all':
            return events
        split = split_train_test(events, self.test_fraction, self.seed)
        return split.train if self.split == 'train' else split.test
