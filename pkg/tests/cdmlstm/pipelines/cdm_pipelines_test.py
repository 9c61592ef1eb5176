import io

import numpy as np
import pytest

from cdmlstm.abstract.schema import FeatureSchema
from cdmlstm.pipelines import PreprocessKelvins, SplitKelvins


CSV = ('event_id,time_to_tca,mission_id,miss_distance,t_sigma_r,risk\n'
       '1,6.5,3,1200.0,10.0,-10.2\n'
       '1,4.1,3,1100.0,12.0,-9.8\n'
       '1,5.2,3,1150.0,25.0,-9.9\n'
       '2,3.0,3,900.0,NaN,-8.0\n'
       '2,2.0,3,800.0,5.0,\n'
       '3,1.0,3,700.0,5.0,-7.0\n'
       '2,1.5,3,750.0,5.0,-7.5\n')


@pytest.fixture
def schema():
    return FeatureSchema(['time_to_tca', 'miss_distance', 't_sigma_r'],
                         ['mission_id'], {'t_sigma_r': 20.0})


def test_preprocess_counts(schema):
    preprocess = PreprocessKelvins(schema)
    events = preprocess(io.StringIO(CSV))
    assert [event.event_id for event in events] == ['1', '2']
    assert preprocess.counts == {
        'records': 7, 'dropped_missing': 1, 'dropped_sigma': 1, 'cdms': 5,
        'events': 3, 'kept_events': 2, 'kept_cdms': 4}


def test_preprocess_sorts_by_time_to_tca(schema):
    events = PreprocessKelvins(schema)(io.StringIO(CSV))
    for event in events:
        assert np.all(np.diff(event.times_to_tca) <= 0.0)
    assert np.allclose(events[1].values[:, 1], [800.0, 750.0])


def test_preprocess_with_retained_columns_check(schema):
    schema = FeatureSchema(schema.features, ['mission_id'],
                           {'t_sigma_r': 20.0}, missing_check='retained')
    preprocess = PreprocessKelvins(schema, min_length=1)
    events = preprocess(io.StringIO(CSV))
    assert preprocess.counts['dropped_missing'] == 2
    assert preprocess.counts['cdms'] == 4
    assert len(events) == 3


def test_split_kelvins(schema):
    split = SplitKelvins(schema, test_fraction=0.5, seed=0)(io.StringIO(CSV))
    assert len(split.train) == 1
    assert len(split.test) == 1
    event_ids = [event.event_id for event in split.train + split.test]
    assert sorted(event_ids) == ['1', '2']
