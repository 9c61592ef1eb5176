import pytest

from cdmlstm.abstract.schema import FeatureSchema, CATEGORICAL


@pytest.fixture
def schema():
    return FeatureSchema(['time_to_tca', 'miss_distance', 't_sigma_r'],
                         ['mission_id'], {'t_sigma_r': 20.0})


def test_names_width_and_time_arg(schema):
    assert schema.names == ['time_to_tca', 'miss_distance', 't_sigma_r']
    assert schema.width == 3
    assert schema.time_arg == 0
    assert schema.index('t_sigma_r') == 2


def test_continuous_mask_flags_categorical_features():
    schema = FeatureSchema(
        ['time_to_tca', ('object_class', CATEGORICAL)])
    assert schema.continuous_mask == [True, False]


def test_duplicated_feature_raises():
    with pytest.raises(ValueError):
        FeatureSchema(['time_to_tca', 'time_to_tca'])


def test_time_feature_must_be_modeled():
    with pytest.raises(ValueError):
        FeatureSchema(['miss_distance'])


def test_expected_width_is_checked():
    with pytest.raises(ValueError):
        FeatureSchema(['time_to_tca', 'miss_distance'], expected_width=52)


def test_invalid_missing_check_raises():
    with pytest.raises(ValueError):
        FeatureSchema(['time_to_tca'], missing_check='some')


def test_unknown_index_raises(schema):
    with pytest.raises(KeyError):
        schema.index('relative_speed')


def test_retained_columns_skip_drops_and_event_key(schema):
    columns = ['event_id', 'time_to_tca', 'mission_id', 'risk']
    assert schema.retained_columns(columns) == ['time_to_tca', 'risk']


def test_from_columns_keeps_source_order():
    columns = ['event_id', 'time_to_tca', 'mission_id', 'risk', 'c_span']
    schema = FeatureSchema.from_columns(columns, ['mission_id'])
    assert schema.names == ['time_to_tca', 'risk', 'c_span']


def test_dict_round_trip(schema):
    assert FeatureSchema.from_dict(schema.to_dict()) == schema


def test_file_round_trip(schema, tmp_path):
    filepath = str(tmp_path / 'schema.json')
    schema.save(filepath)
    assert FeatureSchema.load(filepath) == schema
