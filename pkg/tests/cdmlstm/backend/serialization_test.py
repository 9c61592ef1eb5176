import json
import struct

import numpy as np
import pytest

from cdmlstm.abstract.errors import CheckpointError
from cdmlstm.abstract.messages import Event, NormStats
from cdmlstm.abstract.schema import FeatureSchema
from cdmlstm.backend.serialization import save_checkpoint, load_checkpoint
from cdmlstm.backend.serialization import save_dataset, load_dataset
from cdmlstm.models import init_params


@pytest.fixture
def schema():
    return FeatureSchema(['time_to_tca', 'miss_distance',
                          ('mission_id', 'categorical')])


@pytest.fixture
def stats():
    return NormStats([3.0, 500.0, 0.0], [1.5, 120.0, 1.0],
                     [True, True, False])


@pytest.fixture
def model():
    return init_params(input_dim=3, hidden=4, num_layers=2, seed=5,
                       dropout_rate=0.1)


@pytest.fixture
def checkpoint_path(tmp_path, model, stats, schema):
    filepath = str(tmp_path / 'model.ckpt')
    save_checkpoint(filepath, model, stats, schema, seed=11, epoch=42)
    return filepath


def test_checkpoint_starts_with_magic_and_version(checkpoint_path):
    with open(checkpoint_path, 'rb') as filedata:
        data = filedata.read()
    assert data[:7] == b'CDMLSTM'
    assert struct.unpack('<H', data[7:9])[0] == 1
    header_size = struct.unpack('<I', data[9:13])[0]
    header = json.loads(data[13:13 + header_size].decode('utf-8'))
    assert header['gate_order'] == 'ifgo'
    assert header['dtype'] == '<f4'
    assert [tensor['name'] for tensor in header['tensors']][0] == (
        'lstm_1/W_ih')
    num_values = sum([int(np.prod(tensor['shape']))
                      for tensor in header['tensors']])
    assert len(data) == 13 + header_size + 4 * num_values


def test_checkpoint_round_trip(checkpoint_path, model, stats, schema):
    checkpoint = load_checkpoint(checkpoint_path)
    stored = model.to_storage_precision()
    for name, tensor in stored.weights.items():
        assert np.array_equal(checkpoint['model'].weights[name], tensor)
    assert checkpoint['model'].config == model.config
    assert checkpoint['stats'] == stats
    assert checkpoint['schema'] == schema
    assert checkpoint['seed'] == 11
    assert checkpoint['epoch'] == 42


def test_split_parameters_round_trip(tmp_path, model, stats, schema):
    filepath = str(tmp_path / 'model.ckpt')
    split = {'test_fraction': 0.05, 'min_length': 3}
    save_checkpoint(filepath, model, stats, schema, split=split)
    assert load_checkpoint(filepath)['split'] == split


def test_weights_beyond_single_precision_are_rejected(
        tmp_path, model, stats, schema):
    weights = model.weights
    weights['head/W'][0, 0] = 1e200
    filepath = str(tmp_path / 'model.ckpt')
    with pytest.raises(CheckpointError) as error:
        save_checkpoint(filepath, model.copy(weights), stats, schema)
    assert 'head/W' in str(error.value)


def test_loaded_model_predicts_like_stored_model(checkpoint_path, model):
    inputs = np.random.default_rng(0).normal(size=(2, 3, 3))
    loaded = load_checkpoint(checkpoint_path)['model']
    expected = model.to_storage_precision().predict(inputs)
    assert np.array_equal(loaded.predict(inputs), expected)


def _rewrite(filepath, function):
    with open(filepath, 'rb') as filedata:
        data = filedata.read()
    with open(filepath, 'wb') as filedata:
        filedata.write(function(data))


def test_bad_magic_is_rejected(checkpoint_path):
    _rewrite(checkpoint_path, lambda data: b'NOTLSTM' + data[7:])
    with pytest.raises(CheckpointError):
        load_checkpoint(checkpoint_path)


def test_unsupported_version_is_rejected(checkpoint_path):
    _rewrite(checkpoint_path,
             lambda data: data[:7] + struct.pack('<H', 2) + data[9:])
    with pytest.raises(CheckpointError) as error:
        load_checkpoint(checkpoint_path)
    assert 'version 2' in str(error.value)


def test_truncated_checkpoint_is_rejected(checkpoint_path):
    _rewrite(checkpoint_path, lambda data: data[:-3])
    with pytest.raises(CheckpointError):
        load_checkpoint(checkpoint_path)


def test_trailing_bytes_are_rejected(checkpoint_path):
    _rewrite(checkpoint_path, lambda data: data + b'\x00')
    with pytest.raises(CheckpointError):
        load_checkpoint(checkpoint_path)


def test_checkpoint_errors_are_value_errors(checkpoint_path):
    _rewrite(checkpoint_path, lambda data: b'')
    with pytest.raises(ValueError):
        load_checkpoint(checkpoint_path)


@pytest.fixture
def events():
    return [Event.from_values('a', [[3.0, 400.0, 1.0], [2.0, 410.0, 1.0]]),
            Event.from_values('b', [[5.0, 900.0, 2.0], [4.0, 850.0, 2.0],
                                    [3.5, 800.0, 2.0]])]


def test_dataset_layout(tmp_path, events, schema):
    filepath = str(tmp_path / 'events.cdmdata')
    save_dataset(filepath, events, schema)
    with open(filepath, 'rb') as filedata:
        assert filedata.readline() == b'CDMDATA 1\n'
        header_size = int(filedata.readline())
        header = json.loads(filedata.read(header_size).decode('utf-8'))
        assert filedata.read(1) == b'\n'
        body = filedata.read()
    assert header['num_records'] == 5
    assert header['event_lengths'] == [2, 3]
    values = np.frombuffer(body, dtype='<f8').reshape(5, 3)
    assert np.array_equal(values[2], [5.0, 900.0, 2.0])


def test_dataset_round_trip(tmp_path, events, schema):
    filepath = str(tmp_path / 'events.cdmdata')
    save_dataset(filepath, events, schema)
    loaded_events, loaded_schema = load_dataset(filepath)
    assert loaded_schema == schema
    assert [event.event_id for event in loaded_events] == ['a', 'b']
    for event, loaded_event in zip(events, loaded_events):
        assert np.array_equal(event.values, loaded_event.values)


def test_dataset_with_wrong_magic(tmp_path):
    filepath = str(tmp_path / 'events.cdmdata')
    with open(filepath, 'wb') as filedata:
        filedata.write(b'CDMLSTM 1\n2\n{}\n')
    with pytest.raises(CheckpointError):
        load_dataset(filepath)
