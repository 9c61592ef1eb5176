import json
import logging
import struct
from collections import OrderedDict

import numpy as np

from ..abstract.errors import CheckpointError
from ..abstract.messages import Event, NormStats
from ..abstract.schema import FeatureSchema
from ..models.lstm_net import StackedLSTM

LOGGER = logging.getLogger(__name__)

CHECKPOINT_MAGIC = b'CDMLSTM'
CHECKPOINT_VERSION = 1
TENSOR_DTYPE = '<f4'
DATASET_MAGIC = b'CDMDATA'
DATASET_VERSION = 1
DATASET_DTYPE = '<f8'


def _read_exactly(filedata, num_bytes, what):
    data = filedata.read(num_bytes)
    if len(data) != num_bytes:
        raise CheckpointError('Truncated file while reading {}'.format(what))
    return data


def save_checkpoint(filepath, model, stats, schema, seed=0, epoch=0,
                    split=None):
    """Writes model weights, normalization and schema to a binary file.

    Layout: the 7 bytes ``CDMLSTM``, a little-endian ``uint16`` version, a
    little-endian ``uint32`` header length, a UTF-8 JSON header and the
    tensors as little-endian float32 in the order of ``model.weights``.

    # Arguments
        filepath: String.
        model: ``StackedLSTM``.
        stats: ``NormStats``.
        schema: ``FeatureSchema``.
        seed: Int. Training seed.
        epoch: Int. Completed training epochs.
        split: Dictionary with the ``test_fraction`` and ``min_length``
            the training split was built with, or ``None``.

    # Raises
        CheckpointError: if a weight is not finite in single precision.
    """
    for name, tensor in model.weights.items():
        with np.errstate(over='ignore'):
            stored = np.asarray(tensor, dtype=TENSOR_DTYPE)
        if not np.all(np.isfinite(stored)):
            raise CheckpointError(
                'Weight {} is not finite in single precision'.format(name))
    tensors = [{'name': name, 'shape': list(tensor.shape)}
               for name, tensor in model.weights.items()]
    header = {'schema': schema.to_dict(), 'stats': stats.to_dict(),
              'model': model.config, 'gate_order': model.gate_order,
              'seed': seed, 'epoch': epoch, 'split': split,
              'dtype': TENSOR_DTYPE, 'tensors': tensors}
    header = json.dumps(header, sort_keys=True).encode('utf-8')
    with open(filepath, 'wb') as filedata:
        filedata.write(CHECKPOINT_MAGIC)
        filedata.write(struct.pack('<H', CHECKPOINT_VERSION))
        filedata.write(struct.pack('<I', len(header)))
        filedata.write(header)
        for tensor in model.weights.values():
            filedata.write(np.ascontiguousarray(
                tensor, dtype=TENSOR_DTYPE).tobytes())
    LOGGER.info('Saved checkpoint at epoch %d to %s', epoch, filepath)


def load_checkpoint(filepath):
    """Reads a file written by ``save_checkpoint``.

    # Arguments
        filepath: String.

    # Returns
        Dictionary with keys ``model`` (``StackedLSTM``), ``stats``,
        ``schema``, ``seed``, ``epoch`` and ``split``.

    # Raises
        CheckpointError: for a wrong magic, an unsupported version or a
            truncated file.
    """
    with open(filepath, 'rb') as filedata:
        magic = filedata.read(len(CHECKPOINT_MAGIC))
        if magic != CHECKPOINT_MAGIC:
            raise CheckpointError('Not a checkpoint file: {}'.format(filepath))
        version = struct.unpack('<H', _read_exactly(filedata, 2, 'version'))[0]
        if version != CHECKPOINT_VERSION:
            raise CheckpointError('Checkpoint version {} unsupported, '
                                  'expected {}'.format(
                                      version, CHECKPOINT_VERSION))
        header_size = struct.unpack(
            '<I', _read_exactly(filedata, 4, 'header size'))[0]
        header = json.loads(
            _read_exactly(filedata, header_size, 'header').decode('utf-8'))
        if header['gate_order'] != 'ifgo':
            raise CheckpointError('Unknown gate order', header['gate_order'])
        weights = OrderedDict()
        for tensor in header['tensors']:
            shape = tuple(tensor['shape'])
            num_bytes = 4 * int(np.prod(shape, dtype=np.int64))
            data = _read_exactly(filedata, num_bytes, tensor['name'])
            values = np.frombuffer(data, dtype=TENSOR_DTYPE).reshape(shape)
            weights[tensor['name']] = values.astype(np.float64)
        if len(filedata.read(1)) != 0:
            raise CheckpointError('Trailing bytes after the last tensor')
    try:
        model = StackedLSTM(weights=weights, **header['model'])
    except ValueError as error:
        raise CheckpointError('Inconsistent checkpoint: {}'.format(error))
    return {'model': model,
            'stats': NormStats.from_dict(header['stats']),
            'schema': FeatureSchema.from_dict(header['schema']),
            'seed': header['seed'], 'epoch': header['epoch'],
            'split': header.get('split')}


def save_dataset(filepath, events, schema):
    """Writes cleaned events as a columnar float64 file.

    Layout: the line ``CDMDATA 1``, a line with the byte length of the
    JSON header, the UTF-8 JSON header followed by a newline and the
    ``(num_records, num_features)`` little-endian float64 matrix in
    row-major order. Records are stored event after event.
    """
    rows = [event.values for event in events if len(event) > 0]
    if len(rows) > 0:
        values = np.concatenate(rows, axis=0)
    else:
        values = np.zeros((0, schema.width))
    event_ids = [event.event_id for event in events]
    lengths = [len(event) for event in events]
    header = {'schema': schema.to_dict(), 'num_records': int(len(values)),
              'num_features': schema.width, 'event_ids': event_ids,
              'event_lengths': lengths, 'dtype': DATASET_DTYPE}
    header = json.dumps(header, sort_keys=True).encode('utf-8')
    with open(filepath, 'wb') as filedata:
        filedata.write(DATASET_MAGIC + b' ' +
                       str(DATASET_VERSION).encode('ascii') + b'\n')
        filedata.write(str(len(header)).encode('ascii') + b'\n')
        filedata.write(header + b'\n')
        filedata.write(np.ascontiguousarray(
            values, dtype=DATASET_DTYPE).tobytes())
    LOGGER.info('Saved %d events (%d records) to %s',
                len(events), len(values), filepath)


def load_dataset(filepath):
    """Reads a file written by ``save_dataset``.

    # Returns
        List of ``Event`` and the ``FeatureSchema``.
    """
    with open(filepath, 'rb') as filedata:
        first_line = filedata.readline().rstrip(b'\n').split(b' ')
        if first_line[0] != DATASET_MAGIC:
            raise CheckpointError('Not a dataset file: {}'.format(filepath))
        if len(first_line) != 2 or first_line[1] != str(
                DATASET_VERSION).encode('ascii'):
            raise CheckpointError('Unsupported dataset version', first_line)
        try:
            header_size = int(filedata.readline())
        except ValueError:
            raise CheckpointError('Invalid dataset header size')
        header = json.loads(
            _read_exactly(filedata, header_size, 'header').decode('utf-8'))
        _read_exactly(filedata, 1, 'header terminator')
        shape = (header['num_records'], header['num_features'])
        data = _read_exactly(filedata, 8 * shape[0] * shape[1], 'records')
    values = np.frombuffer(data, dtype=DATASET_DTYPE).reshape(shape)
    values = values.astype(np.float64)
    schema = FeatureSchema.from_dict(header['schema'])
    events, record_arg = [], 0
    for event_id, length in zip(header['event_ids'], header['event_lengths']):
        event_values = values[record_arg:record_arg + length]
        events.append(Event.from_values(
            event_id, event_values, schema.time_arg))
        record_arg = record_arg + length
    return events, schema
