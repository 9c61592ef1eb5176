import csv
import io
import logging
from collections import OrderedDict

import numpy as np
import pandas as pd

from ..abstract.errors import CDMFormatError, SchemaMismatchError
from ..abstract.messages import CdmRecord, Event, DatasetSplit

LOGGER = logging.getLogger(__name__)
MISSING_TOKENS = ('', 'NaN', 'nan')


def _open_text(source):
    if isinstance(source, str):
        return open(source, 'r', encoding='utf-8', newline='')
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding='utf-8', newline='')


def _read_rows(filedata, skip_bad_rows):
    reader = csv.reader(filedata)
    header = next(reader, None)
    if header is None or header == [] or header == ['']:
        raise CDMFormatError('Missing header', 1)
    header = [name.strip() for name in header]
    rows, bad_lines = [], []
    for row in reader:
        if len(row) == 0:
            continue
        if len(row) != len(header):
            message = 'Expected {} columns, found {}'.format(
                len(header), len(row))
            if not skip_bad_rows:
                raise CDMFormatError(message, reader.line_num)
            LOGGER.warning('Skipping line %d: %s', reader.line_num, message)
            bad_lines.append(reader.line_num)
            continue
        rows.append(row)
    return header, rows, bad_lines


def _type_column(column):
    is_missing = column.isin(MISSING_TOKENS)
    numeric = pd.to_numeric(column.where(~is_missing), errors='coerce')
    numeric = numeric.replace([np.inf, -np.inf], np.nan)
    num_present = int((~is_missing).sum())
    num_numeric = int(numeric.notna().sum())
    if num_present == 0 or (2 * num_numeric) >= num_present:
        return numeric.astype(np.float64)
    return column.where(~is_missing, np.nan)


def parse_kelvins_csv(source, skip_bad_rows=False, event_key='event_id'):
    """Parses a Kelvins-format CDM table keeping every source column.

    Columns whose cells are mostly numbers become float columns where
    unparseable cells are missing (``NaN``); the remaining columns keep
    their tokens. Cleaning is never done here.

    # Arguments
        source: Binary or text stream, or a file path.
        skip_bad_rows: Boolean. If ``True`` rows with a wrong number of
            columns are skipped and reported in ``frame.attrs['bad_lines']``,
            otherwise the first one raises.
        event_key: String. Column kept verbatim as string identifiers.

    # Returns
        Pandas ``DataFrame`` with one row per record in source order.

    # Raises
        CDMFormatError: for a missing header or a malformed row.
    """
    filedata = _open_text(source)
    try:
        header, rows, bad_lines = _read_rows(filedata, skip_bad_rows)
    finally:
        if isinstance(source, str):
            filedata.close()
    frame = pd.DataFrame(rows, columns=header, dtype=object)
    for name in header:
        if name == event_key:
            frame[name] = frame[name].astype(str)
        else:
            frame[name] = _type_column(frame[name].astype(str))
    frame.attrs['bad_lines'] = bad_lines
    LOGGER.info('Parsed %d records with %d columns', len(frame), len(header))
    return frame


def _check_columns(frame, schema):
    if schema.event_key not in frame.columns:
        raise SchemaMismatchError(schema.event_key, 'Event key missing')
    for name in schema.names + list(schema.sigma_limits.keys()):
        if name not in frame.columns:
            raise SchemaMismatchError(name)


def _coerce_numeric(frame, names):
    """Turns unparseable or infinite cells of ``names`` into ``NaN``.
    """
    frame = frame.copy()
    for name in names:
        was_missing = frame[name].isna()
        numeric = pd.to_numeric(frame[name], errors='coerce')
        numeric = numeric.replace([np.inf, -np.inf], np.nan)
        num_coerced = int((numeric.isna() & ~was_missing).sum())
        if num_coerced > 0:
            LOGGER.warning('%d cells of %s are not numbers; treated as '
                           'missing', num_coerced, name)
        frame[name] = numeric.astype(np.float64)
    return frame


def _missing_columns(frame, schema):
    if schema.missing_check == 'features':
        return schema.names
    return schema.retained_columns(list(frame.columns))


def _abnormal_sigma_mask(frame, sigma_limits):
    abnormal = np.zeros(len(frame), dtype=bool)
    for name, limit in sigma_limits.items():
        abnormal = abnormal | (frame[name].to_numpy() > limit)
    return abnormal


def clean_with_counts(records, schema):
    """Applies the cleaning rules and reports how many records each drops.

    # Arguments
        records: ``DataFrame`` returned by ``parse_kelvins_csv``.
        schema: ``FeatureSchema``.

    # Returns
        List of ``CdmRecord`` and a dictionary with the keys ``records``,
        ``dropped_missing``, ``dropped_sigma`` and ``cdms``.

    # Raises
        SchemaMismatchError: if a schema feature is absent.
    """
    _check_columns(records, schema)
    records = _coerce_numeric(
        records, schema.names + list(schema.sigma_limits.keys()))
    is_missing = records[_missing_columns(records, schema)].isna().any(axis=1)
    complete = records[~is_missing.to_numpy()]
    is_abnormal = _abnormal_sigma_mask(complete, schema.sigma_limits)
    survivors = complete[~is_abnormal]
    values = survivors[schema.names].to_numpy(dtype=np.float64)
    event_ids = survivors[schema.event_key].astype(str).tolist()
    time_arg = schema.time_arg
    cdms = [CdmRecord(event_id, row, time_arg)
            for event_id, row in zip(event_ids, values)]
    counts = {'records': len(records),
              'dropped_missing': int(is_missing.sum()),
              'dropped_sigma': int(is_abnormal.sum()),
              'cdms': len(cdms)}
    LOGGER.info('Cleaning kept %d of %d records (%d missing, %d sigma)',
                counts['cdms'], counts['records'],
                counts['dropped_missing'], counts['dropped_sigma'])
    return cdms, counts


def clean(records, schema):
    """Drops excluded columns, incomplete records and abnormal variances.

    # Arguments
        records: ``DataFrame`` returned by ``parse_kelvins_csv``.
        schema: ``FeatureSchema``.

    # Returns
        List of ``CdmRecord`` projected onto the schema feature order.
    """
    return clean_with_counts(records, schema)[0]


def group_events(records):
    """Groups CDMs by event, ordering each event by decreasing time to TCA.

    Events are returned in order of first appearance and ties keep their
    source order.

    # Arguments
        records: List of ``CdmRecord``.

    # Returns
        List of ``Event``.
    """
    event_to_cdms = OrderedDict()
    for record in records:
        event_to_cdms.setdefault(record.event_id, []).append(record)
    events = []
    for event_id, cdms in event_to_cdms.items():
        cdms = sorted(cdms, key=lambda cdm: -cdm.time_to_tca)
        events.append(Event(event_id, cdms))
    return events


def filter_min_length(events, min_length=2):
    """Keeps events with at least ``min_length`` CDMs.

    # Arguments
        events: List of ``Event``.
        min_length: Int.

    # Returns
        List of ``Event``.
    """
    if min_length < 1:
        raise ValueError('``min_length`` must be at least 1', min_length)
    return [event for event in events if len(event) >= min_length]


def split_train_test(events, test_fraction=0.15, seed=0):
    """Splits events with a permutation keyed by ``seed``.

    The first ``ceil(test_fraction * num_events)`` permuted events form the
    test split and the rest the train split.

    # Arguments
        events: List of ``Event``.
        test_fraction: Float in ``[0, 1]``.
        seed: Int.

    # Returns
        ``DatasetSplit``.
    """
    if not (0.0 <= test_fraction <= 1.0):
        raise ValueError('``test_fraction`` must be in [0, 1]', test_fraction)
    num_events = len(events)
    # rounding keeps e.g. 0.15 * 100 from becoming 16 test events
    num_test = int(np.ceil(round(test_fraction * num_events, 9)))
    permutation = np.random.default_rng(seed).permutation(num_events)
    test = [events[event_arg] for event_arg in permutation[:num_test]]
    train = [events[event_arg] for event_arg in permutation[num_test:]]
    return DatasetSplit(train, test, seed, test_fraction)
