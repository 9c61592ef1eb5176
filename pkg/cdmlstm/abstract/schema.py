import json

CONTINUOUS = 'continuous'
CATEGORICAL = 'categorical'
MISSING_CHECKS = ('features', 'retained')


class FeatureSchema(object):
    """Ordered description of the CDM features modeled by the network.

    # Arguments
        features: List of ``(name, kind)`` tuples with ``kind`` either
            ``'continuous'`` or ``'categorical'``. Plain strings are taken
            as continuous features.
        dropped_columns: List of strings. Source columns excluded from
            modeling.
        sigma_limits: Dict mapping column name to a strict upper bound.
            Records whose value is larger than the bound are discarded.
        time_feature: String. Feature holding the time to TCA in days.
        event_key: String. Source column holding the event identifier.
        missing_check: String. ``'features'`` discards records with a
            missing schema feature; ``'retained'`` discards records with a
            missing value in any column that is not dropped.
        expected_width: Int or ``None``. If given the number of features
            is checked against it.

    # Properties
        names: List of strings in feature order.
        width: Int.
        continuous_mask: Boolean list, ``True`` for continuous features.

    # Raises
        ValueError: for duplicated names, unknown kinds, a time feature
            outside the schema or a width different from ``expected_width``.
    """
    def __init__(self, features, dropped_columns=None, sigma_limits=None,
                 time_feature='time_to_tca', event_key='event_id',
                 missing_check='features', expected_width=None):
        self.features = [self._to_feature(feature) for feature in features]
        self.dropped_columns = list(dropped_columns or [])
        self.sigma_limits = dict(sigma_limits or {})
        self.time_feature = time_feature
        self.event_key = event_key
        self.missing_check = missing_check
        self._name_to_arg = {}
        for feature_arg, (name, kind) in enumerate(self.features):
            if name in self._name_to_arg:
                raise ValueError('Duplicated feature name', name)
            self._name_to_arg[name] = feature_arg
        if time_feature not in self._name_to_arg:
            raise ValueError('Time feature is not a schema feature',
                             time_feature)
        if missing_check not in MISSING_CHECKS:
            raise ValueError('Invalid ``missing_check``', missing_check)
        if expected_width is not None and self.width != expected_width:
            raise ValueError('Schema has {} features, expected {}'.format(
                self.width, expected_width))

    def _to_feature(self, feature):
        if isinstance(feature, str):
            return (feature, CONTINUOUS)
        name, kind = feature
        if kind not in (CONTINUOUS, CATEGORICAL):
            raise ValueError('Invalid feature kind', kind)
        return (name, kind)

    @property
    def names(self):
        return [name for name, kind in self.features]

    @property
    def width(self):
        return len(self.features)

    @property
    def continuous_mask(self):
        return [kind == CONTINUOUS for name, kind in self.features]

    @property
    def time_arg(self):
        return self._name_to_arg[self.time_feature]

    def index(self, name):
        """Returns the position of feature ``name``.
        """
        if name not in self._name_to_arg:
            raise KeyError('Unknown feature: {}'.format(name))
        return self._name_to_arg[name]

    def retained_columns(self, columns):
        """Source columns that survive ``dropped_columns``.
        """
        dropped = set(self.dropped_columns + [self.event_key])
        return [column for column in columns if column not in dropped]

    def to_dict(self):
        return {'features': [list(feature) for feature in self.features],
                'dropped_columns': self.dropped_columns,
                'sigma_limits': self.sigma_limits,
                'time_feature': self.time_feature,
                'event_key': self.event_key,
                'missing_check': self.missing_check}

    @classmethod
    def from_dict(cls, description):
        features = [tuple(feature) if isinstance(feature, list) else feature
                    for feature in description['features']]
        return cls(features,
                   description.get('dropped_columns'),
                   description.get('sigma_limits'),
                   description.get('time_feature', 'time_to_tca'),
                   description.get('event_key', 'event_id'),
                   description.get('missing_check', 'features'))

    @classmethod
    def from_columns(cls, columns, dropped_columns, sigma_limits=None,
                     categorical=(), expected_width=None, **kwargs):
        """Builds the "every column minus the drops" schema of a table.

        # Arguments
            columns: List of source column names.
            dropped_columns: List of strings.
            sigma_limits: Dict.
            categorical: Iterable of column names flagged as categorical.
            expected_width: Int or ``None``.
        """
        event_key = kwargs.get('event_key', 'event_id')
        dropped = set(dropped_columns) | set([event_key])
        features = []
        for column in columns:
            if column in dropped:
                continue
            kind = CATEGORICAL if column in categorical else CONTINUOUS
            features.append((column, kind))
        return cls(features, dropped_columns, sigma_limits,
                   expected_width=expected_width, **kwargs)

    def save(self, filepath):
        with open(filepath, 'w') as filedata:
            json.dump(self.to_dict(), filedata, indent=2)

    @classmethod
    def load(cls, filepath):
        with open(filepath, 'r') as filedata:
            return cls.from_dict(json.load(filedata))

    def __eq__(self, other):
        if not isinstance(other, FeatureSchema):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self):
        return 'FeatureSchema(width={}, time_feature={})'.format(
            self.width, self.time_feature)
