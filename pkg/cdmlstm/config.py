import configparser
import logging

from .abstract.errors import ConfigError
from .optimization.training import TrainConfig

LOGGER = logging.getLogger(__name__)
SECTION = 'run'


def _to_bool(value):
    lowered = value.strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError('Not a boolean: {}'.format(value))


def _to_optional_float(value):
    if value.strip().lower() in ('none', ''):
        return None
    return float(value)


DEFAULTS = {'epochs': 500, 'batch_size': 128, 'learning_rate': 1e-4,
            'beta_1': 0.9, 'beta_2': 0.999, 'epsilon': 1e-8,
            'dropout_rate': 0.2, 'hidden': 256, 'layers': 2, 'seed': 0,
            'test_fraction': 0.15, 'min_length': 2, 'clip_norm': None,
            'checkpoint_every': 0, 'samples': 50, 'max_steps': 30,
            'threads': 1, 'heldout': True}

PARSERS = {'epochs': int, 'batch_size': int, 'learning_rate': float,
           'beta_1': float, 'beta_2': float, 'epsilon': float,
           'dropout_rate': float, 'hidden': int, 'layers': int, 'seed': int,
           'test_fraction': float, 'min_length': int,
           'clip_norm': _to_optional_float, 'checkpoint_every': int,
           'samples': int, 'max_steps': int, 'threads': int,
           'heldout': _to_bool}


class RunConfig(object):
    """Training, split and inference settings of a run.

    Files hold ``key = value`` lines; ``#`` starts a comment. Keys not in
    ``DEFAULTS`` are rejected.

    # Arguments
        **values: Settings overriding ``DEFAULTS``.

    # Raises
        ConfigError: for unknown keys.
    """
    def __init__(self, **values):
        self.values = dict(DEFAULTS)
        self.update(**values)

    def update(self, **values):
        """Overrides settings; ``None`` values are ignored so unset
        command-line flags keep file values.
        """
        for key, value in values.items():
            if key not in DEFAULTS:
                raise ConfigError('Unknown config key: {}'.format(key))
            if value is not None:
                self.values[key] = value
        return self

    def __getattr__(self, key):
        values = self.__dict__.get('values', {})
        if key in values:
            return values[key]
        raise AttributeError(key)

    @classmethod
    def from_string(cls, text, source='<string>'):
        parser = configparser.ConfigParser(
            comment_prefixes=('#',), inline_comment_prefixes=('#',),
            delimiters=('=',), interpolation=None)
        parser.optionxform = str
        try:
            parser.read_string('[{}]\n{}'.format(SECTION, text), source)
        except configparser.Error as error:
            raise ConfigError('Invalid config {}: {}'.format(source, error))
        values = {}
        for key, value in parser.items(SECTION):
            if key not in PARSERS:
                raise ConfigError('Unknown config key in {}: {}'.format(
                    source, key))
            try:
                values[key] = PARSERS[key](value)
            except ValueError:
                raise ConfigError('Invalid value for {} in {}: {}'.format(
                    key, source, value))
        return cls(**values)

    @classmethod
    def load(cls, filepath):
        with open(filepath, 'r') as filedata:
            config = cls.from_string(filedata.read(), filepath)
        LOGGER.info('Loaded run config %s', filepath)
        return config

    def to_string(self):
        lines = []
        for key in DEFAULTS.keys():
            value = self.values[key]
            if value is None:
                value = 'none'
            elif isinstance(value, bool):
                value = str(value).lower()
            lines.append('{} = {}'.format(key, value))
        return '\n'.join(lines) + '\n'

    def save(self, filepath):
        with open(filepath, 'w') as filedata:
            filedata.write(self.to_string())

    def train_config(self, verbose=0):
        """Builds the ``TrainConfig`` of these settings.
        """
        return TrainConfig(
            epochs=self.epochs, batch_size=self.batch_size,
            learning_rate=self.learning_rate, beta_1=self.beta_1,
            beta_2=self.beta_2, epsilon=self.epsilon,
            dropout_rate=self.dropout_rate, hidden=self.hidden,
            num_layers=self.layers, seed=self.seed,
            clip_norm=self.clip_norm,
            checkpoint_every=self.checkpoint_every,
            heldout=self.heldout, verbose=verbose)

    def __eq__(self, other):
        if not isinstance(other, RunConfig):
            return NotImplemented
        return self.values == other.values

    def __repr__(self):
        return 'RunConfig({})'.format(self.values)
