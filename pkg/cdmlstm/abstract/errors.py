class CDMFormatError(ValueError):
    """Raised when a CDM table cannot be tokenized.

    # Arguments
        message: String.
        line_number: Int or ``None``. One-based line in the source file.
    """
    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = 'line {}: {}'.format(line_number, message)
        super(CDMFormatError, self).__init__(message)
        self.line_number = line_number


class SchemaMismatchError(ValueError):
    """Raised when a schema feature is absent from, or unusable in, a table.

    # Arguments
        feature: String. Name of the offending feature.
        message: String.
    """
    def __init__(self, feature, message=None):
        if message is None:
            message = 'Schema feature missing from source columns'
        super(SchemaMismatchError, self).__init__(
            '{}: {}'.format(message, feature))
        self.feature = feature


class NonFiniteError(ValueError):
    """Raised when an activation, gradient or loss stops being finite.

    # Arguments
        location: String e.g. ``'layer 2, step 7'`` or a tensor name.
    """
    def __init__(self, location, message='Non-finite value at'):
        super(NonFiniteError, self).__init__(
            '{} {}'.format(message, location))
        self.location = location


class TrainingDivergedError(NonFiniteError):
    """Raised by ``fit`` when the training loss stops being finite.

    # Arguments
        epoch: Int. Epoch in which the divergence happened.
        model: ``StackedLSTM`` restored to the last finite epoch.
        last_good_epoch: Int. Number of completed finite epochs.
    """
    def __init__(self, epoch, model, last_good_epoch):
        super(TrainingDivergedError, self).__init__(
            'epoch {}'.format(epoch), 'Training loss diverged in')
        self.epoch = epoch
        self.model = model
        self.last_good_epoch = last_good_epoch


class CheckpointError(ValueError):
    """Raised for unreadable, truncated or version-mismatched files."""


class ConfigError(ValueError):
    """Raised for unknown keys or unparseable values in a run config."""
