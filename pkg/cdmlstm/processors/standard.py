from ..abstract import Processor


class WrapOutput(Processor):
    """Packs the outputs of a pipeline into a dictionary.

    # Arguments
        keys: List of strings, one per positional input and in the same
            order e.g. ``['distribution', 'summary']``.
    """
    def __init__(self, keys):
        super(WrapOutput, self).__init__()
        if not isinstance(keys, list):
            raise ValueError('``keys`` must be a list')
        self.keys = keys

    def call(self, *args):
        if len(args) != len(self.keys):
            raise ValueError('Expected {} outputs, got {}'.format(
                len(self.keys), len(args)))
        return dict(zip(self.keys, args))
