class Loader(object):
    """Abstract class for loading a CDM dataset.

    # Arguments
        path: String. Path to the data.
        split: String. Dataset split e.g. ``'train'``, ``'test'`` or
            ``'all'``.
        schema: ``FeatureSchema`` describing the modeled features.
        name: String. Dataset name.

    # Properties
        name: Str.
        path: Str.
        split: Str.
        schema: FeatureSchema.
        feature_names: List of strings.
        num_features: Int.

    # Methods
        load_data()
    """
    def __init__(self, path, split, schema, name):
        self.path = path
        self.split = split
        self.schema = schema
        self.name = name

    def load_data(self):
        """Abstract method for loading the dataset.

        # Returns
            List of ``Event``.
        """
        raise NotImplementedError()

    @property
    def name(self):
        return self._name

    @name.setter
    def name(self, name):
        self._name = name

    @property
    def path(self):
        return self._path

    @path.setter
    def path(self, path):
        self._path = path

    @property
    def split(self):
        return self._split

    @split.setter
    def split(self, split):
        if split not in ['train', 'test', 'all']:
            raise ValueError('Invalid split name', split)
        self._split = split

    @property
    def schema(self):
        return self._schema

    @schema.setter
    def schema(self, schema):
        self._schema = schema

    @property
    def feature_names(self):
        return self.schema.names

    @property
    def num_features(self):
        return self.schema.width
