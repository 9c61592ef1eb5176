class Processor(object):
    """Abstract class for creating a processing unit.

    A processor wraps one step of the CDM workflow (parsing, cleaning,
    standardizing, predicting) behind a callable interface so steps can be
    chained with ``SequentialProcessor``.

    # Arguments
        name: String indicating name of the processing unit.

    # Methods
        call()

    # Example
    ```python
    class DropShortEvents(Processor):
        def __init__(self, min_length=2):
            super(DropShortEvents, self).__init__()
            self.min_length = min_length

        def call(self, events):
            return [event for event in events
                    if len(event) >= self.min_length]
    ```
    """
    def __init__(self, name=None):
        self.name = name

    @property
    def name(self):
        return self._name

    @name.setter
    def name(self, name):
        if name is None:
            name = self.__class__.__name__
        self._name = name

    def call(self, *args):
        """Custom user's logic should be implemented here.
        """
        raise NotImplementedError

    def __call__(self, *args, **kwargs):
        return self.call(*args, **kwargs)


class SequentialProcessor(object):
    """Chains processors; the outputs of one are the inputs of the next.

    Tuples returned by a processor are unpacked as positional arguments of
    the following processor.

    # Arguments
        processors: List of instantiated ``Processor`` children.
        name: String indicating name of the pipeline.

    # Methods
        add()
        remove()
        pop()
        insert()
        get_processor()

    # Example
    ```python
    preprocess = SequentialProcessor()
    preprocess.add(pr.ParseKelvinsCSV())
    preprocess.add(pr.CleanRecords(schema))
    preprocess.add(pr.GroupEvents())
    events = preprocess(open('train_data.csv', 'rb'))
    ```
    """
    def __init__(self, processors=None, name=None):
        self.processors = []
        if processors is not None:
            [self.add(processor) for processor in processors]
        self.name = name

    @property
    def name(self):
        return self._name

    @name.setter
    def name(self, name):
        if name is None:
            name = self.__class__.__name__
        self._name = name

    def add(self, processor):
        """Appends a processor to the end of the chain.

        # Arguments
            processor: An instantiated child class of ``Processor``.
        """
        self.processors.append(processor)

    def __call__(self, *args, **kwargs):
        if len(self.processors) == 0:
            raise ValueError('``SequentialProcessor`` has no processors')
        args = self.processors[0](*args, **kwargs)
        for processor in self.processors[1:]:
            if isinstance(args, tuple):
                args = processor(*args)
            else:
                args = processor(args)
        return args

    def remove(self, name):
        """Removes every processor called ``name``.

        # Arguments
            name: String.
        """
        self.processors = [processor for processor in self.processors
                           if processor.name != name]

    def pop(self, index=-1):
        """Removes and returns the processor at ``index``.

        # Arguments
            index: Int.
        """
        return self.processors.pop(index)

    def insert(self, index, processor):
        """Inserts ``processor`` at ``index``.

        # Arguments
            index: Int.
            processor: An instantiated child class of ``Processor``.
        """
        return self.processors.insert(index, processor)

    def get_processor(self, name):
        """Returns the first processor called ``name`` or ``None``.

        # Arguments
            name: String.
        """
        for processor in self.processors:
            if processor.name == name:
                return processor
