from .errors import CDMFormatError, SchemaMismatchError, NonFiniteError
from .errors import TrainingDivergedError, CheckpointError, ConfigError
from .schema import FeatureSchema
from .messages import CdmRecord, Event, DatasetSplit, NormStats
from .messages import SequencePair, Batch
from .messages import PredictionDistribution, RolloutResult
from .processor import Processor, SequentialProcessor
from .loader import Loader
from .sequence import PaddedSequence
