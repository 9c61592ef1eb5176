# imports are done directly to keep user's auto-complete clean

from .cdm import ParseKelvinsCSV
from .cdm import CleanRecords
from .cdm import GroupEvents
from .cdm import FilterMinLength
from .cdm import SplitTrainTest
from .cdm import Standardize
from .cdm import Destandardize
from .cdm import BuildTrainingPair

from .forecasting import PredictNext
from .forecasting import Rollout
from .forecasting import Summarize

from .standard import WrapOutput
