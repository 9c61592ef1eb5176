from .cdm import PreprocessKelvins
from .cdm import SplitKelvins

from .forecasting import PredictNextCDM
from .forecasting import RolloutEvent
