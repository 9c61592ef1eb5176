from .forecasting import EvalReport
from .forecasting import persistence_baseline
from .forecasting import evaluate_model
from .forecasting import compare
