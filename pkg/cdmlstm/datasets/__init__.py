from .utils import get_feature_names
from .utils import kelvins_schema
from .kelvins import Kelvins
from .synthetic import linear_trend_events
from .synthetic import linear_noise_events
from .synthetic import countdown_events
