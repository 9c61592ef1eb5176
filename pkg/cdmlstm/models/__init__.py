from .lstm_net import StackedLSTM
from .lstm_net import ForwardCache
from .lstm_net import init_params
from .lstm_net import param_count
from .lstm_net import weight_shapes
