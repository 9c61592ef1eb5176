from .mse import MaskedMSE
from .mse import mse_loss
from .mse import masked_squared_error
