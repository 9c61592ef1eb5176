from .losses import MaskedMSE
from .losses import mse_loss
from .optimizers import Adam
from .optimizers import AdamState
from .optimizers import adam_step
from .training import TrainConfig
from .training import TrainHistory
from .training import fit
from .gradients import check_gradients
