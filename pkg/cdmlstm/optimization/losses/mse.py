import numpy as np


def masked_squared_error(predictions, targets, mask):
    """Sum of squared errors over valid cells and the number of such cells.

    # Arguments
        predictions: Numpy array ``(batch, time, features)``.
        targets: Numpy array ``(batch, time, features)``.
        mask: Boolean numpy array ``(batch, time)``.

    # Returns
        Float and Int.
    """
    if predictions.shape != targets.shape:
        raise ValueError('Prediction and target shapes differ',
                         predictions.shape, targets.shape)
    if mask.shape != predictions.shape[:2]:
        raise ValueError('Mask shape does not match', mask.shape)
    difference = np.where(mask[..., None], predictions - targets, 0.0)
    num_cells = int(mask.sum()) * predictions.shape[2]
    return float(np.sum(difference ** 2)), num_cells


def mse_loss(predictions, targets, mask):
    """Mean squared error over the valid cells of a padded batch.

    # Arguments
        predictions: Numpy array ``(batch, time, features)``.
        targets: Numpy array ``(batch, time, features)``.
        mask: Boolean numpy array ``(batch, time)``.

    # Returns
        Loss as a float and its gradient w.r.t. ``predictions``, zero on
        padded cells.

    # Raises
        ValueError: if no cell is valid.
    """
    squared_error, num_cells = masked_squared_error(
        predictions, targets, mask)
    if num_cells == 0:
        raise ValueError('Mean squared error needs at least one valid cell')
    difference = np.where(mask[..., None], predictions - targets, 0.0)
    d_predictions = 2.0 * difference / num_cells
    return squared_error / num_cells, d_predictions


class MaskedMSE(object):
    """Callable wrapper of ``mse_loss`` for padded ``Batch`` objects.
    """
    def __call__(self, predictions, batch):
        return mse_loss(predictions, batch.targets, batch.mask)
