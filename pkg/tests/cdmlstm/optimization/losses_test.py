import numpy as np
import pytest

from cdmlstm.abstract.messages import Batch
from cdmlstm.optimization.losses import MaskedMSE, mse_loss
from cdmlstm.optimization.losses.mse import masked_squared_error


@pytest.fixture
def padded():
    predictions = np.array([[[1.0, 2.0], [3.0, 4.0]],
                            [[0.0, 1.0], [9.0, 9.0]]])
    targets = np.array([[[1.0, 1.0], [1.0, 4.0]],
                        [[2.0, 1.0], [0.0, 0.0]]])
    mask = np.array([[True, True], [True, False]])
    return predictions, targets, mask


def test_squared_error_skips_padding(padded):
    squared_error, num_cells = masked_squared_error(*padded)
    assert squared_error == 1.0 + 4.0 + 4.0
    assert num_cells == 6


def test_loss_is_mean_over_valid_cells(padded):
    loss, d_predictions = mse_loss(*padded)
    assert np.isclose(loss, 9.0 / 6.0)
    predictions, targets, mask = padded
    expected = 2.0 * (predictions - targets) / 6.0
    assert np.allclose(d_predictions[mask], expected[mask])
    assert np.all(d_predictions[1, 1] == 0.0)


def test_loss_gradient_matches_finite_differences(padded):
    predictions, targets, mask = padded
    d_predictions = mse_loss(predictions, targets, mask)[1]
    epsilon = 1e-6
    for index in np.ndindex(predictions.shape):
        shifted = predictions.copy()
        shifted[index] = shifted[index] + epsilon
        numeric = (mse_loss(shifted, targets, mask)[0] -
                   mse_loss(predictions, targets, mask)[0]) / epsilon
        assert np.isclose(numeric, d_predictions[index], atol=1e-5)


def test_loss_without_valid_cells_raises(padded):
    predictions, targets, mask = padded
    with pytest.raises(ValueError):
        mse_loss(predictions, targets, np.zeros_like(mask))


def test_loss_with_mismatched_shapes_raises(padded):
    predictions, targets, mask = padded
    with pytest.raises(ValueError):
        mse_loss(predictions[:, :, :1], targets, mask)
    with pytest.raises(ValueError):
        mse_loss(predictions, targets, mask[:, :1])


def test_masked_mse_reads_batches(padded):
    predictions, targets, mask = padded
    batch = Batch(np.zeros_like(targets), targets, mask, np.array([2, 1]))
    loss = MaskedMSE()(predictions, batch)[0]
    assert loss == mse_loss(predictions, targets, mask)[0]
