import numpy as np
import pytest

from cdmlstm.optimization import check_gradients
from cdmlstm.optimization.gradients import relative_error


@pytest.mark.parametrize('seed', list(range(10)))
def test_backpropagation_matches_finite_differences(seed):
    result = check_gradients(seed)
    assert result.passed, result


def test_check_without_dropout():
    assert check_gradients(3, dropout_rate=0.0).passed


def test_check_with_single_layer():
    assert check_gradients(4, num_layers=1, num_steps=3).passed


def test_corrupted_gradients_fail():
    result = check_gradients(0, corrupt=True)
    assert not result.passed
    assert result.worst_tensor == 'lstm_1/W_hh'
    assert repr(result).startswith('FAIL')
    assert result.max_error > 1e-2


def test_report_lists_every_tensor():
    result = check_gradients(1)
    assert list(result.errors.keys())[0] == 'lstm_1/W_ih'
    assert list(result.errors.keys())[-1] == 'head/b'
    assert repr(result).startswith('PASS')


def test_relative_error_uses_floor():
    analytic = np.array([0.0, 1.0, 1e-9])
    numeric = np.array([0.0, 1.1, 2e-9])
    errors = relative_error(analytic, numeric)
    assert errors[0] == 0.0
    assert np.isclose(errors[1], 0.1 / 1.1)
    assert np.isclose(errors[2], 1e-9 / 1e-6)
