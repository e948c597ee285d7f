import numpy as np

from src.numerics.gradcheck import gradient_check, parameter_gradient_check, relative_error


def test_square_at_three():
    report = gradient_check(lambda x: float(x[0] ** 2), np.array([3.0]), np.array([6.0]))
    assert report.checked == 1
    assert report.max_relative_error <= 1e-6


def test_wrong_gradient_fails():
    report = gradient_check(lambda x: float(x[0] ** 2), np.array([3.0]), np.array([5.0]))
    assert not report.passed


def test_absolute_value_kink_flagged():
    report = gradient_check(lambda x: float(np.abs(x).sum()), np.array([0.0, 2.0]), np.array([0.0, 1.0]))
    assert report.flagged == [0]
    assert report.passed


def test_parameter_check_restores_values():
    W = np.array([[1.0, -2.0], [0.5, 3.0]])
    before = W.copy()
    x = np.array([0.3, -0.7])
    report = parameter_gradient_check(lambda: float((W @ x).sum()), W, np.outer(np.ones(2), x))
    assert report.passed
    np.testing.assert_array_equal(W, before)


def test_relative_error_floor():
    assert relative_error(np.array([0.0]), np.array([1e-9]))[0] < 1e-3
