# pylint: disable=missing-function-docstring
import math
import pytest
from pygsr.reconstruction import Schedule


def test_constant_schedule():
    schedule = Schedule.constant(0.2, 0.05)
    assert schedule.step_size(1) == 0.2
    assert schedule.step_size(1000) == 0.2
    assert schedule.decay(7) == 0.05


def test_diminishing_schedule():
    schedule = Schedule.diminishing(0.05, 0.1)
    assert schedule.step_size(1) == 0.05
    assert schedule.decay(1) == 0.1
    assert schedule.step_size(100) == pytest.approx(0.005)
    assert schedule.decay(10_000) == pytest.approx(0.01)
    product = schedule.step_size(4) * schedule.decay(4)
    assert product == pytest.approx(0.05 / 2 * 0.1 / math.sqrt(2))


def test_default_schedule():
    schedule = Schedule()
    assert schedule.kind == "constant"
    assert schedule.mu == 0.1
    assert schedule.beta == 1e-3


@pytest.mark.parametrize(
    ("kind", "mu", "beta"),
    [
        ("linear", 0.1, 0.1),
        ("constant", -0.1, 0.1),
        ("constant", 0.1, -1.0),
        ("constant", math.inf, 0.0),
        ("constant", 1.0, 1.0),
        ("diminishing", 2.0, 0.6),
    ],
)
def test_schedule_rejects_invalid_parameters(kind: str, mu: float, beta: float):
    with pytest.raises(ValueError):
        Schedule(kind, mu, beta)  # type: ignore


def test_schedule_counts_from_one():
    with pytest.raises(ValueError):
        Schedule().step_size(0)
    with pytest.raises(ValueError):
        Schedule().decay(-1)
