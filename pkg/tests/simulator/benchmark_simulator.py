# pylint: disable=missing-function-docstring
import pytest
from pytest_benchmark.fixture import BenchmarkFixture  # type: ignore
from pygsr.reconstruction import dlsr_closed_form_step, ReconState, Schedule
from pygsr.signals import generate_bandlimited
from pygsr.simulator import DistributedLeastSquares
from pygsr.simulator.types import SimulationMode
from tests._data.graphs import random_plan


@pytest.mark.parametrize(
    ("num_nodes", "num_samples", "num_steps", "mode"),
    [
        (100, 20, 100, "message_passing"),
        (100, 20, 100, "closed_form"),
        (100, 20, 100, "centralized"),
        (400, 80, 100, "message_passing"),
        (400, 80, 100, "closed_form"),
    ],
)
def test_pygsr(
    benchmark: BenchmarkFixture,
    num_nodes: int,
    num_samples: int,
    num_steps: int,
    mode: SimulationMode,
):
    plan = random_plan(num_nodes, num_samples, 0)
    truth = generate_bandlimited(plan.band, plan.basis, 0)

    estimator = DistributedLeastSquares(
        Schedule.constant(0.1, 1e-3), mode=mode, record_estimates=False
    )
    benchmark(estimator.fit, plan, truth, num_steps)


@pytest.mark.parametrize(
    ("num_nodes", "num_samples", "num_steps"),
    [
        (100, 20, 100),
        (400, 80, 100),
    ],
)
def test_functional(
    benchmark: BenchmarkFixture, num_nodes: int, num_samples: int, num_steps: int
):
    plan = random_plan(num_nodes, num_samples, 0)
    truth_samples = generate_bandlimited(plan.band, plan.basis, 0)[plan.sample_set]
    schedule = Schedule.constant(0.1, 1e-3)

    def run() -> ReconState:
        state = ReconState.initial(plan)
        for _ in range(num_steps):
            state = dlsr_closed_form_step(state, truth_samples, plan, schedule)
        return state

    benchmark(run)
