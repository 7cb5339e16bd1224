import numpy as np
import pytest

from hyplan import (
    FlowParams,
    HyrrtParams,
    PlannerProblem,
    RngStream,
    ValidationTolerances,
    validate_solution_pair,
)
from hyplan.hysst import HysstParams
from hyplan.systems import make_bouncing_ball, make_multicopter, make_pinball


@pytest.fixture(scope="session")
def ball():
    return make_bouncing_ball()


@pytest.fixture(scope="session")
def pinball():
    return make_pinball()


@pytest.fixture(scope="session")
def multicopter():
    return make_multicopter()


def one_bounce_goal(x, time):
    return time.j >= 1 and 0.55 <= x[0] <= 0.64 and abs(x[1]) <= 0.5


@pytest.fixture(scope="session")
def ball_problem(ball):
    return PlannerProblem(system=ball, X0=[np.array([1.0, 0.0])], goal=one_bounce_goal)


@pytest.fixture(scope="session")
def ball_params():
    return HyrrtParams(p=0.5, K=20000, flow=FlowParams(Tm=0.2, flow_step=0.002))


@pytest.fixture(scope="session")
def ball_sst_params():
    return HysstParams(
        p=0.5,
        K=20000,
        flow=FlowParams(Tm=0.2, flow_step=0.002),
        eps_bn=0.5,
        eps_s=0.1,
    )


def assert_problem1(result, problem, tol=ValidationTolerances()):
    """The four returned-plan conditions, asserted on any planner output."""
    plan = result.plan
    assert any(
        np.allclose(plan.first.state, x0, atol=1e-12) for x0 in problem.X0
    ), "initial state not in X0"
    report = validate_solution_pair(plan, problem.system, tol)
    assert report.passed, f"validation issues: {report.issues[:3]}"
    assert problem.goal(plan.last.state, plan.last.time), "terminal state not in Xf"
    for s in plan.samples:
        assert not problem.system.in_unsafe_set(s.state, s.input), "plan touches Xu"


@pytest.fixture(scope="session")
def rng_factory():
    return RngStream
