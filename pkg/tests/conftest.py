"""Shared instances used across the test modules."""

from fractions import Fraction
from pathlib import Path

import pytest

from markov_bayes import (
    FinSpace,
    Kernel,
    Model,
    product,
    state,
    uniform_state,
)

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def xy():
    return FinSpace("X", ("x0", "x1")), FinSpace("Y", ("y0", "y1"))


@pytest.fixture
def std_kernel(xy):
    # the 2x2 instance every inversion value below is hand-derived from
    x, y = xy
    return Kernel(x, y, (("3/4", "1/4"), ("1/2", "1/2")))


@pytest.fixture
def std_prior(xy):
    x, _ = xy
    return state(x, ("1/2", "1/2"))


@pytest.fixture
def two_point_model():
    m = FinSpace("M", ("m0", "m1"))
    x = FinSpace("X", ("x0",))
    y = FinSpace("Y", ("y0", "y1"))
    channel = Kernel(product(m, x), y, (("2/3", "1/3"), ("1/4", "3/4")))
    return Model(
        params=m,
        prior=uniform_state(m),
        input_space=x,
        input_state=state(x, (Fraction(1),)),
        output_space=y,
        channel=channel,
    )
