import numpy as np
import pytest

from conceptshap import datasets
from conceptshap.context import FormalContext
from conceptshap.jsm import ClassificationContext, Label

# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def random_context(rng: np.random.Generator, n_obj: int, n_att: int, density: float = 0.5) -> FormalContext:
    matrix = rng.random((n_obj, n_att)) < density
    return FormalContext.from_matrix([f"g{i}" for i in range(n_obj)],
                                     [f"m{j}" for j in range(n_att)], matrix.tolist())


def random_classification(rng: np.random.Generator, n_obj: int, n_att: int,
                          density: float = 0.5) -> ClassificationContext:
    """At least one positive, one negative and one undetermined object."""
    ctx = random_context(rng, n_obj, n_att, density)
    labels = [Label.POSITIVE, Label.NEGATIVE, Label.UNDETERMINED]
    labels += [labels[i] for i in rng.integers(0, 3, n_obj - 3)]
    order = rng.permutation(n_obj)
    return ClassificationContext(ctx, tuple(labels[i] for i in order))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def fruits():
    return datasets.fruits()


@pytest.fixture(scope="session")
def table6():
    return datasets.table6()


@pytest.fixture(scope="session")
def credit():
    return datasets.credit()


@pytest.fixture(scope="session")
def zoo():
    return datasets.zoo()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
