import numpy as np
import pytest

import leontief_ipm as li

from helpers import two_technology_model


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # Pull jit compilation / cache loading out of timed tests.
    li.lu_solve(np.eye(2), np.ones(2))
    li.is_vertical_block_P(
        li.VerticalBlockMatrix((np.eye(2)[:1], np.eye(2)[1:])), weak=True
    )


@pytest.fixture(scope="session")
def paper_model():
    return two_technology_model()


@pytest.fixture(scope="session")
def paper_vlcp(paper_model):
    return li.build_generalized_leontief_vlcp(paper_model)
