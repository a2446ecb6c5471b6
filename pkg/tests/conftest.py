import os

# single-threaded BLAS keeps timings stable and results bitwise reproducible
for var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(var, "1")

import numpy as np
import pytest

from lexspec import generate


@pytest.fixture
def star():
    return generate("star", 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)
