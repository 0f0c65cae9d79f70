import numpy as np
import pytest

from lfmo import Ecdf, ks_one_sample, ks_two_sample


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def ks_one_sample_p(samples, cdf) -> float:
    return ks_one_sample(Ecdf.from_samples(samples), cdf).p_value


def ks_two_sample_p(a, b) -> float:
    return ks_two_sample(Ecdf.from_samples(a), Ecdf.from_samples(b)).p_value
