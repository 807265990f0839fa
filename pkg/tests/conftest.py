import pytest

from lenardlab import equivariant as eq
from lenardlab.sampling import default_rng, sample_gapped_box


@pytest.fixture(scope="session")
def example3():
    params, reference = eq.example3_fixture()
    return params, reference, eq.assemble_complex(params)


@pytest.fixture(scope="session")
def example3_points(example3):
    _, _, cx = example3
    rng = default_rng(20240817)
    return sample_gapped_box(rng, 50, predicates=cx.sampling_predicates())


@pytest.fixture()
def rng():
    return default_rng(12345)
