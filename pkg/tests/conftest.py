import pytest

from qlf.backends import RootContext

TEST_PRECISION_BITS = 128


@pytest.fixture
def prec():
    return TEST_PRECISION_BITS


@pytest.fixture
def root_context():
    def build(N, precision_bits=TEST_PRECISION_BITS, exact=False):
        return RootContext.build(N, precision_bits, exact_backend_enabled=exact)

    return build
