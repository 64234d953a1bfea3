import pytest

from bordered_ks.serialize import algebras


@pytest.fixture(scope="session")
def osz():
    """Cached algebra bundles keyed by strand count."""
    return algebras
