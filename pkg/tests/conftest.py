import pytest

from tmsim.config import load_config


@pytest.fixture(scope="session")
def cfg():
    """Default parameters, isolated from any TMSIM_* variables in the environment."""
    return load_config(environ={})
