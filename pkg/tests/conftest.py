"""
Shared fixtures: default settings, seeded generators and contexts.
"""
import numpy as np
import pytest

from algebra.multivector_kernel import AlgebraContext
from config.settings import EngineSettings, reload_settings


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch, tmp_path):
    """Every test sees default settings, independent of the caller's environment and .env."""
    for field in EngineSettings.model_fields.values():
        monkeypatch.delenv(field.alias, raising=False)
    monkeypatch.chdir(tmp_path)
    reload_settings()
    yield
    # The test's own monkeypatch.setenv calls are still active here (monkeypatch
    # is torn down after this fixture), so clear them before restoring defaults.
    for field in EngineSettings.model_fields.values():
        monkeypatch.delenv(field.alias, raising=False)
    reload_settings()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def ctx2():
    return AlgebraContext(2)


@pytest.fixture
def ctx3():
    return AlgebraContext(3)


@pytest.fixture
def ctx4():
    return AlgebraContext(4)
