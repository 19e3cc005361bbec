import logging

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def no_thread_env(monkeypatch):
    """Keep a developer's QPT_GEOM_THREADS (environment or .env) out of the tests"""
    monkeypatch.delenv("QPT_GEOM_THREADS", raising=False)
    monkeypatch.setattr("settings.load_dotenv", lambda *args, **kwargs: False)


@pytest.fixture(autouse=True)
def restore_root_logger():
    """The CLI reconfigures the root logger; undo it after each test"""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers[:]:
        if handler not in handlers and isinstance(handler, logging.StreamHandler):
            root.removeHandler(handler)
    root.setLevel(level)
