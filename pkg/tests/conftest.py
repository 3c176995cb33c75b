import numpy as np
import pytest

from gigsim import kernels
from gigsim import _purekern


def _available_backends():
    mods = {"pure": _purekern}
    try:
        from gigsim import _fastkern

        mods["compiled"] = _fastkern
    except ImportError:
        pass
    return mods


_BACKENDS = _available_backends()


@pytest.fixture(params=sorted(_BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per numeric backend by swapping the dispatch target."""
    monkeypatch.setattr(kernels, "_impl", _BACKENDS[request.param])
    return request.param


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(20240817)))
