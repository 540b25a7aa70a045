import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chartfield.fixtures import FixtureSpec, render_fixture


@pytest.fixture(autouse=True)
def default_backend(monkeypatch):
    """Tests default to the numpy backend for JIT-free runs; exporting
    CHARTFIELD_BACKEND=numba runs the whole suite on the numba kernels."""
    if not os.environ.get("CHARTFIELD_BACKEND"):
        monkeypatch.setenv("CHARTFIELD_BACKEND", "numpy")


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture
def rect_fixture():
    """100x100 canvas with a centered 60x60 solid rectangle."""
    spec = FixtureSpec(kind="bar", values=(1.0,), width=100, height=100, margin=20, bar_width=60)
    return render_fixture(spec)
