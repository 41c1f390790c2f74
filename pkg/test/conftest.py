import pytest
from app.models.constants import PhysicalConstants
from app.models.relativity import AcceleratedFrame


@pytest.fixture
def natural():
    return PhysicalConstants.natural()


@pytest.fixture
def frame():
    return AcceleratedFrame(a=1.0)


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Isolated working directory with ZPF_OUTPUT_DIR pointing inside it."""
    monkeypatch.chdir(tmp_path)
    out = tmp_path / "output"
    monkeypatch.setenv("ZPF_OUTPUT_DIR", str(out))
    return out
