import os

import pytest
from hypothesis import HealthCheck, settings

from metaplectica import kernels, wavefield as wf

settings.register_profile(
    "repro",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request, monkeypatch):
    """Run a test once per importable kernel backend."""
    mod = kernels.available_backends()[request.param]
    monkeypatch.setattr(kernels, "fresnel_toeplitz", mod.fresnel_toeplitz)
    monkeypatch.setattr(kernels, "horner_unit", mod.horner_unit)
    return request.param


@pytest.fixture(scope="session")
def unit_gaussian():
    return wf.gaussian()


@pytest.fixture(scope="session")
def odd_probe():
    return wf.hermite_gaussian(1)
