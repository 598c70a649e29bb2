import math
import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("qphase", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "qphase"))


@pytest.fixture(scope="session")
def small_scatter_model():
    """Narrow packet (override of the W >= 10L rule) so a run takes about a second."""
    import warnings

    from qphase.scattering import ScatteringModel
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return ScatteringModel(alpha_tilde=200.0, L=1.0, W=8.0, p0=math.pi / 2, margin=6.0,
                               cells_per_L=32, allow_narrow=True)


@pytest.fixture(scope="session")
def small_scatter_run(small_scatter_model):
    from qphase.scattering import run_scattering
    return run_scattering(small_scatter_model, snapshot_times=(10.0,))


@pytest.fixture(scope="session")
def fast_dipole():
    """Faster switching (alpha/eps = 20) keeps the tails short."""
    from qphase.dipole import DipoleModel
    from qphase.schedule import SwitchingSchedule
    return DipoleModel(schedule=SwitchingSchedule(1.0, 0.05, 0.0, 10.0))
