import numpy as np
import pytest

from driprop.acceptance import AcceptanceContext
from driprop.gravity import GravityModel
from driprop.states import ClassicalElements, PolarNodalState, classical_to_polar_nodal


@pytest.fixture(scope="session")
def model():
    return GravityModel()


@pytest.fixture(scope="session")
def truth_cache_dir(tmp_path_factory):
    """Session truth cache; point DRIPROP_TRUTH_CACHE at a persistent
    directory before running pytest to reuse reference orbits across runs."""
    import os

    env = os.environ.get("DRIPROP_TRUTH_CACHE")
    if env:
        return env
    return tmp_path_factory.mktemp("truth")


@pytest.fixture(scope="session")
def acceptance_context(truth_cache_dir):
    return AcceptanceContext(truth_cache_dir)


@pytest.fixture()
def rng():
    return np.random.default_rng(20250810)


def random_states(rng, count, e_max=0.3):
    """Well-conditioned random LEO-ish polar-nodal states."""
    out = []
    model = GravityModel()
    for _ in range(count):
        el = ClassicalElements(
            a=rng.uniform(6800.0, 8500.0),
            e=rng.uniform(0.0, e_max),
            i=rng.uniform(0.0, np.pi),
            omega=rng.uniform(0.0, 2.0 * np.pi),
            Omega=rng.uniform(0.0, 2.0 * np.pi),
            f=rng.uniform(-np.pi, np.pi),
        )
        out.append(classical_to_polar_nodal(el, model))
    return out
