import pytest

from crossed_kuperberg import paths
from crossed_kuperberg.hopfxc import builtin_kp4, compute_integrals
from crossed_kuperberg.invariant import InvariantEngine
from crossed_kuperberg.scalar import FieldDescriptor
from crossed_kuperberg.xmod import z4_to_z2

Q = FieldDescriptor.rationals()
F5 = FieldDescriptor.prime(5)


@pytest.fixture(scope="session", autouse=True)
def isolated_settings(tmp_path_factory):
    """Keep tests away from the real settings file and environment."""
    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(paths, "SETTINGS_FILE", tmp_path_factory.mktemp("config") / "settings.json")
        mp.delenv(paths.BUDGET_ENV, raising=False)
        mp.delenv(paths.STRATEGY_ENV, raising=False)
        yield


@pytest.fixture(scope="session")
def z4z2():
    return z4_to_z2()


@pytest.fixture(scope="session")
def kp4():
    return builtin_kp4(Q)


@pytest.fixture(scope="session")
def kp4_integrals(kp4):
    return compute_integrals(kp4)


@pytest.fixture(scope="session")
def kp4_engine(kp4, kp4_integrals):
    return InvariantEngine(kp4, integrals=kp4_integrals)


@pytest.fixture(scope="session")
def kp4_naive(kp4, kp4_integrals):
    return InvariantEngine(kp4, strategy="naive", integrals=kp4_integrals)
