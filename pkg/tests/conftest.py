import pytest

from pentachain import assign_geometry, fixed_sphere_geometry, load_builtin


@pytest.fixture(scope="session")
def s3():
    return load_builtin("s3")


@pytest.fixture(scope="session")
def rp3():
    return load_builtin("rp3")


@pytest.fixture(scope="session")
def sphere_geometry():
    return fixed_sphere_geometry()


@pytest.fixture()
def rp3_geometry(rp3):
    return assign_geometry(rp3, seed=42)
