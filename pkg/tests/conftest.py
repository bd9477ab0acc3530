"""Shared fixtures: small deterministic datasets with known micromodes."""

import numpy as np
import pytest
from scipy import stats

from src.heavytail.evt import evt_constant_A
from src.heavytail.models import Dataset
from src.posterior.models import Model


def two_point(a: float) -> Dataset:
    """{-a, a}; for nu=1 and a > 1 the micromode sits at sqrt(a^2 - 1) with width sqrt(a^2 - 1)."""
    return Dataset.from_points([-a, a])


def isolated_anchor(n: int = 1000, beta: float = 0.5) -> Dataset:
    """n - 1 Cauchy quantiles in [-16, 16] plus one point at (A n)^(1/beta)."""
    bulk = stats.t.ppf(np.linspace(0.02, 0.98, n - 1), df=1)
    anchor = (evt_constant_A(beta, 1) * n) ** (1.0 / beta)
    return Dataset.from_points(np.append(bulk, anchor))


@pytest.fixture
def cauchy():
    return Model(nu=1.0)


@pytest.fixture
def two_point_ds():
    return two_point(2.0)


@pytest.fixture
def isolated_ds():
    return isolated_anchor()


@pytest.fixture
def anchored():
    """Factory form of isolated_anchor for tests that sweep n."""
    return isolated_anchor


@pytest.fixture
def points_file(tmp_path):
    """Write points to a y1..yd CSV and return its path."""

    def _write(points, name: str = "points.csv"):
        arr = np.atleast_2d(np.asarray(points, dtype=float))
        if arr.shape[0] == 1 and np.ndim(points) == 1:
            arr = arr.T
        header = ",".join(f"y{j + 1}" for j in range(arr.shape[1]))
        path = tmp_path / name
        np.savetxt(path, arr, delimiter=",", header=header, comments="", fmt="%.17g")
        return path

    return _write
