"""Shared fixtures and finite-difference oracles for the test suite."""

import numpy as np
import pytest

from accr.manifold import builtin_structure, sample_points

# Bindings under which the cone manifold carries flat fibers and unit
# soliton constants. Most closed-form expectations below assume these.
CONE_BINDINGS = {"c": 1.0, "ct": 1.0, "kprime": 0.0}


@pytest.fixture(scope="session")
def cone():
    return builtin_structure("cone-flat-fiber")


@pytest.fixture(scope="session")
def flat():
    return builtin_structure("flat-cosymplectic")


@pytest.fixture(scope="session")
def cone_bindings():
    return dict(CONE_BINDINGS)


@pytest.fixture(scope="session")
def cone_points(cone):
    # Deterministic sample set with the reference point t=2 pinned first.
    return sample_points(cone.chart, 16, seed=42, pinned=((2.0, 0.3, -0.4),))


@pytest.fixture(scope="session")
def flat_points(flat):
    return sample_points(flat.chart, 16, seed=42)


def fd_gradient(func, x, h=1e-5):
    """Central-difference gradient of a scalar function of a point tuple."""
    x = np.asarray(x, dtype=float)
    out = np.empty(x.size)
    for i in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        out[i] = (func(xp) - func(xm)) / (2.0 * h)
    return out


def _fd_hessian_step(func, x, h):
    dim = x.size
    out = np.empty((dim, dim))
    f0 = func(x)
    for i in range(dim):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        out[i, i] = (func(xp) - 2.0 * f0 + func(xm)) / (h * h)
        for j in range(i + 1, dim):
            xpp = x.copy()
            xpm = x.copy()
            xmp = x.copy()
            xmm = x.copy()
            xpp[[i, j]] += h
            xmm[[i, j]] -= h
            xpm[i] += h
            xpm[j] -= h
            xmp[i] -= h
            xmp[j] += h
            val = (func(xpp) - func(xpm) - func(xmp) + func(xmm)) / (4.0 * h * h)
            out[i, j] = val
            out[j, i] = val
    return out


def fd_hessian(func, x, h=1e-3):
    """Richardson-extrapolated central-difference Hessian.

    A plain second difference at step 1e-5 loses ~1e-5 relative accuracy to
    roundoff, so the oracle runs at a coarser base step and extrapolates.
    """
    x = np.asarray(x, dtype=float)
    d1 = _fd_hessian_step(func, x, h)
    d2 = _fd_hessian_step(func, x, h / 2.0)
    return (4.0 * d2 - d1) / 3.0


def rel_err(got, want):
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    scale = max(1.0, float(np.max(np.abs(want))))
    return float(np.max(np.abs(got - want))) / scale
