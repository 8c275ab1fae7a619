import numpy as np
import pytest
from scipy.integrate import solve_ivp

from qsearch.model import HamiltonianSpec, PerturbationSpec, potential_matrix


def dense_rhs(h: HamiltonianSpec, v: PerturbationSpec):
    """Dense-matrix right-hand side for the independent reference integrator."""
    energies = h.energy_array()
    n = h.dimension

    def rhs(t, c):
        mat = potential_matrix(v, n, t)
        return -1j * (energies * c + mat @ c)

    return rhs


def solve_dense(h, v, c0, t_eval, rtol=1e-11, atol=1e-13):
    """Adaptive high-order reference solution (independent of the RK4 path)."""
    sol = solve_ivp(
        dense_rhs(h, v),
        (float(t_eval[0]), float(t_eval[-1])),
        np.asarray(c0, dtype=np.complex128),
        t_eval=np.asarray(t_eval, dtype=np.float64),
        method="DOP853",
        rtol=rtol,
        atol=atol,
    )
    assert sol.success
    return sol.y.T


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
