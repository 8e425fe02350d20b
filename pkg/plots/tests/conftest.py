import numpy as np
import pytest

SNAPSHOT_HEADER = "x,rho,u,p1,p2,T1,T2,alpha2,Y2,c,s"
ORACLE_HEADER = "x,rho,u,p,T"


@pytest.fixture
def snapshot_csv(tmp_path):
    """A small solver-style snapshot with per-phase columns."""
    n = 40
    x = np.linspace(0.0, 1.0, n)
    rho = np.where(x < 0.5, 1000.0, 50.0)
    u = np.where(x < 0.5, 0.0, 30.0)
    p1 = np.full(n, 1.0e5)
    p2 = np.full(n, 1.0e5)
    T1 = np.full(n, 300.0)
    T2 = np.full(n, 320.0)
    a2 = np.where(x < 0.5, 1e-6, 1.0 - 1e-6)
    Y2 = a2.copy()
    c = np.full(n, 400.0)
    s = np.full(n, 1.0e3)
    rows = np.column_stack([x, rho, u, p1, p2, T1, T2, a2, Y2, c, s])
    path = tmp_path / "final.csv"
    np.savetxt(path, rows, delimiter=",", header=SNAPSHOT_HEADER, comments="")
    return path


@pytest.fixture
def oracle_csv(tmp_path):
    n = 80
    x = np.linspace(0.0, 1.0, n)
    rho = np.where(x < 0.55, 900.0, 55.0)
    u = np.full(n, 15.0)
    p = np.full(n, 2.0e5)
    T = np.full(n, 310.0)
    rows = np.column_stack([x, rho, u, p, T])
    path = tmp_path / "exact.csv"
    np.savetxt(path, rows, delimiter=",", header=ORACLE_HEADER, comments="")
    return path


@pytest.fixture
def sweep_csv(tmp_path):
    u = np.array([600.0, 900.0, 1200.0, 1500.0, 1800.0])
    S = 1.4 * u + 5200.0 + np.array([2.0, -1.0, 0.5, -0.5, 1.0])
    path = tmp_path / "sweep.csv"
    np.savetxt(path, np.column_stack([u, S]), delimiter=",",
               header="u_impact,shock_speed", comments="")
    return path


@pytest.fixture
def snapshot2d_csv(tmp_path):
    nx, ny = 12, 8
    x = np.linspace(0.0, 1.2, nx)
    y = np.linspace(0.0, 0.8, ny)
    X, Y = np.meshgrid(x, y, indexing="ij")
    rho = 100.0 + 900.0 / (1.0 + np.exp((Y - 0.4) / 0.05))
    rows = np.column_stack([X.ravel(), Y.ravel(), rho.ravel()])
    path = tmp_path / "snap2d.csv"
    np.savetxt(path, rows, delimiter=",", header="x,y,rho", comments="")
    return path
