import numpy as np
import pytest
from scipy.stats import special_ortho_group, unitary_group


def sphere_quadrature(n_theta: int = 16, n_phi: int = 16):
    """Nodes and weights on S^2, exact for polynomials of low degree.

    Gauss-Legendre in cos(theta) times uniform phi; weights sum to 1 so the
    weighted sum is the sphere average.
    """
    u, wu = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    uu, pp = np.meshgrid(u, phi, indexing="ij")
    st = np.sqrt(1 - uu**2)
    pts = np.stack([st * np.cos(pp), st * np.sin(pp), uu], axis=-1).reshape(-1, 3)
    w = np.repeat(wu / 2, n_phi) / n_phi
    return pts, w


def random_local_unitaries(rng, n=None):
    kw = {} if n is None else {"size": n}
    u = unitary_group.rvs(2, random_state=rng, **kw)
    v = unitary_group.rvs(2, random_state=rng, **kw)
    return u, v


def random_rotation(rng):
    return special_ortho_group.rvs(3, random_state=rng)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion.

    Lines are printed immediately and repeated in the terminal summary so
    they survive output capture.
    """
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}"
        if detail:
            line += f" ({detail})"
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
