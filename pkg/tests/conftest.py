import numpy as np
import pytest

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line[1])


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion, then assert it."""

    def record(number: int, title: str, ok: bool, detail: str):
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        request.config.stash[_ACCEPTANCE].append((number, line))
        print(line)
        assert ok, line

    return record


def rho_closed(z, w):
    """Independent oracle: 1 - rho^2 = (1-|z|^2)(1-|w|^2)/|1-<z,w>|^2."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    num = (1 - np.vdot(z, z).real) * (1 - np.vdot(w, w).real)
    return float(np.sqrt(max(0.0, 1 - num / abs(1 - np.vdot(w, z)) ** 2)))


def disc_moebius(a, z):
    """(z - a)/(1 - conj(a) z) on the disc."""
    return (z - a) / (1 - np.conj(a) * z)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def comparability_sides(a, z):
    """Oracle in extended precision: (1 - |phi_a(z)|, 1 - |z|).

    Both gaps suffer cancellation near the sphere in double precision, so
    they are recomputed in long double from the (exact) double inputs.
    """
    a = np.atleast_1d(np.asarray(a, dtype=np.clongdouble))
    z = np.atleast_1d(np.asarray(z, dtype=np.clongdouble))
    r2 = np.sum(np.abs(a) ** 2)
    za = np.sum(np.conj(a) * z)
    Pz = a * za / r2 if r2 > 0 else np.zeros_like(z)
    u = (a - Pz - np.sqrt(1 - r2) * (z - Pz)) / (1 - za)
    return 1 - np.sqrt(np.sum(np.abs(u) ** 2)), 1 - np.sqrt(np.sum(np.abs(z) ** 2))
