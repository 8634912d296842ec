import numpy as np
import pytest
from hypothesis import strategies as st

from eaqturbo.encoder import ResourceSignature, bundled, load_encoder
from eaqturbo.symplectic import PauliOperator, sample_symplectic


def random_encoder(sig: ResourceSignature, seed: int, name: str = ""):
    rng = np.random.default_rng(seed)
    return load_encoder(sig, sample_symplectic(sig.N, rng).rows, name=name)


def paulis(n: int):
    """Hypothesis strategy for ``n``-qubit Pauli operators."""
    return st.tuples(st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1)).map(
        lambda zx: PauliOperator(n, *zx))


@pytest.fixture(scope="session")
def wh1():
    return bundled("WH1")


@pytest.fixture(scope="session")
def fig2():
    return bundled("FIG2")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_CRITERIA: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_c" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1].split("[")[0]
    if report.failed:
        _CRITERIA[name] = "FAIL"
    elif report.when == "call" and report.passed:
        _CRITERIA.setdefault(name, "PASS")
    elif report.skipped:
        _CRITERIA.setdefault(name, "SKIP")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name in sorted(_CRITERIA):
        terminalreporter.write_line(f"{_CRITERIA[name]}  {name}")
