import numpy as np
import pytest
from hypothesis import settings

from coherent_dispersion.steady_state import solve_steady_state
from coherent_dispersion.system import DriveField, LevelScheme, build_generator

settings.register_profile("repo", deadline=None, derandomize=True, print_blob=True)
settings.load_profile("repo")


def random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[(2, 3), (1, 0)], ids=["Fg2-Fe3", "Fg1-Fe0"])
def paper_scheme(request):
    return LevelScheme(*request.param, gamma=1e-3)


def steady(scheme, S, detuning=0.0):
    L = build_generator(scheme, DriveField.from_saturation(S, detuning))
    return L, solve_steady_state(L)


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k[2:])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{key} {'PASS' if ok else 'FAIL'}: {detail}")
