import pytest

from contactrelapse import ContactProfile, ModelParams

# rates under which kappa=0.8, theta=1.7, c_i=3 has three endemic equilibria
RELAPSE = dict(beta=0.00096, gamma=0.0027, phi=0.0044, mu=0.00015)
I_STARS = (0.004914, 0.010455, 0.238099)


@pytest.fixture(scope="session")
def relapse_params():
    return ModelParams(**RELAPSE)


@pytest.fixture(scope="session")
def triple_contacts():
    return ContactProfile.from_ratios(3.0, 0.8, 1.7)


# one summary line per acceptance criterion, filled in by test_acceptance
CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    def record(number: int, ok: bool, detail: str) -> bool:
        CRITERIA[number] = (bool(ok), detail)
        print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
