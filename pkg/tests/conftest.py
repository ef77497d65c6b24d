import pytest

from normspec.catalog import catalog

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def acceptance_record():
    def record(criterion, passed, detail=""):
        ACCEPTANCE_RESULTS[criterion] = (passed, detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0])):
        passed, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")


@pytest.fixture(scope="session")
def s3():
    return catalog("S3")


@pytest.fixture(scope="session")
def z6():
    return catalog("Z6")


@pytest.fixture(scope="session")
def q8():
    return catalog("Q8")
