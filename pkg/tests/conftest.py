import pytest

CRITERIA = {}


@pytest.fixture
def record_criterion():
    def record(number, title, ok, detail=""):
        CRITERIA[number] = (title, ok, detail)
        print("criterion %2d %s: %s %s" % (number, "PASS" if ok else "FAIL", title, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        title, ok, detail = CRITERIA[n]
        terminalreporter.write_line("criterion %2d %s: %s" % (n, "PASS" if ok else "FAIL", title))
