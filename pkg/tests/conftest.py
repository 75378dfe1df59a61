import pytest

_LINES = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_LINES] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion and fail the test unless every check holds.

    Call as ``criterion(number, title, checks)`` with ``checks`` a list of
    ``(label, ok, detail)`` tuples.
    """
    def record(number, title, checks):
        ok = all(good for _, good, _ in checks)
        parts = [f"{label} {'ok' if good else 'FAIL'} [{detail}]" for label, good, detail in checks]
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title}"
        request.config.stash[_LINES][number] = (line, parts)
        print(line)
        for p in parts:
            print("    " + p)
        assert ok, "; ".join(p for p in parts if " FAIL " in p)

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(lines):
        line, parts = lines[number]
        terminalreporter.write_line(line)
        for p in parts:
            terminalreporter.write_line("    " + p)
