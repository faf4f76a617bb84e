import pytest

_LINES: list[str] = []


@pytest.fixture
def report(request):
    """``report(n, title, ok, detail)`` records one acceptance line; the
    lines are echoed as they happen and repeated in the terminal summary."""
    tr = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(n, title, ok, detail=""):
        line = f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        _LINES.append(line)
        if tr is not None:
            tr.write_line("")
            tr.write_line(line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
