import pytest

from gasket_walk.symbolic import GasketConfig


@pytest.fixture(params=[1, 2, 3], ids=lambda d: f"d{d}")
def cfg(request):
    return GasketConfig(request.param)


def w(text, d=1):
    """Word from its text form, e.g. w("011")."""
    from gasket_walk.symbolic import parse_word
    return parse_word(text, GasketConfig(d))


acceptance_key = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record and print one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.stash.setdefault(acceptance_key, [])

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(acceptance_key, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
