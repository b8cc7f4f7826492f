import collections

import pytest

_CRITERIA = collections.OrderedDict()


class CriterionLog:
    """Collects acceptance sub-checks; one summary line per criterion at the end."""

    def __call__(self, criterion, check, passed, detail):
        passed = bool(passed)
        _CRITERIA.setdefault(criterion, []).append((check, passed, detail))
        print(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion} / {check}: {detail}")
        return passed


@pytest.fixture(scope="session")
def criterion():
    return CriterionLog()


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(_CRITERIA, key=lambda c: (len(str(c)), str(c))):
        checks = _CRITERIA[crit]
        ok = all(p for _, p, _ in checks)
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {crit}")
        for check, passed, detail in checks:
            tr.write_line(f"    {'ok  ' if passed else 'FAIL'} {check}: {detail}")
