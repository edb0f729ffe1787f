import re

_LINE = re.compile(r"^\[criterion \d+\] (PASS|FAIL) .*$", re.M)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if "test_acceptance.py" in rep.nodeid:
                lines += [m.group(0) for m in _LINE.finditer(rep.capstdout)]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(re.search(r"\d+", s).group())):
            terminalreporter.write_line(line)
