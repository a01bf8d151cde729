import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    import acceptance_log
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(acceptance_log.RESULTS.items()):
        terminalreporter.write_line(line)
