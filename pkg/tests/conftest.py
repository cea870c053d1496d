from __future__ import annotations

import pytest

# (criterion number, line) pairs recorded by test_acceptance.py
ACCEPTANCE_LINES: list[tuple[int, str]] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture(params=["python", "cython"])
def kernel_backend(request):
    """Both kernel implementations; the compiled one is skipped when not built."""
    if request.param == "python":
        from qdeform.kernels import _pykernels

        return _pykernels
    mod = pytest.importorskip("qdeform.kernels._ckernels")
    return mod
