"""One test per acceptance criterion; each prints a single PASS/FAIL line.

Run standalone with `python3 tests/test_acceptance.py` for just the table.
"""

import pytest

from crystalforms.suites import SUITES

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # standalone run
    ACCEPTANCE_LINES = []


@pytest.mark.parametrize("number,key,fn", SUITES, ids=[k for _, k, _ in SUITES])
def test_criterion(number, key, fn):
    result = fn("small")
    line = f"criterion {number} {'PASS' if result.passed else 'FAIL'} {key}: {result.detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert result.passed, line


if __name__ == "__main__":
    import sys

    failed = 0
    for number, key, fn in SUITES:
        r = fn("small")
        failed += not r.passed
        print(f"criterion {number} {'PASS' if r.passed else 'FAIL'} {key}: {r.detail}", flush=True)
    sys.exit(1 if failed else 0)
