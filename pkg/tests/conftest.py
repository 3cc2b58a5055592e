"""Shared fixtures and the acceptance summary printer."""

import numpy as np
import pytest

from thickembed import EmbeddedComplex, build_complex

# criterion id -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def unit_square():
    X = build_complex([(0, 1), (1, 2), (2, 3), (0, 3)], 4)
    return EmbeddedComplex(X, np.array([[0.0, 0], [1, 0], [1, 1], [0, 1]]))


@pytest.fixture
def tetra_boundary():
    return build_complex([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)], 4)


@pytest.fixture
def octahedron():
    # antipodal pairs (0,5), (1,4), (2,3) are the non-edges
    tris = [(0, 1, 2), (0, 2, 4), (0, 4, 3), (0, 3, 1), (5, 1, 2), (5, 2, 4), (5, 4, 3), (5, 3, 1)]
    return build_complex(tris, 6)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[cid]
        terminalreporter.write_line(f"criterion {cid}: {'PASS' if ok else 'FAIL'}  {detail}")
