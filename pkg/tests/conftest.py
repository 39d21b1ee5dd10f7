from __future__ import annotations

import pytest

from oracles import SAMPLE
from pfca.context import FormalContext
from pfca.engine import Decryptor, encrypt_context
from pfca.he import derive_params, make_backend

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def sample() -> FormalContext:
    return FormalContext(SAMPLE)


def encrypted(ctx: FormalContext, backend: str = "oracle", direction: str = "f", seed: int = 0):
    """(encrypted context, decryptor) for ``ctx`` under freshly derived parameters."""
    m, n = ctx.shape
    he = make_backend(backend, derive_params(m, n, direction))
    key = he.keygen(seed)
    return encrypt_context(ctx, he, key, seed=seed), Decryptor(he, key)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(".")[0].split()[-1])):
            terminalreporter.write_line(line)
