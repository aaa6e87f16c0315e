import random
from itertools import product

import numpy as np
import pytest

from xiongsets.construction import Budget, ConstructionParams, build_delta
from xiongsets.symbolic import periodic


def random_word(seed, length, N):
    rng = random.Random(seed)
    return [rng.randint(1, N) for _ in range(length)]


def naive_materialize(layouts, x, z, N):
    """Rebuild the prefix symbol by symbol from the stage layouts alone.

    Independent of the segment ledger: positions are laid out from the
    layout equations, and map images are computed from brute-force value
    tables in lexicographic order.
    """
    out, marks = [], []
    cursor = 0

    def fill(length):
        nonlocal cursor
        for _ in range(length):
            out.append(x[cursor % len(x)])
            cursor += 1

    def put(symbols):
        for s in symbols:
            out.append(s)
            marks.append(len(out))

    def zs(start, n):
        return [z[(start - 1 + i) % len(z)] for i in range(n)]

    prev_end = 0
    for L in layouts:
        n = L.n
        domain = list(product(range(1, N + 1), repeat=n))
        fill(L.A1 - prev_end)
        for j in range(1, n + 1):
            put(zs((L.A1 if L.paper_literal else j * L.A1) + 1, n))
            fill(L.A[j])
        for j in range(1, n + 1):
            put(zs(1, n))
            if j < n:
                fill(L.A[n + j])
        assert len(out) == n * L.B + n
        head = tuple(x[:n])
        for i, g in enumerate(L.anchors, start=1):
            ordinal = i - 1
            digits = []
            for _ in range(L.width):
                ordinal, d = divmod(ordinal, L.width)
                digits.append(d)
            digits.reverse()
            for j in range(1, L.width + 1):
                assert len(out) == j * g
                idx = L.maps.indices[digits[j - 1]]
                M = len(domain)
                table = []
                for _ in range(M):
                    idx, r = divmod(idx, M)
                    table.append(r)
                table.reverse()
                put(domain[table[domain.index(head)]])
                if j < L.width:
                    fill(g - n)
        prev_end = L.end
    return out, marks


@pytest.fixture(scope="session")
def small_params():
    x = random_word(11, 97, 2)
    z = random_word(12, 89, 2)
    return ConstructionParams(2, 2, Budget(4, 1), periodic(z, 2), periodic(x, 2)), x, z


@pytest.fixture(scope="session")
def small_ledger(small_params):
    params, x, z = small_params
    return build_delta(params), x, z


@pytest.fixture(scope="session")
def budget_ledger():
    """N=2, Budget(4 maps, 4 blocks), stages 1-2."""
    x = random_word(21, 131, 2)
    z = random_word(22, 127, 2)
    ledger = build_delta(ConstructionParams(2, 2, Budget(4, 4), periodic(z, 2), periodic(x, 2)))
    return ledger, x, z


@pytest.fixture(scope="session")
def full_stage1():
    x = random_word(31, 61, 2)
    z = random_word(32, 59, 2)
    ledger = build_delta(ConstructionParams(2, 1, None, periodic(z, 2), periodic(x, 2)))
    return ledger, x, z


@pytest.fixture
def rng():
    return random.Random(20241017)


@pytest.fixture
def np_rng():
    return np.random.default_rng(20241017)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title, limit): acceptance criterion with a runtime budget")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(RESULTS):
            terminalreporter.write_line(line)
