import random
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dctri import matroid as mat

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

K4_EDGES = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


def small_matrix(max_rows=4, max_cols=4, lo=-4, hi=4):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )


def random_unimodular(rng: random.Random, n: int, steps: int = 12) -> list[list[int]]:
    """Product of random elementary integer operations (det = +-1)."""
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        kind = rng.randrange(3)
        i = rng.randrange(n)
        if kind == 0 and n > 1:
            j = rng.choice([k for k in range(n) if k != i])
            c = rng.choice([-2, -1, 1, 2])
            A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        elif kind == 1 and n > 1:
            j = rng.randrange(n)
            A[i], A[j] = A[j], A[i]
        else:
            A[i] = [-a for a in A[i]]
    return A


@st.composite
def unimodular_matrices(draw, n):
    return random_unimodular(random.Random(draw(st.integers(0, 2**32))), n)


def small_corpus():
    """Matroids cheap enough for per-test exhaustive checks."""
    out = [mat.uniform(k, n) for n in range(1, 6) for k in range(1, n + 1)]
    out.append(mat.direct_sum(mat.uniform(1, 2), mat.uniform(2, 3)))
    out.append(mat.from_bases(4, [[1, 2], [1, 3]], name="coloop+U(1,2)+loop"))
    out.append(mat.graphic([(1, 2), (2, 3), (1, 3), (3, 4)], name="triangle+pendant"))
    return out


@pytest.fixture(scope="session")
def k4():
    return mat.graphic(K4_EDGES, name="graphic(K4)")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = mod.pytest_terminal_summary_lines() if mod else []
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
