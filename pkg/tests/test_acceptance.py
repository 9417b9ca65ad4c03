"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the lines are also
repeated in the terminal summary) or as a script.
"""
import random
import time
from functools import lru_cache
from itertools import permutations

import pytest

from dctri import dc_triangulator as dc
from dctri import genperm as gp
from dctri import matroid as mat
from dctri.cli import acceptance_corpus
from dctri.dc_triangulator import (
    GenericFunctional,
    build_height_function,
    is_generic_bruteforce,
    make_generic_functional,
    schedule_for,
    triangulate_base_polytope,
)
from dctri.exact_linalg import AffineLattice, are_complementary, independent_affine_spans, smith_diagonal
from dctri.lattice_polytope import (
    PointConfiguration,
    base_polytope,
    independence_polytope_points,
    is_matroid_polytope,
    normalized_volume,
    pyramid_volume,
)
from dctri.regular_subdivision import concretize_epsilon, induced_subdivision, lower_hull_subdivision
from dctri.verifier import check_subdivision, h_vector, is_unimodular, verify

TIME_LIMIT = 60.0
SEEDS = (0, 11)
PROPERTY_CASES = 1000
RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, failures: list, detail: str) -> None:
    ok = not failures
    RESULTS[n] = (ok, detail if ok else f"{detail}; first failure: {failures[0]}")
    print(f"criterion {n} [{'PASS' if ok else 'FAIL'}] {RESULTS[n][1]}")
    assert ok, failures[:5]


@lru_cache(maxsize=None)
def corpus_run(index: int, seed: int):
    """Triangulate, concretize and verify one corpus matroid; timed."""
    M = acceptance_corpus()[index]
    t0 = time.perf_counter()
    T = triangulate_base_polytope(M, seed=seed)
    eps, flat = concretize_epsilon(T.base, T.heights, T)
    report = verify(T, flat)
    return M, T, eps, flat, report, time.perf_counter() - t0


def corpus_indices():
    return range(len(acceptance_corpus()))


def test_criterion_1_full_verification():
    failures, slowest = [], 0.0
    for i in corpus_indices():
        M, T, eps, flat, rep, secs = corpus_run(i, SEEDS[0])
        slowest = max(slowest, secs)
        vol = normalized_volume(base_polytope(M))
        unimod = all(is_unimodular([T.base.points[v] for v in c]) for c in T.cells)
        checks = {
            "unimodular": rep.unimodular_all and unimod,
            "volume": len(T.cells) == vol == rep.volume,
            "covers": rep.covers,
            "face_to_face": rep.face_to_face,
            "lexicographic": rep.regular_certified is True,
            "concretized": rep.regular_flat is True,
            "time": secs < TIME_LIMIT,
        }
        if M.n <= 5:
            # independent pairwise LP on top of the certificate route
            lp = check_subdivision(T, certificate_ok=False)
            checks["pairwise_lp"] = lp["face_to_face"] and lp["covers"]
        bad = [k for k, v in checks.items() if not v]
        if bad:
            failures.append((repr(M), bad))
    record(1, failures, f"{len(corpus_indices())} corpus instances verified, slowest {slowest:.2f}s")


def test_criterion_2_cell_counts():
    expected = {(2, 4): 4, (2, 5): 11, (3, 6): 66}
    failures = []
    for (k, n), want in expected.items():
        M = mat.uniform(k, n)
        T = triangulate_base_polytope(M)
        P = base_polytope(M)
        oracle = normalized_volume(P)
        cross = pyramid_volume(P) if n <= 5 else oracle
        if not len(T.cells) == oracle == cross == want:
            failures.append((f"U({k},{n})", len(T.cells), oracle, cross, want))
    record(2, failures, "U(2,4)=4, U(2,5)=11, U(3,6)=66 cells")


def test_criterion_3_h_vector_invariance():
    failures = []
    distinct = 0
    for i in corpus_indices():
        M, Ta, *_ = corpus_run(i, SEEDS[0])
        _, Tb, *_ = corpus_run(i, SEEDS[1])
        if h_vector(Ta) != h_vector(Tb):
            failures.append((repr(M), h_vector(Ta), h_vector(Tb)))
        distinct += Ta.cell_sets() != Tb.cell_sets()
    record(3, failures, f"h-vectors equal for seeds {SEEDS} ({distinct} pairs with different cells)")


def test_criterion_4_functiondesc_cross_check():
    failures, checked = [], 0
    for i in corpus_indices():
        M, T, eps, flat, *_ = corpus_run(i, SEEDS[0])
        if M.n > 5:
            continue
        checked += 1
        h = build_height_function(M, schedule_for(T, M))
        layered = induced_subdivision(T.base, h)
        single = lower_hull_subdivision(T.base, h.flatten(eps))
        if not (layered.cell_sets() == T.cell_sets() == single.cell_sets()):
            failures.append(repr(M))
    record(4, failures, f"recursion = layered heights = flat lower hull on {checked} matroids with n <= 5")


def test_criterion_5_generalized_permutahedron():
    failures = []
    f = gp.submodular_from_points(list(permutations((0, 1, 2))))
    P = PointConfiguration(tuple(gp.lattice_points(f)))
    dicing = gp.dice(P)
    if len(dicing.cells) != 6:
        failures.append(("dice cells", len(dicing.cells)))
    for c in dicing.cells:
        pts = [P.points[i] for i in c]
        lo = [min(p[k] for p in pts) for k in range(3)]
        if not is_matroid_polytope([tuple(a - b for a, b in zip(p, lo)) for p in pts]):
            failures.append(("not a matroid cell", c))
    res = gp.triangulate_genperm(f)
    oracle = normalized_volume(P)
    if not len(res.triangulation.cells) == oracle == pyramid_volume(P):
        failures.append(("cells", len(res.triangulation.cells), oracle))
    if not verify(res.triangulation).passed:
        failures.append("verifier rejected the triangulation")
    record(5, failures, f"Pi_3 dices into {len(dicing.cells)} matroid cells, {len(res.triangulation.cells)} simplices = volume {oracle}")


def test_criterion_6_independence_polytopes():
    failures, counts = [], []
    if not all(all(d == 1 for d in smith_diagonal(gp.psi_matrix(n))) for n in (2, 3, 4)):
        failures.append("psi not unimodular")
    for M in (mat.uniform(1, 2), mat.uniform(2, 3), mat.uniform(2, 4)):
        T = gp.triangulate_independence_polytope(M)
        P = independence_polytope_points(M)
        lifted, _ = gp.lift_independence(M)
        oracle = normalized_volume(lifted)
        counts.append(len(T.cells))
        if not (len(T.cells) == oracle == normalized_volume(P)):
            failures.append((repr(M), len(T.cells), oracle))
        if not verify(T).passed:
            failures.append((repr(M), "verifier"))
    record(6, failures, f"independence polytopes of U(1,2), U(2,3), U(2,4): {counts} cells = volumes")


def _random_unimodular(rng, n):
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
    perm = list(range(n))
    rng.shuffle(perm)
    return [A[p] for p in perm]


def _columns(A, idx):
    return [[A[r][c] for r in range(len(A))] for c in idx]


def _combos(rng, basis, k):
    """``k`` random integer combinations of ``basis``: a rational subspace of its span."""
    out = []
    for _ in range(k):
        coeffs = [rng.randint(-3, 3) for _ in basis]
        out.append([sum(c * b[t] for c, b in zip(coeffs, basis)) for t in range(len(basis[0]))])
    return out


def lemma_rational_cases(rng):
    failures = []
    for _ in range(PROPERTY_CASES):
        n = rng.randint(2, 6)
        A = _random_unimodular(rng, n)
        cols = list(range(n))
        rng.shuffle(cols)
        a = rng.randint(1, n - 1)
        b = rng.randint(1, n - a)
        V, W = _columns(A, cols[:a]), _columns(A, cols[a : a + b])
        LV, LW = AffineLattice.span_of(V, n), AffineLattice.span_of(W, n)
        if not are_complementary(LV, LW):
            failures.append(("precondition", V, W))
            continue
        X = _combos(rng, V, rng.randint(1, a))
        Y = _combos(rng, W, rng.randint(1, b))
        if not are_complementary(AffineLattice.span_of(X, n), AffineLattice.span_of(Y, n)):
            failures.append(("rational", X, Y))
    return failures


def _random_face(rng, P):
    w = [rng.choice([0, 0, 1, -1, 2]) for _ in range(P.ambient_dim)]
    vals = [sum(a * b for a, b in zip(w, p)) for p in P.points]
    top = max(vals)
    return PointConfiguration(tuple(p for p, v in zip(P.points, vals) if v == top))


def lemma_complementary_cases(rng):
    by_n: dict[int, list] = {}
    for M in acceptance_corpus():
        if M.n >= 2:
            by_n.setdefault(M.n, []).append(base_polytope(M))
    failures, nontrivial, independent, drawn = [], 0, 0, 0
    while nontrivial < PROPERTY_CASES:
        drawn += 1
        n = rng.choice(sorted(by_n))
        F, G = _random_face(rng, rng.choice(by_n[n])), _random_face(rng, rng.choice(by_n[n]))
        if not independent_affine_spans(F.span, G.span):
            continue
        independent += 1
        nontrivial += bool(F.dim and G.dim)
        if not are_complementary(F.span, G.span):
            failures.append((F.points, G.points))
    return failures, independent, drawn


def gl_equivariance_cases(rng):
    failures, outcomes = [], set()
    for _ in range(PROPERTY_CASES):
        n = rng.randint(2, 5)
        k1, k2 = rng.randint(1, n - 1), rng.randint(1, n - 1)
        L1 = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(k1)]
        L2 = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(k2)]
        A = _random_unimodular(rng, n)
        before = are_complementary(AffineLattice.span_of(L1, n), AffineLattice.span_of(L2, n))
        img = lambda vs: [[sum(a * x for a, x in zip(row, v)) for row in A] for v in vs]
        after = are_complementary(AffineLattice.span_of(img(L1), n), AffineLattice.span_of(img(L2), n))
        outcomes.add(before)
        if before != after:
            failures.append((A, L1, L2))
    if outcomes != {True, False}:
        failures.append(("degenerate sample", outcomes))
    return failures


def test_criterion_7_lemma_properties():
    rng = random.Random(20240607)
    f1 = lemma_rational_cases(rng)
    f2, independent, drawn = lemma_complementary_cases(rng)
    f3 = gl_equivariance_cases(rng)
    record(
        7,
        f1 + f2 + f3,
        f"rational {PROPERTY_CASES}, complementary {independent} independent face pairs "
        f"({PROPERTY_CASES} both positive-dimensional, {drawn} drawn), GL_n(Z) {PROPERTY_CASES}",
    )


def test_criterion_8_genericity_and_retries(monkeypatch):
    failures = []
    for m in range(1, 5):
        for t in (2, 3):
            if not is_generic_bruteforce(make_generic_functional(m, t)):
                failures.append(("moment curve not generic", m, t))
    if is_generic_bruteforce(GenericFunctional((1, 1))):
        failures.append("all-ones functional accepted")
    worst = 0
    for i in corpus_indices():
        for seed in SEEDS:
            M, T, *_ = corpus_run(i, seed)
            retries = len(T.metadata["t_sequence"]) - 1
            worst = max(worst, retries)
            if retries > 3:
                failures.append((repr(M), seed, T.metadata["t_sequence"]))
    # hard cap path: the first five parameters are forced non-generic
    real = dc.make_generic_functional
    M = mat.uniform(3, 6)
    t0 = dc.default_t(M)
    monkeypatch.setattr(
        dc,
        "make_generic_functional",
        lambda m, t: GenericFunctional(tuple([1] * m)) if t < t0 + 5 else real(m, t),
    )
    T = triangulate_base_polytope(M)
    if len(T.cells) != 66 or T.metadata["t_sequence"] != list(range(t0, t0 + 6)):
        failures.append(("forced retries", T.metadata["t_sequence"]))
    record(8, failures, f"moment curve generic for m<=4, t in (2,3); max corpus retries {worst}; forced path recovered after 5 retries")


def pytest_terminal_summary_lines():
    return [f"criterion {n} [{'PASS' if ok else 'FAIL'}] {d}" for n, (ok, d) in sorted(RESULTS.items())]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
