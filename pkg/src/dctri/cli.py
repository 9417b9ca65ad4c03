"""Command line entry point: ``dctri <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 verification failure, 4 retry cap
exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from . import genperm
from . import matroid as mat
from .dc_triangulator import RetryCapExceeded, triangulate_base_polytope
from .io import subdivision_from_json, subdivision_to_json
from .lattice_polytope import PointConfiguration, PolytopeError, base_polytope, normalized_volume
from .regular_subdivision import EpsilonError, Triangulation, concretize_epsilon
from .verifier import flagness, h_vector, verify

log = logging.getLogger("dctri")

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_RETRY = 0, 2, 3, 4
THREADS_ENV = "DCTRI_THREADS"
CSV_COLUMNS = ["matroid", "n", "bases", "cells", "volume", "h_vector", "flag_status", "wall_time"]


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    seed: int = 0
    t_start: int | None = None
    output: str | None = None
    parallelism: int = 1
    emit_certificate: bool = True


class InputError(ValueError):
    pass


def _load(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def build_triangulation(obj: dict, seed: int, t_start: int | None, independence: bool = False) -> Triangulation:
    """Dispatch on the input kind: matroid, submodular table, or rank shorthand."""
    try:
        if independence:
            M = mat.from_json(obj.get("matroid_rank", obj))
            return genperm.triangulate_independence_polytope(M, seed, t_start)
        if "values" in obj:
            return genperm.triangulate_genperm(genperm.from_json(obj), seed, t_start).triangulation
        if "matroid_rank" in obj:
            return triangulate_base_polytope(mat.from_json(obj["matroid_rank"]), seed, t_start)
        return triangulate_base_polytope(mat.from_json(obj), seed, t_start)
    except (mat.MatroidError, genperm.SubmodularError, PolytopeError, KeyError, TypeError) as exc:
        raise InputError(str(exc)) from exc


def dumps(obj: dict) -> str:
    """One top-level key per line, values compact; stable for diffing."""
    body = ",\n".join(f" {json.dumps(k)}: {json.dumps(v, separators=(',', ':'))}" for k, v in obj.items())
    return "{\n" + body + "\n}\n"


def _emit(obj, output: str | None) -> None:
    text = dumps(obj)
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_triangulate(args) -> int:
    T = build_triangulation(_load(args.input), args.seed, args.t_start, args.independence)
    flat = None
    if not args.no_certificate:
        eps, flat = concretize_epsilon(T.base, T.heights, T)
        T = replace(T, epsilon=eps)
    report = verify(T, flat)
    if not report.passed:
        log.error("built-in verifier rejected the triangulation: %s", report.failures[:3])
        return EXIT_VERIFY
    out = subdivision_to_json(T, flat, include_certificate=not args.no_certificate)
    out["report"] = {"cells": report.cells, "volume": report.volume, "h_vector": report.h_vector}
    _emit(out, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        S, flat = subdivision_from_json(_load(args.input))
    except (PolytopeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    report = verify(S, flat)
    out = report.to_json()
    ok = report.passed
    if report.regular_certified == "unverifiable":
        out["warning"] = "no regularity certificate"
        ok = (
            args.allow_uncertified
            and report.unimodular_all
            and report.face_to_face
            and report.covers
        )
    _emit(out, args.output)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_hstar(args) -> int:
    T = build_triangulation(_load(args.input), args.seed, args.t_start, args.independence)
    _emit({"h_star": h_vector(T), "volume": normalized_volume(T.base), "cells": len(T.cells)}, args.output)
    return EXIT_OK


def cmd_dice(args) -> int:
    obj = _load(args.input)
    try:
        f = genperm.from_json(obj)
        offset = genperm.box_offset(f)
        pts = [tuple(a - b for a, b in zip(p, offset)) for p in genperm.lattice_points(f)]
        S = genperm.dice(PointConfiguration(tuple(pts)))
    except (genperm.SubmodularError, mat.MatroidError, KeyError) as exc:
        raise InputError(str(exc)) from exc
    out = subdivision_to_json(S)
    out["offset"] = list(offset)
    _emit(out, args.output)
    return EXIT_OK


def cmd_flagcheck(args) -> int:
    obj = _load(args.input)
    if "cells" in obj:
        S, _ = subdivision_from_json(obj)
    else:
        S = build_triangulation(obj, args.seed, args.t_start, args.independence)
    st = flagness(S, args.budget)
    _emit({"flag_status": st.status, "witness": list(st.witness) if st.witness else None}, args.output)
    return EXIT_OK


def corpus_family(name: str, max_n: int) -> list[mat.Matroid]:
    K4 = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    if name == "uniform":
        return [mat.uniform(k, n) for n in range(1, max_n + 1) for k in range(1, n + 1)]
    if name == "graphic":
        graphs = {
            "triangle": [(1, 2), (2, 3), (1, 3)],
            "C4": [(1, 2), (2, 3), (3, 4), (1, 4)],
            "K4-e": [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)],
            "K4": K4,
        }
        return [mat.graphic(e, name=f"graphic({k})") for k, e in graphs.items() if len(e) <= max_n]
    if name == "direct-sum":
        blocks = [mat.uniform(k, m) for m in range(2, max_n) for k in range(1, m)]
        return [
            mat.direct_sum(A, B)
            for i, A in enumerate(blocks)
            for B in blocks[i:]
            if A.n + B.n <= max_n
        ]
    if name == "acceptance":
        return acceptance_corpus()
    raise InputError(f"unknown family {name!r}")


def acceptance_corpus() -> list[mat.Matroid]:
    out = [mat.uniform(k, n) for n in range(1, 7) for k in range(1, n + 1)]
    out.append(mat.graphic([(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], name="graphic(K4)"))
    out.append(mat.direct_sum(mat.uniform(1, 2), mat.uniform(2, 3)))
    out.append(loop_coloop_matroid())
    return out


def loop_coloop_matroid() -> mat.Matroid:
    """Rank 2 on [4]: 1 is a coloop, 4 a loop, 2 and 3 parallel."""
    return mat.from_bases(4, [[1, 2], [1, 3]], name="coloop+U(1,2)+loop")


def _corpus_row(job) -> list:
    M, seed, timing = job
    t0 = time.perf_counter()
    try:
        T = triangulate_base_polytope(M, seed)
        vol = normalized_volume(base_polytope(M))
        h = " ".join(map(str, h_vector(T)))
        flag = flagness(T).status
        cells = len(T.cells)
    except Exception as exc:  # row failures are recorded, the sweep goes on
        return [repr(M), M.n, len(M.bases), "", "", "", f"error: {exc}", ""]
    wall = f"{time.perf_counter() - t0:.3f}" if timing else ""
    return [M.name or repr(M), M.n, len(M.bases), cells, vol, h, flag, wall]


def cmd_corpus(args) -> int:
    family = corpus_family(args.family, args.max_n)
    jobs = [(M, args.seed, args.timing) for M in family]
    if args.threads > 1:
        with ProcessPoolExecutor(args.threads) as pool:
            rows = list(pool.map(_corpus_row, jobs))
    else:
        rows = [_corpus_row(j) for j in jobs]
    buf = io.StringIO()
    w = csv.writer(buf, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    w.writerows(rows)
    if args.output:
        Path(args.output).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dctri", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("input")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--t-start", type=int, default=None)
        sp.add_argument("-o", "--output")
        sp.add_argument("--threads", type=int, default=int(os.environ.get(THREADS_ENV, "1")))
        sp.add_argument("--independence", action="store_true", help="triangulate the independence polytope")

    sp = sub.add_parser("triangulate", help="build and verify a triangulation")
    common(sp)
    sp.add_argument("--no-certificate", action="store_true", help="skip the flat epsilon certificate")
    sp.set_defaults(func=cmd_triangulate)

    sp = sub.add_parser("verify", help="check a triangulation JSON file")
    sp.add_argument("input")
    sp.add_argument("-o", "--output")
    sp.add_argument("--allow-uncertified", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("hstar", help="h*-vector via the triangulation")
    common(sp)
    sp.set_defaults(func=cmd_hstar)

    sp = sub.add_parser("dice", help="unit-cube dicing of a generalized permutahedron")
    sp.add_argument("input")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_dice)

    sp = sub.add_parser("flagcheck", help="minimal non-face search")
    common(sp)
    sp.add_argument("--budget", type=int, default=64)
    sp.set_defaults(func=cmd_flagcheck)

    sp = sub.add_parser("corpus", help="sweep a matroid family, CSV out")
    common(sp, needs_input=False)
    sp.add_argument("--family", default="uniform", choices=["uniform", "graphic", "direct-sum", "acceptance"])
    sp.add_argument("--max-n", type=int, default=5)
    sp.add_argument("--timing", action="store_true", help="fill the wall_time column")
    sp.set_defaults(func=cmd_corpus)
    return p


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except RetryCapExceeded as exc:
        log.error("%s", exc)
        return EXIT_RETRY
    except EpsilonError as exc:
        log.error("%s", exc)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
