"""Run the triangulator over a few matroids and seeds and report how the
cell sets vary, together with retries and the h-vector (seed independent)."""
import argparse
import time

from dctri import matroid as mat
from dctri.dc_triangulator import triangulate_base_polytope
from dctri.lattice_polytope import normalized_volume
from dctri.verifier import h_vector, verify

K4 = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=6)
    ap.add_argument("--verify", action="store_true", help="run the full verifier on each output")
    args = ap.parse_args()
    matroids = [mat.uniform(2, 4), mat.uniform(2, 5), mat.uniform(3, 6), mat.graphic(K4, name="graphic(K4)")]
    print("matroid,volume,distinct_cell_sets,max_retries,h_vector,seconds")
    for M in matroids:
        start = time.perf_counter()
        seen, retries, hv = set(), 0, None
        for seed in range(args.seeds):
            T = triangulate_base_polytope(M, seed=seed)
            retries = max(retries, len(T.metadata["t_sequence"]) - 1)
            seen.add(T.cell_sets())
            hv = h_vector(T)
            if args.verify and not verify(T).passed:
                raise SystemExit(f"verification failed for {M.name} seed {seed}")
        vol = normalized_volume(T.base)
        dt = time.perf_counter() - start
        print(f"{M.name},{vol},{len(seen)},{retries},\"{hv}\",{dt:.2f}")


if __name__ == "__main__":
    main()
