"""Which moment-curve parameters t give a generic functional in dimension m.

Prints one row per m with the failing t values in the scanned range, plus a
resonance vector witnessing the first failure.
"""
import argparse

from dctri.dc_triangulator import make_generic_functional, resonance_flats


def witness(coeffs):
    for basis in resonance_flats(len(coeffs)):
        if all(sum(c * b for c, b in zip(coeffs, v)) == 0 for v in basis):
            return basis
    return None


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-m", type=int, default=5)
    ap.add_argument("--t-max", type=int, default=8)
    args = ap.parse_args()
    for m in range(1, args.max_m + 1):
        bad = []
        for t in range(2, args.t_max + 1):
            w = witness(make_generic_functional(m, t).coefficients)
            if w is not None:
                bad.append((t, w))
        if bad:
            t, w = bad[0]
            print(f"m={m}: non-generic t={[b[0] for b in bad]}, first flat basis at t={t}: {w}")
        else:
            print(f"m={m}: generic for t=2..{args.t_max}")


if __name__ == "__main__":
    main()
