"""Matroids given by an explicit list of bases.

Elements are ``1..n`` externally; internally a subset is a bitmask with bit
``i - 1`` standing for element ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

MAX_N = 16


class MatroidError(ValueError):
    pass


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _drop_bit(mask: int, i: int) -> int:
    """Remove bit ``i`` (0-based) and shift the higher bits down."""
    low = mask & ((1 << i) - 1)
    return low | ((mask >> (i + 1)) << i)


@dataclass(frozen=True)
class Matroid:
    n: int
    bases: frozenset[int]
    # original labels of the (re-indexed) ground set, for minors
    labels: tuple[int, ...] = field(default=(), compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.n > MAX_N:
            raise MatroidError(f"n={self.n} exceeds the explicit-basis cap {MAX_N}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(1, self.n + 1)))

    @property
    def rank_total(self) -> int:
        return bin(next(iter(self.bases))).count("1")

    def rank(self, S: Iterable[int] | int) -> int:
        s = S if isinstance(S, int) else mask_of(S)
        return max(bin(b & s).count("1") for b in self.bases)

    def is_loop(self, e: int) -> bool:
        bit = 1 << (e - 1)
        return all(not b & bit for b in self.bases)

    def is_coloop(self, e: int) -> bool:
        bit = 1 << (e - 1)
        return all(b & bit for b in self.bases)

    def independent_sets(self) -> list[int]:
        seen: set[int] = set()
        for b in self.bases:
            sub = b
            while True:
                seen.add(sub)
                if sub == 0:
                    break
                sub = (sub - 1) & b
        return sorted(seen)

    def bases_as_sets(self) -> list[tuple[int, ...]]:
        return sorted(elements_of(b) for b in self.bases)

    def __repr__(self) -> str:
        label = self.name or "Matroid"
        return f"{label}(n={self.n}, r={self.rank_total}, |B|={len(self.bases)})"


def exchange_violation(M: Matroid) -> tuple | None:
    """First ``(B1, B2, x)`` breaking basis exchange, or None.

    Also reports an empty family as ``()`` and unequal sizes as
    ``(B1, B2, None)``.
    """
    if not M.bases:
        return ()
    bases = sorted(M.bases)
    sizes = {bin(b).count("1") for b in bases}
    if len(sizes) > 1:
        small = min(bases, key=lambda b: bin(b).count("1"))
        big = max(bases, key=lambda b: bin(b).count("1"))
        return (elements_of(small), elements_of(big), None)
    for b1 in bases:
        for b2 in bases:
            diff = b1 & ~b2
            while diff:
                xbit = diff & -diff
                diff ^= xbit
                rest = b1 & ~xbit
                cand = b2 & ~b1
                ok = False
                while cand:
                    ybit = cand & -cand
                    cand ^= ybit
                    if rest | ybit in M.bases:
                        ok = True
                        break
                if not ok:
                    return (elements_of(b1), elements_of(b2), xbit.bit_length())
    return None


def validate(M: Matroid) -> bool:
    return exchange_violation(M) is None


def from_bases(n: int, bases: Iterable[Sequence[int]], name: str = "") -> Matroid:
    masks = set()
    for B in bases:
        if any(not 1 <= e <= n for e in B):
            raise MatroidError(f"basis {tuple(B)} not inside [1..{n}]")
        masks.add(mask_of(B))
    M = Matroid(n, frozenset(masks), name=name)
    bad = exchange_violation(M)
    if bad is not None:
        raise MatroidError(f"not a matroid, exchange fails at {bad}")
    return M


def uniform(r: int, n: int) -> Matroid:
    if not 0 <= r <= n:
        raise MatroidError(f"uniform matroid needs 0 <= r <= n, got r={r}, n={n}")
    masks = frozenset(mask_of(c) for c in combinations(range(1, n + 1), r))
    return Matroid(n, masks, name=f"U({r},{n})")


def graphic(edges: Sequence[Sequence[int]], vertices: int | None = None, name: str = "") -> Matroid:
    """Cycle matroid; element ``i`` is ``edges[i-1]``, bases are spanning forests."""
    if vertices is None:
        vertices = max((max(e) for e in edges), default=0)

    def components(edge_idx) -> int:
        parent = list(range(vertices + 1))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        count = vertices
        for i in edge_idx:
            u, v = find(edges[i][0]), find(edges[i][1])
            if u != v:
                parent[u] = v
                count -= 1
        return count

    m = len(edges)
    r = vertices - components(range(m))
    masks = set()
    for combo in combinations(range(m), r):
        if vertices - components(combo) == r:
            masks.add(mask_of(i + 1 for i in combo))
    return Matroid(m, frozenset(masks), name=name or f"graphic({m} edges)")


def direct_sum(M1: Matroid, M2: Matroid) -> Matroid:
    masks = frozenset(b1 | (b2 << M1.n) for b1 in M1.bases for b2 in M2.bases)
    return Matroid(M1.n + M2.n, masks, name=f"{M1.name or 'M'}+{M2.name or 'M'}")


def delete(M: Matroid, e: int) -> Matroid:
    if M.is_coloop(e):
        raise MatroidError(f"cannot delete coloop {e}")
    bit = 1 << (e - 1)
    masks = frozenset(_drop_bit(b, e - 1) for b in M.bases if not b & bit)
    labels = M.labels[: e - 1] + M.labels[e:]
    return Matroid(M.n - 1, masks, labels=labels, name=f"{M.name}\\{e}" if M.name else "")


def contract(M: Matroid, e: int) -> Matroid:
    if M.is_loop(e):
        raise MatroidError(f"cannot contract loop {e}")
    bit = 1 << (e - 1)
    masks = frozenset(_drop_bit(b, e - 1) for b in M.bases if b & bit)
    labels = M.labels[: e - 1] + M.labels[e:]
    return Matroid(M.n - 1, masks, labels=labels, name=f"{M.name}/{e}" if M.name else "")


def indicator(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


# -- JSON form ---------------------------------------------------------------

def from_json(obj: dict) -> Matroid:
    if "uniform" in obj:
        spec = obj["uniform"]
        return uniform(int(spec["r"]), int(spec["n"]))
    if "graphic" in obj:
        spec = obj["graphic"]
        return graphic([tuple(e) for e in spec["edges"]], spec.get("vertices"))
    if "direct_sum" in obj:
        parts = [from_json(o) for o in obj["direct_sum"]]
        out = parts[0]
        for p in parts[1:]:
            out = direct_sum(out, p)
        return out
    if "bases" in obj:
        return from_bases(int(obj["n"]), obj["bases"], name=obj.get("name", ""))
    raise MatroidError(f"unrecognized matroid JSON keys: {sorted(obj)}")


def to_json(M: Matroid) -> dict:
    return {"n": M.n, "bases": [list(b) for b in M.bases_as_sets()]}
