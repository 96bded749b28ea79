"""The direct-limit pseudometric of a monotone sequence and its supporting
constructions: valley-chain normal form, pseudometric extension along the
tower, adequate sequences, and the quantitative generation check.

The defining infimum over chains is attained by a simple chain (edge
weights are nonnegative, so deleting a revisited point never increases the
weight), which turns the limit pseudometric into an all-pairs shortest
path problem over exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    Entourage,
    MonotonePseudometricSequence,
    Pseudometric,
    Tower,
    shortest_path_closure,
)
from .errors import IndexOutOfRange, NotAnEntourage, NotUniform, PreconditionFailed
from .relations import multiple


@dataclass(frozen=True)
class Chain:
    """A nonempty list of element indices; weight is defined for any chain."""

    points: tuple[int, ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("chain must be nonempty")


def chain_weight(seq: MonotonePseudometricSequence, chain: Chain) -> Fraction:
    """Sum of link distances, each measured at the link's pair height."""
    t = seq.tower
    total = Fraction(0)
    pts = chain.points
    for x in pts:
        if not 0 <= x < t.ground_size:
            raise IndexOutOfRange(f"chain point {x}")
    for a, b in zip(pts, pts[1:]):
        total += seq[t.pair_height(a, b)].dist[a][b]
    return total


def _link_weights(seq: MonotonePseudometricSequence) -> list[list[Fraction]]:
    t = seq.tower
    n = t.ground_size
    heights = [t.height(x) for x in range(n)]
    return [
        [seq[max(heights[x], heights[y])].dist[x][y] for y in range(n)] for x in range(n)
    ]


@dataclass(frozen=True)
class LimitPseudometric:
    """The limit pseudometric on the full ground set, with its source."""

    dist: Pseudometric
    source: MonotonePseudometricSequence

    def __call__(self, x: int, y: int) -> Fraction:
        return self.dist.dist[x][y]


def limit_pseudometric(seq: MonotonePseudometricSequence) -> LimitPseudometric:
    """Minimum chain weight for each pair: all-pairs shortest path of the
    complete graph weighted by pair-height distances."""
    closed = shortest_path_closure(_link_weights(seq))
    return LimitPseudometric(Pseudometric(closed), seq)


def witness_chain(seq: MonotonePseudometricSequence, x: int, y: int) -> Chain:
    """A minimum-weight simple chain from x to y, preferring the
    lexicographically smallest point sequence among optima."""
    t = seq.tower
    n = t.ground_size
    w = _link_weights(seq)
    dist = shortest_path_closure(w)
    points = [x]
    cur = x
    while cur != y:
        # greedy step: smallest next point lying on some optimal chain
        for z in range(n):
            if z != cur and w[cur][z] + dist[z][y] == dist[cur][y]:
                points.append(z)
                cur = z
                break
        else:
            raise AssertionError("no optimal step; shortest paths inconsistent")
    return Chain(tuple(points))


def valley_witness_chain(seq: MonotonePseudometricSequence, x: int, y: int) -> Chain:
    """An optimal chain in valley normal form.

    Starts from an optimal simple chain and repeatedly deletes an interior
    point at least as high as both neighbors; monotonicity and the triangle
    inequality make the deletion weight-nonincreasing.
    """
    t = seq.tower
    pts = list(witness_chain(seq, x, y).points)
    changed = True
    while changed:
        changed = False
        for i in range(1, len(pts) - 1):
            h = t.height(pts[i])
            if h >= t.height(pts[i - 1]) and h >= t.height(pts[i + 1]):
                del pts[i]
                changed = True
                break
    return Chain(tuple(pts))


def valley_distance(seq: MonotonePseudometricSequence, x: int, y: int) -> Fraction:
    """Minimum weight over valley chains: every interior point lower than
    the higher of its neighbors, i.e. heights strictly decrease to a valley
    and then strictly increase.

    Dynamic programming: D[u] is the cheapest strictly-descending chain
    from x to u, A[v] the cheapest strictly-ascending chain from v to y;
    the valley step joins them (u = v joins at a shared bottom point).
    """
    t = seq.tower
    n = t.ground_size
    for p in (x, y):
        if not 0 <= p < n:
            raise IndexOutOfRange(f"element {p}")
    w = _link_weights(seq)
    heights = [t.height(p) for p in range(n)]
    order = sorted(range(n), key=lambda p: -heights[p])

    NO = None
    desc: list[Fraction | None] = [NO] * n
    desc[x] = Fraction(0)
    for u in order:
        if desc[u] is None:
            continue
        for v in range(n):
            if heights[v] < heights[u]:
                c = desc[u] + w[u][v]
                if desc[v] is None or c < desc[v]:
                    desc[v] = c

    asc: list[Fraction | None] = [NO] * n
    asc[y] = Fraction(0)
    for v in order:
        if asc[v] is None:
            continue
        for u in range(n):
            if heights[u] < heights[v]:
                c = asc[v] + w[u][v]
                if asc[u] is None or c < asc[u]:
                    asc[u] = c

    best: Fraction | None = None
    for u in range(n):
        if desc[u] is None:
            continue
        for v in range(n):
            if asc[v] is None or heights[u] > heights[v]:
                continue
            c = desc[u] + (Fraction(0) if u == v else w[u][v]) + asc[v]
            if best is None or c < best:
                best = c
    assert best is not None  # u = v = bottom of x and y always connects
    return best


def extend_pseudometric(tower: Tower, rho: Pseudometric, to_level: int) -> Pseudometric:
    """Extend a uniform pseudometric on a lower level to a higher one,
    level by level, with exact restriction.

    One step uses Lipschitz domination plus two-sided gluing: with
    D = L * d_next for L large enough that D dominates rho on the lower
    square, the extension is min(D(x,y), min over a,b below of
    D(x,a) + rho(a,b) + D(b,y)).
    """
    k = None
    for n, m in enumerate(tower.level_sizes):
        if m == rho.size:
            k = n
            break
    if k is None:
        raise IndexOutOfRange(f"no level has size {rho.size}")
    if not k <= to_level <= tower.top_level:
        raise IndexOutOfRange(f"target level {to_level}")

    level_zero = tower.metric(k).zero_pairs()
    for i, j in level_zero:
        if rho.dist[i][j] != 0:
            raise NotUniform(
                f"pseudometric positive on zero-pair "
                f"({tower.labels[i]},{tower.labels[j]}) of level {k}"
            )

    cur = rho
    for n in range(k + 1, to_level + 1):
        cur = _extend_one(tower, cur, n)
    return cur


def _extend_one(tower: Tower, rho: Pseudometric, n: int) -> Pseudometric:
    m_low = rho.size
    d = tower.metric(n)
    m = d.size
    if all(v == 0 for row in rho.dist for v in row):
        return Pseudometric.zero(m)

    positive_base = [
        d.dist[i][j]
        for i in range(m_low)
        for j in range(m_low)
        if rho.dist[i][j] > 0
    ]
    lip = rho.max_value() / min(positive_base)
    big = [[lip * d.dist[i][j] for j in range(m)] for i in range(m)]

    out = [[Fraction(0)] * m for _ in range(m)]
    for x in range(m):
        for y in range(x + 1, m):
            best = big[x][y]
            for a in range(m_low):
                da = big[x][a]
                for b in range(m_low):
                    c = da + rho.dist[a][b] + big[b][y]
                    if c < best:
                        best = c
            out[x][y] = out[y][x] = best
    return Pseudometric(out)


def _target_indicator(tower: Tower, level: int, target: Entourage) -> Pseudometric:
    """Bounded uniform pseudometric with {rho < 1} inside the target.

    The mutual-membership pairs of the target, repaired to a pseudometric
    by one shortest-path pass, vanish on their transitive closure; that
    closure can escape a non-transitive target, in which case the zero-set
    falls back to the level's zero-relation (always inside any entourage
    of the level's uniformity).
    """
    d = tower.metric(level)
    m = d.size
    mutual = [
        [target.contains(i, j) and target.contains(j, i) for j in range(m)]
        for i in range(m)
    ]
    closed = shortest_path_closure(
        [[Fraction(0) if mutual[i][j] else Fraction(1) for j in range(m)] for i in range(m)]
    )
    inside = all(
        target.contains(i, j)
        for i in range(m)
        for j in range(m)
        if closed[i][j] == 0
    )
    if inside:
        return Pseudometric(closed)
    return Pseudometric(
        [
            [Fraction(0) if d.dist[i][j] == 0 else Fraction(1) for j in range(m)]
            for i in range(m)
        ]
    )


def adequate_sequence(tower: Tower, targets) -> MonotonePseudometricSequence:
    """A monotone sequence (d_n) with {d_n < 1} inside the n-th target.

    ``targets`` is an EntourageSequence starting at level 0 (or any list of
    per-level entourages); each target must contain its level's
    zero-relation.  The n-th metric is the sum over k <= n of the
    level-by-level extensions of a bounded 0/1 pseudometric whose unit
    sublevel lies inside the k-th target; the n-th summand alone forces
    {d_n < 1} inside the n-th target.
    """
    entries = targets.entries if hasattr(targets, "entries") else tuple(targets)
    if len(entries) != tower.num_levels:
        raise NotAnEntourage(len(entries), "need one target per level")
    for n, e in enumerate(entries):
        if e.size != tower.level_sizes[n]:
            raise NotAnEntourage(n, f"target at level {n} has wrong size")
        if not tower.zero_relation(n).issubset(e):
            raise NotAnEntourage(n)

    rhos = [_target_indicator(tower, k, entries[k]) for k in range(tower.num_levels)]
    metrics = []
    extended = []  # extended[k] = rho_k carried up to the current level
    for n in range(tower.num_levels):
        extended = [extend_pseudometric(tower, r, n) for r in extended]
        extended.append(rhos[n])
        m = tower.level_sizes[n]
        total = [[Fraction(0)] * m for _ in range(m)]
        for r in extended:
            for i in range(m):
                for j in range(m):
                    total[i][j] += r.dist[i][j]
        metrics.append(Pseudometric(total))
    return MonotonePseudometricSequence(tower, metrics)


@dataclass(frozen=True)
class GenerationVerdict:
    confirmed: bool
    counterexample: tuple[int, int] | None = None


def verify_generation(
    tower: Tower,
    u: Entourage,
    seq: MonotonePseudometricSequence,
    ladder: Sequence[Entourage],
) -> GenerationVerdict:
    """Check {lim d_n < 1} inside U, given a ladder U_0, U_1, ... of
    top-level entourages with 5*U_0 inside U and 2*U_{n+1} inside U_n, and
    {d_n < 1} inside U_n for every level n.

    A counterexample pair always indicates an implementation bug, never a
    property of the instance.
    """
    top = tower.top_level
    size = tower.ground_size
    u = u.promote(top, size)
    entries = ladder.entries if hasattr(ladder, "entries") else ladder
    steps = [e.promote(top, size) for e in entries]
    if len(steps) < tower.num_levels:
        raise PreconditionFailed("ladder must cover every level of the tower")
    if not multiple(steps[0], 5).issubset(u):
        raise PreconditionFailed("5*U_0 is not contained in U")
    for n in range(len(steps) - 1):
        if not multiple(steps[n + 1], 2).issubset(steps[n]):
            raise PreconditionFailed(f"2*U_{n + 1} is not contained in U_{n}")
    for n in range(tower.num_levels):
        unit = seq[n].sublevel_pairs(Fraction(1))
        for i, j in unit:
            if not steps[n].contains(i, j):
                raise PreconditionFailed(f"{{d_{n} < 1}} is not contained in U_{n}")

    dlim = limit_pseudometric(seq)
    for x in range(size):
        for y in range(size):
            if dlim(x, y) < 1 and not u.contains(x, y):
                return GenerationVerdict(False, (x, y))
    return GenerationVerdict(True)
