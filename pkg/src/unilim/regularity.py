"""Regularity at a subset, the continuity criterion for maps off a
direct limit, the homeomorphism criterion, and direct continuity checking
against the limit topology.

Every verdict carries a certificate: a witness table for true verdicts, a
concrete counterexample for false ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import Entourage, Tower
from .errors import GroundMismatch, LevelOutOfRange, NotInverse
from .relations import ball_set
from .topology import TopologyComparison, compare_topologies, ulim_topology


@dataclass(frozen=True)
class SpaceMap:
    """A function between tower ground sets, given by a value table over
    the source's top level.  A plain uniform space target is a one-level
    tower."""

    source: Tower
    target: Tower
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.source.ground_size:
            raise GroundMismatch("value table must cover the top source level")
        for v in self.values:
            if not 0 <= v < self.target.ground_size:
                raise GroundMismatch(f"target index {v} out of range")

    def __call__(self, x: int) -> int:
        return self.values[x]


@dataclass(frozen=True)
class RegularityVerdict:
    regular: bool
    level: int
    # witness table: for each (target grid index, source grid index) the
    # entourage W that satisfies the condition, when regular
    witness_table: tuple[tuple[int, int, Entourage], ...] = ()
    failing_u: Optional[Entourage] = None
    failing_v: Optional[Entourage] = None
    failing_point: Optional[int] = None
    # metadata: whether the lower level is closed in this level (no outside
    # point carries a zero-pair into it); non-closed instances are flagged,
    # not rejected
    subset_closed: bool = True


def _target_grid(target: Tower) -> list[Entourage]:
    """Base of the target's uniformity.  At finite scale the direct-limit
    uniformity of a tower coincides with that of its top metric (the top
    zero-relation is the minimal entourage), so the top grid is a base."""
    return target.grid_entourages(target.top_level)


def _condition_holds(
    f: SpaceMap, n: int, u: Entourage, v: Entourage, w: Entourage
) -> Optional[int]:
    """Definition-4 body for fixed (U, V, W) at level n: every point of
    B(X_{n-1}; W) admits a point of X_{n-1} that is V-close in the source
    and U-close in the image.  Returns a defeating point or None."""
    t = f.source
    below = range(t.level_sizes[n - 1])
    for x in ball_set(below, w):
        ok = any(
            v.contains(a, x) and u.contains(f(x), f(a)) for a in below
        )
        if not ok:
            return x
    return None


def is_regular_at(f: SpaceMap, level: int) -> RegularityVerdict:
    """Regularity of f restricted to the given level, at the subset one
    level below, quantified over grid entourages.

    The condition is antitone in W, so testing the smallest grid
    entourage, the zero-relation, is complete: if it fails there, no W
    works.
    """
    t = f.source
    if not 1 <= level <= t.top_level:
        raise LevelOutOfRange(f"regularity needs a level in 1..{t.top_level}")
    w0 = t.zero_relation(level)
    below = range(t.level_sizes[level - 1])
    closed = ball_set(below, w0) <= frozenset(below)
    table = []
    for iu, u in enumerate(_target_grid(f.target)):
        for iv, v in enumerate(t.grid_entourages(level)):
            bad = _condition_holds(f, level, u, v, w0)
            if bad is not None:
                return RegularityVerdict(
                    False,
                    level,
                    failing_u=u,
                    failing_v=v,
                    failing_point=bad,
                    subset_closed=closed,
                )
            table.append((iu, iv, w0))
    return RegularityVerdict(True, level, tuple(table), subset_closed=closed)


@dataclass(frozen=True)
class ContinuityVerdict:
    continuous: bool
    witness_open: Optional[frozenset[int]] = None  # target open with non-open preimage


def is_continuous(f: SpaceMap) -> ContinuityVerdict:
    """Direct check: the preimage of every open of the target's limit
    topology is open in the source's limit topology."""
    src = ulim_topology(f.source)
    tgt = ulim_topology(f.target)
    for o in tgt.opens_masks():
        pre = 0
        for x in range(f.source.ground_size):
            if o >> f(x) & 1:
                pre |= 1 << x
        if not src.is_open_mask(pre):
            return ContinuityVerdict(
                False,
                frozenset(i for i in range(f.target.ground_size) if o >> i & 1),
            )
    return ContinuityVerdict(True)


@dataclass(frozen=True)
class CriterionVerdict:
    hypothesis: bool
    conclusion: bool
    # certificates
    discontinuous_level: Optional[int] = None
    zero_pair: Optional[tuple[int, int]] = None
    regularity: tuple[RegularityVerdict, ...] = ()
    continuity: Optional[ContinuityVerdict] = None
    theorem_violation: bool = False  # hypothesis true but map discontinuous


def _restriction_continuous(f: SpaceMap, n: int) -> Optional[tuple[int, int]]:
    """Finite form of continuity of f on level n: zero-pairs map to
    zero-pairs of the target's top metric.  Returns a violating pair."""
    d = f.source.metric(n)
    dy = f.target.metric(f.target.top_level)
    for i in range(d.size):
        for j in range(d.size):
            if d.dist[i][j] == 0 and dy.dist[f(i)][f(j)] != 0:
                return (i, j)
    return None


def continuity_criterion(f: SpaceMap) -> CriterionVerdict:
    """Continuity criterion: the hypothesis (restrictions continuous and
    regular one level down) together with the direct continuity
    conclusion.  A true hypothesis with a false conclusion is an
    implementation bug and is flagged as a theorem violation."""
    t = f.source
    for n in range(t.num_levels):
        bad = _restriction_continuous(f, n)
        if bad is not None:
            return CriterionVerdict(
                False,
                is_continuous(f).continuous,
                discontinuous_level=n,
                zero_pair=bad,
                continuity=is_continuous(f),
            )
    regs = []
    for n in range(1, t.num_levels):
        r = is_regular_at(f, n)
        regs.append(r)
        if not r.regular:
            return CriterionVerdict(
                False,
                is_continuous(f).continuous,
                regularity=tuple(regs),
                continuity=is_continuous(f),
            )
    cont = is_continuous(f)
    return CriterionVerdict(
        True,
        cont.continuous,
        regularity=tuple(regs),
        continuity=cont,
        theorem_violation=not cont.continuous,
    )


@dataclass(frozen=True)
class HomeoVerdict:
    homeomorphism: bool
    forward: CriterionVerdict
    backward: CriterionVerdict
    transport_comparison: TopologyComparison


def homeo_criterion(h: SpaceMap, h_inv: SpaceMap) -> HomeoVerdict:
    """Homeomorphism check: both directions continuous per the criterion,
    cross-checked against a comparison of the limit topologies transported
    along the bijection."""
    ns, nt = h.source.ground_size, h.target.ground_size
    if ns != nt or sorted(h.values) != list(range(nt)):
        raise NotInverse("map is not a bijection of the top levels")
    for x in range(ns):
        if h_inv(h(x)) != x:
            raise NotInverse(f"h_inv(h({x})) != {x}")
    for y in range(nt):
        if h(h_inv(y)) != y:
            raise NotInverse(f"h(h_inv({y})) != {y}")

    fwd = continuity_criterion(h)
    bwd = continuity_criterion(h_inv)

    src = ulim_topology(h.source)
    tgt = ulim_topology(h.target)
    transported = transport_topology(src, h.values)
    comparison = compare_topologies(transported, tgt)
    return HomeoVerdict(
        fwd.conclusion and bwd.conclusion, fwd, bwd, comparison
    )


def transport_topology(top, bijection):
    """Push a topology forward along a bijection of the ground set."""
    from .topology import TopologyFamily

    n = top.ground_size
    nbhd = [0] * n
    for x in range(n):
        m = top.min_nbhd[x]
        out = 0
        while m:
            y = (m & -m).bit_length() - 1
            out |= 1 << bijection[y]
            m &= m - 1
        nbhd[bijection[x]] = out
    return TopologyFamily(n, nbhd)
