"""Set-system designs: t-designs, BIBDs and transversal designs.

Points are non-negative integers kept in ascending order, which is the global
point order used by the cover constructions.  Blocks are sorted tuples and
the block list is sorted lexicographically.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import TYPE_CHECKING, Iterable, List, Optional, Sequence, Tuple

from .gf import FieldError, field_of_order, prime_power
from .subspace import enumerate_subspaces

if TYPE_CHECKING:
    from .binmat import BinaryMatrix

Block = Tuple[int, ...]


class DesignError(ValueError):
    pass


@dataclass(frozen=True)
class DesignParams:
    t: int
    v: int
    k: int
    lam: int

    def __post_init__(self):
        if not (self.v > self.k >= self.t >= 1 and self.lam >= 1):
            raise DesignError(f"invalid design parameters {self}")

    @property
    def b(self) -> int:
        return lambda_s(self, 0)

    @property
    def rep(self) -> int:
        """Blocks through each point (lambda_1)."""
        return lambda_s(self, 1)


def lambda_s(params: DesignParams, s: int) -> int:
    """Number of blocks containing a fixed s-subset of points, 0 <= s <= t."""
    if not 0 <= s <= params.t:
        raise DesignError(f"s={s} outside [0, {params.t}]")
    val = Fraction(params.lam * comb(params.v - s, params.t - s), comb(params.k - s, params.t - s))
    if val.denominator != 1:
        raise DesignError(f"lambda_{s} = {val} is not integral; no {params} design exists")
    return int(val)


@dataclass(frozen=True)
class Design:
    """A t-(v,k,lambda) design, optionally carrying transversal-design groups."""

    points: Tuple[int, ...]
    blocks: Tuple[Block, ...]
    t: int
    k: int
    lam: int
    groups: Optional[Tuple[Tuple[int, ...], ...]] = None

    @classmethod
    def build(cls, points: Iterable[int], blocks: Iterable[Iterable[int]], t: int, k: int,
              lam: int, groups: Optional[Iterable[Iterable[int]]] = None) -> "Design":
        pts = tuple(sorted(points))
        blks = tuple(sorted(tuple(sorted(b)) for b in blocks))
        grps = None
        if groups is not None:
            grps = tuple(tuple(sorted(g)) for g in groups)
        return cls(pts, blks, t, k, lam, grps)

    @property
    def v(self) -> int:
        return len(self.points)

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def params(self) -> DesignParams:
        return DesignParams(self.t, self.v, self.k, self.lam)

    @property
    def rep(self) -> int:
        return sum(1 for blk in self.blocks if self.points[0] in blk)

    def blocks_containing(self, x: int) -> List[Block]:
        return [blk for blk in self.blocks if x in blk]


@dataclass
class DesignReport:
    ok: bool
    violations: List[str]

    def __bool__(self) -> bool:
        return self.ok


def verify_design(d: Design, max_witnesses: int = 10) -> DesignReport:
    """Exhaustive check of T1-T3, or TD1-TD4 when groups are present."""
    bad: List[str] = []

    def note(msg: str) -> None:
        if len(bad) < max_witnesses:
            bad.append(msg)

    pts = set(d.points)
    if len(pts) != len(d.points):
        note("T1: repeated point ids")
    if d.groups is None and not d.v > d.k >= d.t >= 1:
        note(f"parameters violate v > k >= t >= 1: v={d.v} k={d.k} t={d.t}")
    for i, blk in enumerate(d.blocks):
        if len(set(blk)) != d.k:
            note(f"T2: block {i} {blk} does not have {d.k} distinct points")
        stray = [x for x in blk if x not in pts]
        if stray:
            note(f"T2: block {i} {blk} uses unknown points {stray}")
    if bad:
        return DesignReport(False, bad)

    if d.groups is None:
        tally = Counter(s for blk in d.blocks for s in combinations(blk, d.t))
        for s in combinations(d.points, d.t):
            n = tally.get(s, 0)
            if n != d.lam:
                note(f"T3: {d.t}-subset {s} lies in {n} blocks, expected {d.lam}")
        return DesignReport(not bad, bad)

    # transversal design
    k = d.k
    n = d.v // k if k else 0
    if d.v != k * n:
        note(f"TD1: |X|={d.v} is not k*n for k={k}")
    if len(d.groups) != k:
        note(f"TD2: {len(d.groups)} groups, expected {k}")
    seen: Counter = Counter(x for g in d.groups for x in g)
    if set(seen) != pts or any(c != 1 for c in seen.values()):
        note("TD2: groups do not partition the point set")
    for gi, g in enumerate(d.groups):
        if len(g) != n:
            note(f"TD2: group {gi} has size {len(g)}, expected {n}")
    if bad:
        return DesignReport(False, bad)
    group_of = {x: gi for gi, g in enumerate(d.groups) for x in g}
    pair_blocks = Counter(s for blk in d.blocks for s in combinations(blk, 2))
    for pair in combinations(d.points, 2):
        same_group = group_of[pair[0]] == group_of[pair[1]]
        nb = pair_blocks.get(pair, 0)
        if same_group and nb:
            note(f"TD4: pair {pair} is in a group and in {nb} blocks")
        elif not same_group and nb != d.lam:
            note(f"TD4: pair {pair} lies in {nb} blocks, expected {d.lam}")
    return DesignReport(not bad, bad)


def _require_prime_power(n: int, what: str = "n") -> None:
    try:
        prime_power(n)
    except FieldError:
        raise DesignError(f"{what}={n} is not a prime power") from None


def construct_projective_bibd(n: int) -> Design:
    """(n^2+n+1, n+1, 1) symmetric BIBD from the projective plane PG(2, n)."""
    _require_prime_power(n)
    f = field_of_order(n)
    points = enumerate_subspaces(f, 3, 1)
    lines = enumerate_subspaces(f, 3, 2)
    # membership via span vectors: a line holds exactly n+1 points
    index = {}
    for i, p in enumerate(points):
        index[p.basis[0]] = i
    blocks = []
    for ln in lines:
        members = set()
        for vec in ln.vectors():
            if any(vec):
                lead = next(x for x in vec if x)
                inv = f.inv(lead)
                members.add(index[tuple(f.mul(inv, x) for x in vec)])
        blocks.append(members)
    return Design.build(range(len(points)), blocks, t=2, k=n + 1, lam=1)


def construct_affine_bibd(n: int) -> Design:
    """(n^2, n, 1) BIBD from the affine plane AG(2, n); point (x, y) has id x*n + y."""
    _require_prime_power(n)
    f = field_of_order(n)
    blocks = []
    for m in range(n):
        for c in range(n):
            blocks.append([x * n + f.add(f.mul(m, x), c) for x in range(n)])
    for c in range(n):
        blocks.append([c * n + y for y in range(n)])
    return Design.build(range(n * n), blocks, t=2, k=n, lam=1)


def construct_transversal(k: int, n: int) -> Design:
    """TD(k, n) for 2 <= k <= n+1 from the orthogonal array of GF(n) lines.

    Point (group j, symbol s) has id ``j*n + s``.  Block (a, b) meets group
    j < min(k, n) in symbol ``a*m_j + b`` (slope ``m_j = j``) and, when
    k = n+1, the last group in symbol ``a``.
    """
    _require_prime_power(n)
    if not 2 <= k <= n + 1:
        raise DesignError(f"TD(k, n) needs 2 <= k <= n+1, got k={k}, n={n}")
    f = field_of_order(n)
    blocks = []
    for a in range(n):
        for b in range(n):
            blk = [j * n + f.add(f.mul(a, j), b) for j in range(min(k, n))]
            if k == n + 1:
                blk.append(n * n + a)
            blocks.append(blk)
    groups = [[j * n + s for s in range(n)] for j in range(k)]
    return Design.build(range(k * n), blocks, t=2, k=k, lam=1, groups=groups)


STEINER3_MAX_Q = 5


def construct_steiner3(q: int) -> Design:
    """3-(q^2+1, q+1, 1) design: orbit of GF(q) + {inf} under PGL(2, q^2).

    Points are the elements of GF(q^2) (ids 0..q^2-1) and infinity (id q^2).
    """
    _require_prime_power(q, "q")
    if not 2 <= q <= STEINER3_MAX_Q:
        raise DesignError(f"q={q} outside supported range [2, {STEINER3_MAX_Q}]")
    p, m = prime_power(q)
    f = field_of_order(q * q)
    inf = f.q
    base = tuple(f.subfield(q)) + (inf,)

    def image(a, b, c, d, z):
        if z == inf:
            return inf if c == 0 else f.div(a, c)
        den = f.add(f.mul(c, z), d)
        if den == 0:
            return inf
        return f.div(f.add(f.mul(a, z), b), den)

    seen = set()
    # normalise (c, d) so that the leading nonzero entry is 1
    for a in range(f.q):
        for b in range(f.q):
            for c, d in [(1, d) for d in range(f.q)] + [(0, 1)]:
                if f.sub(f.mul(a, d), f.mul(b, c)) == 0:
                    continue
                seen.add(tuple(sorted(image(a, b, c, d, z) for z in base)))
    d = Design.build(range(f.q + 1), seen, t=3, k=q + 1, lam=1)
    if d.b != d.params.b:  # pragma: no cover
        raise DesignError(f"orbit has {d.b} blocks, expected {d.params.b}")
    return d


def incidence_matrix(d: Design, transpose: bool = False) -> "BinaryMatrix":
    """v x b point/block incidence matrix (b x v when ``transpose``)."""
    from .binmat import BinaryMatrix

    pidx = {x: i for i, x in enumerate(d.points)}
    ones = [(pidx[x], j) for j, blk in enumerate(d.blocks) for x in blk]
    rows = [point_label(x) for x in d.points]
    cols = [block_label(blk) for blk in d.blocks]
    if transpose:
        return BinaryMatrix(cols, rows, [(j, i) for i, j in ones])
    return BinaryMatrix(rows, cols, ones)


def point_label(x: int) -> str:
    return str(x)


def block_label(blk: Sequence[int]) -> str:
    return ".".join(map(str, blk))


# -- text format ------------------------------------------------------------

def design_to_text(d: Design) -> str:
    lines = [f"DESIGN {d.t} {d.v} {d.k} {d.lam}", "POINTS " + " ".join(map(str, d.points))]
    for g in d.groups or ():
        lines.append("GROUP " + " ".join(map(str, g)))
    lines.extend("BLOCK " + " ".join(map(str, blk)) for blk in d.blocks)
    return "\n".join(lines) + "\n"


def design_from_text(text: str) -> Design:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "DESIGN" or len(lines[0]) != 5:
        raise DesignError("expected header 'DESIGN t v k lambda'")
    t, v, k, lam = map(int, lines[0][1:])
    if len(lines) < 2 or lines[1][0] != "POINTS":
        raise DesignError("expected 'POINTS' on line 2")
    points = list(map(int, lines[1][1:]))
    if len(points) != v:
        raise DesignError(f"POINTS lists {len(points)} ids, header says v={v}")
    groups, blocks = [], []
    for n, parts in enumerate(lines[2:], start=3):
        if parts[0] == "GROUP":
            groups.append(list(map(int, parts[1:])))
        elif parts[0] == "BLOCK":
            blocks.append(list(map(int, parts[1:])))
        else:
            raise DesignError(f"line {n}: unknown record {parts[0]!r}")
    return Design.build(points, blocks, t, k, lam, groups or None)
