"""Labeled binary matrices, identity submatrices and non-overlapping covers.

A cover is a list of identity submatrices, each an ordered list of
``(row, col)`` index pairs with ``C(row_i, col_i) = 1`` and
``C(row_i, col_j) = 0`` for ``i != j``.  The cover constructors here turn a
design into a matrix together with a cover of all of its 1-entries.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ._caps import CapExceeded, enumeration_cap
from .designs import Design, DesignError, block_label, incidence_matrix, point_label, verify_design
from .subspace import (SubspaceDesign, enumerate_subspaces, gauss_binom, subspace_index,
                       subspaces_within, verify_subspace_design)

Pair = Tuple[int, int]


class BinaryMatrix:
    """K x F 0/1 matrix stored as the set of positions holding a one."""

    def __init__(self, row_labels: Sequence[str], col_labels: Sequence[str],
                 ones: Iterable[Pair]):
        self.row_labels = tuple(row_labels)
        self.col_labels = tuple(col_labels)
        if len(set(self.row_labels)) != len(self.row_labels):
            raise ValueError("row labels are not distinct")
        if len(set(self.col_labels)) != len(self.col_labels):
            raise ValueError("column labels are not distinct")
        self.ones = frozenset(ones)
        K, F = len(self.row_labels), len(self.col_labels)
        for i, j in self.ones:
            if not (0 <= i < K and 0 <= j < F):
                raise ValueError(f"position ({i}, {j}) outside a {K}x{F} matrix")
        self.row_index = {lab: i for i, lab in enumerate(self.row_labels)}
        self.col_index = {lab: j for j, lab in enumerate(self.col_labels)}
        rows: List[List[int]] = [[] for _ in range(K)]
        cols: List[List[int]] = [[] for _ in range(F)]
        for i, j in sorted(self.ones):
            rows[i].append(j)
            cols[j].append(i)
        self.row_support = tuple(tuple(r) for r in rows)
        self.col_support = tuple(tuple(c) for c in cols)

    @property
    def K(self) -> int:
        return len(self.row_labels)

    @property
    def F(self) -> int:
        return len(self.col_labels)

    @property
    def n_ones(self) -> int:
        return len(self.ones)

    def __getitem__(self, pos: Pair) -> int:
        return 1 if pos in self.ones else 0

    def row_weights(self) -> List[int]:
        return [len(r) for r in self.row_support]

    def col_weights(self) -> List[int]:
        return [len(c) for c in self.col_support]

    def row_weight(self) -> Optional[int]:
        """The constant row weight Z, or None if rows differ."""
        w = set(self.row_weights())
        return w.pop() if len(w) == 1 else None

    def col_weight(self) -> Optional[int]:
        w = set(self.col_weights())
        return w.pop() if len(w) == 1 else None

    def computation_load(self) -> Optional[int]:
        """r = number of zeros per column, when constant."""
        w = self.col_weight()
        return None if w is None else self.K - w

    def dense_rows(self) -> List[str]:
        out = []
        for r in self.row_support:
            line = ["0"] * self.F
            for j in r:
                line[j] = "1"
            out.append("".join(line))
        return out

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, BinaryMatrix) and self.row_labels == other.row_labels
                and self.col_labels == other.col_labels and self.ones == other.ones)

    def __repr__(self) -> str:
        return f"BinaryMatrix(K={self.K}, F={self.F}, ones={self.n_ones})"


@dataclass(frozen=True)
class IdentitySubmatrix:
    pairs: Tuple[Pair, ...]

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def rows(self) -> Tuple[int, ...]:
        return tuple(u for u, _ in self.pairs)

    @property
    def cols(self) -> Tuple[int, ...]:
        return tuple(f for _, f in self.pairs)


@dataclass(frozen=True)
class Cover:
    identities: Tuple[IdentitySubmatrix, ...]
    source: str = field(default="", compare=False)

    @classmethod
    def of(cls, identities: Iterable[Iterable[Pair]], source: str = "") -> "Cover":
        return cls(tuple(IdentitySubmatrix(tuple(p)) for p in identities), source)

    @property
    def S(self) -> int:
        return len(self.identities)

    @property
    def g(self) -> Optional[int]:
        """Uniform identity size, or None when sizes differ."""
        sizes = {idm.size for idm in self.identities}
        return sizes.pop() if len(sizes) == 1 else None

    def __len__(self) -> int:
        return len(self.identities)

    def __iter__(self):
        return iter(self.identities)


@dataclass
class CoverReport:
    ok: bool
    identity_violations: List[str] = field(default_factory=list)
    overlap_witness: List[Tuple[Pair, int, int]] = field(default_factory=list)
    uncovered: List[Pair] = field(default_factory=list)
    covered: int = 0

    def __bool__(self) -> bool:
        return self.ok


def verify_cover(m: BinaryMatrix, c: Cover) -> CoverReport:
    """Check identity structure, non-overlap and full coverage exhaustively."""
    rep = CoverReport(ok=True)
    owner: Dict[Pair, int] = {}
    for idx, idm in enumerate(c.identities):
        rows, cols = idm.rows, idm.cols
        if idm.size == 0:
            rep.identity_violations.append(f"identity {idx} is empty")
        if len(set(rows)) != len(rows):
            rep.identity_violations.append(f"identity {idx} repeats a row")
        if len(set(cols)) != len(cols):
            rep.identity_violations.append(f"identity {idx} repeats a column")
        for a, (u, f) in enumerate(idm.pairs):
            if not (0 <= u < m.K and 0 <= f < m.F):
                rep.identity_violations.append(f"identity {idx} pair {(u, f)} is outside the matrix")
                continue
            if (u, f) not in m.ones:
                rep.identity_violations.append(f"identity {idx}: C{(u, f)} = 0 on the diagonal")
            for b, (_, f2) in enumerate(idm.pairs):
                if a != b and (u, f2) in m.ones:
                    rep.identity_violations.append(
                        f"identity {idx}: off-diagonal C{(u, f2)} = 1")
            if (u, f) in m.ones:
                if (u, f) in owner:
                    rep.overlap_witness.append(((u, f), owner[(u, f)], idx))
                else:
                    owner[(u, f)] = idx
    rep.uncovered = sorted(m.ones - owner.keys())
    rep.covered = len(owner)
    rep.ok = not (rep.identity_violations or rep.overlap_witness or rep.uncovered)
    return rep


def load_identity_holds(m: BinaryMatrix, c: Cover) -> bool:
    """S * g == F * (K - r) for a uniform cover of a constant-column-weight matrix."""
    r, g = m.computation_load(), c.g
    if r is None or g is None:
        return False
    return c.S * g == m.F * (m.K - r)


# -- cover constructors -----------------------------------------------------

def _require_design(d: Design, t: Optional[int] = None, groups: bool = False) -> None:
    if d.lam != 1:
        raise DesignError(f"cover constructions need lambda = 1, got {d.lam}")
    if t is not None and d.t != t:
        raise DesignError(f"expected a t={t} design, got t={d.t}")
    if groups != (d.groups is not None):
        raise DesignError("transversal design expected" if groups else "design must not carry groups")
    report = verify_design(d)
    if not report.ok:
        raise DesignError("design fails verification: " + "; ".join(report.violations[:3]))


def cover_bibd(d: Design) -> Tuple[BinaryMatrix, Cover]:
    """Incidence matrix of a (v,k,1)-BIBD with one identity per point.

    For point x the identity pairs each block A through x with the successor
    of x inside A (cyclically, in point order).
    """
    _require_design(d, t=2)
    m = incidence_matrix(d)
    pidx = {x: i for i, x in enumerate(d.points)}
    bidx = {blk: j for j, blk in enumerate(d.blocks)}
    ids = []
    for x in d.points:
        pairs = []
        for blk in d.blocks_containing(x):
            succ = blk[(blk.index(x) + 1) % len(blk)]
            pairs.append((pidx[succ], bidx[blk]))
        ids.append(pairs)
    return m, Cover.of(ids, "bibd")


def _subset_label(s: Sequence[int]) -> str:
    return ".".join(map(str, s)) if s else "-"


def cover_tdesign(d: Design) -> Tuple[BinaryMatrix, Cover]:
    """Rows: (t-1)-subsets D; columns: (y, B) with y in B; one iff D + y in B, y not in D."""
    if d.t < 2:
        raise DesignError(f"t-design cover needs t >= 2, got t={d.t}")
    _require_design(d)
    t = d.t
    rows = list(combinations(d.points, t - 1))
    ridx = {D: i for i, D in enumerate(rows)}
    cols = [(y, blk) for blk in d.blocks for y in blk]
    cidx = {c: j for j, c in enumerate(cols)}
    ones = []
    for j, (y, blk) in enumerate(cols):
        rest = tuple(x for x in blk if x != y)
        ones.extend((ridx[D], j) for D in combinations(rest, t - 1))
    m = BinaryMatrix([_subset_label(D) for D in rows],
                     [f"{point_label(y)}@{block_label(blk)}" for y, blk in cols], ones)
    n_sub = comb(d.k - 1, t - 1)
    ids = []
    for y in d.points:
        through = d.blocks_containing(y)
        subsets = [list(combinations([x for x in blk if x != y], t - 1)) for blk in through]
        for jj in range(n_sub):
            ids.append([(ridx[subsets[i][jj]], cidx[(y, blk)]) for i, blk in enumerate(through)])
    return m, Cover.of(ids, "tdesign")


def cover_transversal(d: Design) -> Tuple[BinaryMatrix, Cover]:
    """Transposed incidence matrix of a TD(k, n) with one identity per point.

    For point x in group j the identity pairs each block A through x with the
    point of A lying in group j+1 (mod k).
    """
    _require_design(d, t=2, groups=True)
    m = incidence_matrix(d, transpose=True)
    pidx = {x: i for i, x in enumerate(d.points)}
    bidx = {blk: j for j, blk in enumerate(d.blocks)}
    group_of = {x: gi for gi, g in enumerate(d.groups) for x in g}
    k = len(d.groups)
    ids = []
    for x in d.points:
        nxt = (group_of[x] + 1) % k
        pairs = []
        for blk in d.blocks_containing(x):
            y = next(z for z in blk if group_of[z] == nxt)
            pairs.append((bidx[blk], pidx[y]))
        ids.append(pairs)
    return m, Cover.of(ids, "transversal")


def cover_subspace(sd: SubspaceDesign) -> Tuple[BinaryMatrix, Cover]:
    """q-analog of the t-design cover.

    Rows: (t-1)-dim subspaces D; columns: (y, B) with y a 1-dim subspace of
    block B; one iff dim(D + y) = t and D + y lies in B.
    """
    t = sd.t
    if t < 2:
        raise DesignError(f"subspace cover needs t >= 2, got t={t}")
    if sd.lam != 1:
        raise DesignError(f"cover constructions need lambda = 1, got {sd.lam}")
    report = verify_subspace_design(sd)
    if not report.ok:
        raise DesignError("subspace design fails verification: " + "; ".join(report.violations[:3]))
    rows = enumerate_subspaces(sd.field, sd.v, t - 1)
    ridx = subspace_index(rows)
    points = enumerate_subspaces(sd.field, sd.v, 1)
    pidx = subspace_index(points)
    cols = []
    ones = []
    # per block: its (t-1)-subspaces and its points, both in canonical order
    inside: List[Tuple[List, List]] = []
    for blk in sd.blocks:
        subs = subspaces_within(blk, t - 1)
        pts = sorted(subspaces_within(blk, 1), key=pidx.__getitem__)
        inside.append((subs, pts))
        for y in pts:
            j = len(cols)
            cols.append((y, blk))
            ones.extend((ridx[D], j) for D in subs if not D.contains(y))
    col_of: Dict[Tuple[int, int], int] = {}
    j = 0
    for bi, (_, pts) in enumerate(inside):
        for y in pts:
            col_of[(pidx[y], bi)] = j
            j += 1
    m = BinaryMatrix([D.label() for D in rows],
                     [f"{y.label()}@{blk.label()}" for y, blk in cols], ones)
    blocks_through: Dict[int, List[int]] = defaultdict(list)
    for bi, (_, pts) in enumerate(inside):
        for y in pts:
            blocks_through[pidx[y]].append(bi)
    q = sd.q
    n_sub = gauss_binom(sd.k - 1, t - 1, q) * q ** (t - 1)
    ids = []
    for yi, y in enumerate(points):
        through = blocks_through[yi]
        avoid = [[D for D in inside[bi][0] if not D.contains(y)] for bi in through]
        for jj in range(n_sub):
            ids.append([(ridx[avoid[i][jj]], col_of[(yi, bi)]) for i, bi in enumerate(through)])
    return m, Cover.of(ids, "subspace")


def man_matrix(K: int, r: int) -> Tuple[BinaryMatrix, Cover]:
    """Rows [K], columns r-subsets A, one iff k not in A; identities from (r+1)-subsets."""
    if not 1 <= r < K:
        raise ValueError(f"need 1 <= r < K, got K={K}, r={r}")
    cap = enumeration_cap()
    if comb(K, r) > cap or comb(K, r + 1) > cap:
        raise CapExceeded(f"C({K},{r}) columns exceed cap {cap}")
    cols = list(combinations(range(K), r))
    cidx = {A: j for j, A in enumerate(cols)}
    ones = [(k, j) for j, A in enumerate(cols) for k in range(K) if k not in A]
    m = BinaryMatrix([str(k) for k in range(K)], [_subset_label(A) for A in cols], ones)
    ids = [[(k, cidx[tuple(x for x in B if x != k)]) for k in B]
           for B in combinations(range(K), r + 1)]
    return m, Cover.of(ids, "man")


# -- text formats -----------------------------------------------------------

def matrix_to_text(m: BinaryMatrix) -> str:
    lines = [f"MATRIX {m.K} {m.F}", "ROWS " + " ".join(m.row_labels),
             "COLS " + " ".join(m.col_labels)]
    lines.extend(m.dense_rows())
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> BinaryMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if head[0] != "MATRIX" or len(head) != 3:
        raise ValueError("expected header 'MATRIX K F'")
    K, F = int(head[1]), int(head[2])
    rows = lines[1].split()
    cols = lines[2].split()
    if rows[0] != "ROWS" or cols[0] != "COLS":
        raise ValueError("expected ROWS and COLS lines")
    rows, cols = rows[1:], cols[1:]
    body = lines[3:]
    if len(rows) != K or len(cols) != F or len(body) != K:
        raise ValueError("matrix dimensions disagree with header")
    ones = []
    for i, line in enumerate(body):
        if len(line) != F or set(line) - {"0", "1"}:
            raise ValueError(f"row {i} is not a {F}-character 0/1 string")
        ones.extend((i, j) for j, ch in enumerate(line) if ch == "1")
    return BinaryMatrix(rows, cols, ones)


def cover_to_text(m: BinaryMatrix, c: Cover) -> str:
    g = c.g if c.g is not None else 0
    lines = [f"COVER {c.S} {g}"]
    for idm in c.identities:
        lines.append("ID " + " ".join(f"({m.row_labels[u]},{m.col_labels[f]})"
                                      for u, f in idm.pairs))
    return "\n".join(lines) + "\n"


def cover_from_text(text: str, m: BinaryMatrix) -> Cover:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if lines[0][0] != "COVER" or len(lines[0]) != 3:
        raise ValueError("expected header 'COVER S g'")
    S = int(lines[0][1])
    ids = []
    for n, parts in enumerate(lines[1:], start=2):
        if parts[0] != "ID":
            raise ValueError(f"line {n}: expected ID")
        pairs = []
        for tok in parts[1:]:
            if not (tok.startswith("(") and tok.endswith(")")) or tok.count(",") != 1:
                raise ValueError(f"line {n}: malformed pair {tok!r}")
            row, col = tok[1:-1].split(",")
            try:
                pairs.append((m.row_index[row], m.col_index[col]))
            except KeyError as exc:
                raise ValueError(f"line {n}: unknown label {exc.args[0]!r}") from None
        ids.append(pairs)
    if len(ids) != S:
        raise ValueError(f"header says S={S}, found {len(ids)} identities")
    return Cover.of(ids)
