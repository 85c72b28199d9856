"""Subspaces of GF(q)^v in canonical reduced row-echelon form.

Canonical order of subspaces of a fixed dimension is the lexicographic order
of their flattened RREF bases.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, List, Sequence, Tuple

from . import _accel
from ._caps import CapExceeded, enumeration_cap
from .gf import FieldError, FieldTable, field_of_order

INT64_MAX = (1 << 63) - 1

Basis = Tuple[Tuple[int, ...], ...]


def gauss_binom(v: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^v."""
    if not 0 <= k <= v:
        raise ValueError(f"need 0 <= k <= v, got k={k}, v={v}")
    num = den = 1
    for i in range(k):
        num *= q ** (v - i) - 1
        den *= q ** (k - i) - 1
    value = num // den
    if value > INT64_MAX:
        raise OverflowError(f"Gaussian binomial [{v} {k}]_{q} exceeds 64-bit range")
    return value


def _rref(f: FieldTable, rows) -> Basis:
    if not f.dense:
        raise FieldError(f"subspace arithmetic needs a dense field table, GF({f.q}) is too large")
    ncols = len(rows[0]) if rows else 0
    return _accel.rref(rows, ncols, f.q, f.add_flat, f.mul_flat, f.inv_flat, f.neg_flat)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of GF(q)^v stored by its RREF basis (unique per subspace)."""

    field: FieldTable = dc_field(compare=False, repr=False)
    v: int
    basis: Basis

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Subspace) and self.v == other.v
                and self.field.q == other.field.q and self.basis == other.basis)

    def __hash__(self) -> int:
        return hash((self.field.q, self.v, self.basis))

    def flat(self) -> Tuple[int, ...]:
        return tuple(x for row in self.basis for x in row)

    def sort_key(self) -> Tuple[int, ...]:
        return self.flat()

    def label(self) -> str:
        # one base-36 digit per entry when possible, rows separated by '/'
        if self.q <= 36:
            return "/".join("".join(_DIGITS[x] for x in row) for row in self.basis) or "0"
        return "/".join("_".join(map(str, row)) for row in self.basis) or "0"

    def vectors(self) -> List[Tuple[int, ...]]:
        """All q^dim vectors of the span (desk scale only)."""
        f = self.field
        out = []
        for coeffs in product(range(f.q), repeat=self.dim):
            vec = [0] * self.v
            for c, row in zip(coeffs, self.basis):
                if c:
                    for j, x in enumerate(row):
                        if x:
                            vec[j] = f.add_table[vec[j]][f.mul_table[c][x]]
            out.append(tuple(vec))
        return out

    def contains(self, other: "Subspace") -> bool:
        if other.dim > self.dim:
            return False
        return len(_rref(self.field, list(self.basis) + list(other.basis))) == self.dim


_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def canonical(f: FieldTable, rows: Sequence[Sequence[int]], v: int) -> Subspace:
    """Subspace spanned by ``rows`` (any spanning set) in canonical form."""
    rows = [tuple(r) for r in rows]
    for r in rows:
        if len(r) != v:
            raise ValueError(f"vector {r} does not have length {v}")
        for x in r:
            if not 0 <= x < f.q:
                raise FieldError(f"{x} is not an element of GF({f.q})")
    return Subspace(f, v, _rref(f, rows) if rows else ())


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.field != b.field or a.v != b.v:
        raise ValueError("subspaces live in different spaces")
    return Subspace(a.field, a.v, _rref(a.field, list(a.basis) + list(b.basis)))


def _rref_bases(f: FieldTable, v: int, k: int) -> List[Basis]:
    out = []
    for pivots in combinations(range(v), k):
        pivset = set(pivots)
        free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, v) if j not in pivset]
        for values in product(range(f.q), repeat=len(free)):
            rows = [[0] * v for _ in range(k)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), x in zip(free, values):
                rows[i][j] = x
            out.append(tuple(tuple(r) for r in rows))
    out.sort(key=lambda b: tuple(x for r in b for x in r))
    return out


@lru_cache(maxsize=64)
def _enumerate_cached(f: FieldTable, v: int, k: int) -> Tuple[Subspace, ...]:
    return tuple(Subspace(f, v, b) for b in _rref_bases(f, v, k))


def enumerate_subspaces(f: FieldTable, v: int, k: int) -> Tuple[Subspace, ...]:
    """All k-dim subspaces of GF(q)^v in canonical order."""
    if not 0 <= k <= v:
        raise ValueError(f"need 0 <= k <= v, got k={k}, v={v}")
    count = gauss_binom(v, k, f.q)
    cap = enumeration_cap()
    if count > cap:
        raise CapExceeded(f"{count} subspaces of dim {k} in GF({f.q})^{v} exceed cap {cap}")
    return _enumerate_cached(f, v, k)


def subspace_index(subspaces: Sequence[Subspace]) -> Dict[Subspace, int]:
    return {s: i for i, s in enumerate(subspaces)}


def matmul(f: FieldTable, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> List[List[int]]:
    """Product of an (n x k) and a (k x v) matrix over GF(q)."""
    add, mul = f.add_table, f.mul_table
    v = len(b[0])
    out = []
    for row in a:
        acc = [0] * v
        for c, brow in zip(row, b):
            if c:
                mc = mul[c]
                for j, x in enumerate(brow):
                    if x:
                        acc[j] = add[acc[j]][mc[x]]
        out.append(acc)
    return out


def subspaces_within(block: Subspace, d: int) -> List[Subspace]:
    """All d-dim subspaces of ``block``, in canonical (global) order."""
    f = block.field
    local = enumerate_subspaces(f, block.dim, d)
    subs = [Subspace(f, block.v, _rref(f, matmul(f, s.basis, block.basis)) if d else ())
            for s in local]
    subs.sort(key=Subspace.sort_key)
    return subs


@dataclass(frozen=True)
class SubspaceDesign:
    """t-(v,k,lambda)_q design: k-dim blocks, every t-dim subspace in lambda blocks."""

    field: FieldTable
    v: int
    t: int
    k: int
    lam: int
    blocks: Tuple[Subspace, ...]

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def b(self) -> int:
        return len(self.blocks)


def trivial_subspace_design(f: FieldTable, v: int, k: int) -> SubspaceDesign:
    """The k-(v,k,1)_q design made of every k-dim subspace."""
    if not 2 <= k <= v:
        raise ValueError(f"need 2 <= k <= v, got k={k}, v={v}")
    return SubspaceDesign(f, v, k, k, 1, enumerate_subspaces(f, v, k))


@dataclass
class SubspaceReport:
    ok: bool
    violations: List[str]
    counts: Dict[int, int]  # multiplicity -> number of t-dim subspaces with it


def verify_subspace_design(sd: SubspaceDesign, max_witnesses: int = 10) -> SubspaceReport:
    f = sd.field
    violations: List[str] = []
    if not 0 <= sd.t <= sd.k <= sd.v:
        violations.append(f"parameters violate 0 <= t <= k <= v: t={sd.t} k={sd.k} v={sd.v}")
        return SubspaceReport(False, violations, {})
    for i, blk in enumerate(sd.blocks):
        if blk.v != sd.v or blk.dim != sd.k:
            violations.append(f"block {i} has dimension {blk.dim} in GF({f.q})^{blk.v}")
    if violations:
        return SubspaceReport(False, violations[:max_witnesses], {})
    tally: Counter = Counter()
    for blk in sd.blocks:
        tally.update(subspaces_within(blk, sd.t))
    every = enumerate_subspaces(f, sd.v, sd.t)
    hist: Counter = Counter()
    for s in every:
        n = tally.get(s, 0)
        hist[n] += 1
        if n != sd.lam and len(violations) < max_witnesses:
            violations.append(f"{sd.t}-subspace {s.label()} lies in {n} blocks, expected {sd.lam}")
    return SubspaceReport(not violations, violations, dict(hist))


# -- text format ------------------------------------------------------------

def subspace_design_to_text(sd: SubspaceDesign) -> str:
    lines = [f"QDESIGN {sd.q} {sd.v} {sd.t} {sd.k} {sd.lam}"]
    for blk in sd.blocks:
        lines.append("BLOCK " + " ".join(map(str, blk.flat())))
    return "\n".join(lines) + "\n"


def subspace_design_from_text(text: str) -> SubspaceDesign:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "QDESIGN" or len(lines[0]) != 6:
        raise ValueError("expected header 'QDESIGN q v t k lambda'")
    q, v, t, k, lam = map(int, lines[0][1:])
    f = field_of_order(q)
    blocks = []
    for n, parts in enumerate(lines[1:], start=2):
        if parts[0] != "BLOCK":
            raise ValueError(f"line {n}: expected BLOCK")
        entries = list(map(int, parts[1:]))
        if len(entries) != k * v:
            raise ValueError(f"line {n}: expected {k * v} entries, got {len(entries)}")
        rows = [entries[i * v:(i + 1) * v] for i in range(k)]
        blk = canonical(f, rows, v)
        if blk.dim != k:
            raise ValueError(f"line {n}: rows span a {blk.dim}-dim space, expected {k}")
        blocks.append(blk)
    blocks.sort(key=Subspace.sort_key)
    return SubspaceDesign(f, v, t, k, lam, tuple(blocks))
