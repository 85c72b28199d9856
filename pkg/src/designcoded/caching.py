"""Coded caching over a caching matrix and its identity-submatrix cover.

Placement stores subfile ``f`` of every file at user ``u`` iff ``C(u, f) = 0``.
Delivery sends one XOR per identity submatrix; each user peels the
subfiles it caches off the transmissions to rebuild its demanded file.
The closed-form parameter rows for the design families and the two
baseline schemes live here as exact rationals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from . import _accel
from .binmat import BinaryMatrix, Cover, verify_cover
from .subspace import gauss_binom


class CachingError(ValueError):
    pass


class FileLibrary:
    """N equal-length files, each cut into F equal subfiles."""

    def __init__(self, files: Sequence[bytes], F: int):
        if not files:
            raise CachingError("library needs at least one file")
        sizes = {len(w) for w in files}
        if len(sizes) != 1:
            raise CachingError(f"files differ in length: {sorted(sizes)}")
        size = sizes.pop()
        if F < 1 or size % F:
            raise CachingError(f"file length {size} is not a multiple of F={F}")
        self.files = [bytes(w) for w in files]
        self.F = F
        self.subfile_size = size // F

    @classmethod
    def random(cls, N: int, F: int, subfile_size: int = 16, seed: int = 0) -> "FileLibrary":
        rng = random.Random(seed)
        return cls([rng.randbytes(F * subfile_size) for _ in range(N)], F)

    @property
    def N(self) -> int:
        return len(self.files)

    def subfile(self, i: int, f: int) -> bytes:
        s = self.subfile_size
        return self.files[i][f * s:(f + 1) * s]


@dataclass
class CachingReport:
    K: int
    F: int
    Z: int
    S: int
    subfile_size: int
    decoded: List[bool] = field(default_factory=list)

    @property
    def uncached(self) -> Fraction:
        return Fraction(self.Z, self.F)

    @property
    def R(self) -> Fraction:
        return Fraction(self.S, self.F)

    @property
    def bits(self) -> int:
        return self.S * self.subfile_size * 8

    @property
    def ok(self) -> bool:
        return all(self.decoded)

    def csv_header(self) -> str:
        return "K,F,Z,S,R,uncached"

    def csv_row(self) -> str:
        return f"{self.K},{self.F},{self.Z},{self.S},{self.R},{self.uncached}"


def place(m: BinaryMatrix, lib: FileLibrary) -> List[Dict[Tuple[int, int], bytes]]:
    """Cache contents per user: ``{(file, subfile): bytes}`` for every zero of its row."""
    if m.row_weight() is None:
        raise CachingError("caching matrix must have constant row weight")
    if m.F != lib.F:
        raise CachingError(f"library split into {lib.F} subfiles, matrix has F={m.F}")
    caches = []
    for u in range(m.K):
        missing = set(m.row_support[u])
        caches.append({(i, f): lib.subfile(i, f)
                       for f in range(m.F) if f not in missing for i in range(lib.N)})
    return caches


def _xor_all(chunks: Sequence[bytes], size: int) -> bytes:
    return reduce(_accel.xor_bytes, chunks, bytes(size))


def deliver(m: BinaryMatrix, c: Cover, lib: FileLibrary, demands: Sequence[int],
            caches: Optional[List[Dict[Tuple[int, int], bytes]]] = None,
            check_cover: bool = True) -> Tuple[List[bytes], CachingReport]:
    """Serve ``demands`` with one XOR per identity and check every user decodes."""
    if len(demands) != m.K:
        raise CachingError(f"need {m.K} demands, got {len(demands)}")
    for d in demands:
        if not 0 <= d < lib.N:
            raise CachingError(f"demand {d} outside [0, {lib.N})")
    if check_cover:
        rep = verify_cover(m, c)
        if not rep.ok:
            raise CachingError("cover fails verification")
    if caches is None:
        caches = place(m, lib)
    size = lib.subfile_size
    tx = [_xor_all([lib.subfile(demands[u], f) for u, f in idm.pairs], size)
          for idm in c.identities]

    # users see only their cache and the broadcast
    recovered: List[Dict[int, bytes]] = [dict() for _ in range(m.K)]
    for idx, idm in enumerate(c.identities):
        for u, f in idm.pairs:
            others = []
            for u2, f2 in idm.pairs:
                if u2 == u:
                    continue
                piece = caches[u].get((demands[u2], f2))
                if piece is None:
                    break
                others.append(piece)
            else:
                recovered[u][f] = _xor_all([tx[idx]] + others, size)

    decoded = []
    for u in range(m.K):
        parts = []
        for f in range(m.F):
            piece = caches[u].get((demands[u], f), recovered[u].get(f))
            if piece is None:
                break
            parts.append(piece)
        decoded.append(len(parts) == m.F and b"".join(parts) == lib.files[demands[u]])
    report = CachingReport(m.K, m.F, m.row_weight() or 0, c.S, size, decoded)
    return tx, report


def transmission_log(tx: Sequence[bytes]) -> str:
    return "".join(f"TX {i} {payload.hex()}\n" for i, payload in enumerate(tx))


# -- closed forms -----------------------------------------------------------

FAMILIES = ("bibd", "tdesign", "transversal", "subspace")


@dataclass(frozen=True)
class SchemeParams:
    """Closed-form parameters of a design-based scheme.

    ``col_weight`` is the number of ones per column, so the computation load
    of the same matrix used for distributed computing is ``K - col_weight``.
    """

    family: str
    K: int
    F: int
    Z: int
    col_weight: int
    S: int
    R_table: Optional[Fraction] = None  # BIBD only: the k(k-1)/v form

    @property
    def uncached(self) -> Fraction:
        return Fraction(self.Z, self.F)

    @property
    def R(self) -> Fraction:
        return Fraction(self.S, self.F)

    @property
    def r(self) -> int:
        return self.K - self.col_weight

    @property
    def g(self) -> Fraction:
        return Fraction(self.F * self.col_weight, self.S)


def _exact(num: int, den: int, what: str) -> int:
    if num % den:
        raise CachingError(f"{what} = {num}/{den} is not an integer; no such design")
    return num // den


def scheme_params(family: str, *, v: Optional[int] = None, k: Optional[int] = None,
                  t: Optional[int] = None, n: Optional[int] = None,
                  q: Optional[int] = None) -> SchemeParams:
    """Parameters of the scheme built from a lambda = 1 design of the given family.

    bibd: ``v, k``; tdesign: ``t, v, k``; transversal: ``k, n``;
    subspace: ``q, t, v, k``.
    """
    if family == "bibd":
        _need(family, v=v, k=k)
        rep = _exact(v - 1, k - 1, "replication")
        b = _exact(v * (v - 1), k * (k - 1), "block count")
        return SchemeParams(family, K=v, F=b, Z=rep, col_weight=k, S=v,
                            R_table=Fraction(k * (k - 1), v))
    if family == "tdesign":
        _need(family, t=t, v=v, k=k)
        K = comb(v, t - 1)
        F = _exact(comb(v, t) * k, comb(k, t), "F")
        per = comb(k - 1, t - 1)
        return SchemeParams(family, K=K, F=F, Z=v - t + 1, col_weight=per, S=per * v)
    if family == "transversal":
        _need(family, k=k, n=n)
        return SchemeParams(family, K=n * n, F=k * n, Z=k, col_weight=n, S=k * n)
    if family == "subspace":
        _need(family, q=q, t=t, v=v, k=k)
        K = gauss_binom(v, t - 1, q)
        F = _exact(gauss_binom(v, t, q) * gauss_binom(k, 1, q), gauss_binom(k, t, q), "F")
        per = gauss_binom(k - 1, t - 1, q) * q ** (t - 1)
        Z = gauss_binom(v - t + 1, 1, q) * q ** (t - 1)
        return SchemeParams(family, K=K, F=F, Z=Z, col_weight=per,
                            S=per * gauss_binom(v, 1, q))
    raise CachingError(f"unsupported family {family!r}; expected one of {FAMILIES}")


def _need(family: str, **vals) -> None:
    missing = [name for name, val in vals.items() if val is None]
    if missing:
        raise CachingError(f"family {family!r} needs {', '.join(missing)}")


@dataclass(frozen=True)
class Baseline:
    K: int
    uncached: Fraction
    R: Fraction
    F: int
    integral: bool = True


def man_baseline(K: int, uncached: Fraction) -> Baseline:
    """Rate and subpacketization of the centralized scheme at the same cache point.

    When ``K * M/N`` is not an integer, F uses the nearest integer and the
    result is marked non-integral.
    """
    uncached = Fraction(uncached)
    if not 0 <= uncached <= 1:
        raise CachingError(f"uncached fraction {uncached} outside [0, 1]")
    t = K * (1 - uncached)
    R = K * uncached / (1 + t)
    t_int = round(t)
    return Baseline(K, uncached, R, comb(K, t_int), integral=t.denominator == 1)


def sec_baseline(m: int, a: int, b: int, lam: int) -> Baseline:
    """Strong-edge-colouring scheme parameters for ``(m, a, b, lambda)``."""
    if not (0 <= a <= m and 0 <= b <= m and 0 <= lam <= min(a, b)):
        raise CachingError(f"invalid SEC parameters m={m} a={a} b={b} lambda={lam}")
    K = comb(m, a)
    F = comb(m, b)
    num = comb(a, lam) * comb(m - a, b - lam)
    uncached = Fraction(num, F)
    den = max(comb(a + b - 2 * lam, a - lam), comb(m - a - b + 2 * lam, lam))
    R = Fraction(K * num, F * den)
    return Baseline(K, uncached, R, F)
