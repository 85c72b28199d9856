"""Coded MapReduce driven by a computing matrix and its identity cover.

Node ``k`` stores subfile ``f`` iff ``C(k, f) = 0``.  Each identity
submatrix of size ``g`` is served by two transmissions of ``beta*T`` bits:
a coded XOR from one row node and an uncoded block from another.

Function ``q`` (0-based) is reduced by the active node with position
``q mod kappa`` in row order, so without stragglers node ``k`` reduces
``{k, k+K, k+2K, ...}``.  The map functions are FNV-1a digests of the
subfile bytes and the reduce combiner is XOR, which keeps every check
bit-exact and independent of arrival order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from . import _accel
from .binmat import BinaryMatrix, Cover, verify_cover
from .caching import scheme_params

# worst-case straggler search switches to sampling above this many subsets
EXHAUSTIVE_LIMIT = 100_000
SAMPLE_COUNT = 1000


class ComputingError(ValueError):
    pass


@dataclass
class ComputingConfig:
    """A computing matrix with its cover plus the function/IVA sizes.

    Parameters
    ----------
    matrix, cover
        Computing matrix (constant column weight) and a verified cover.
    beta
        Functions reduced per node, so ``Q = beta * K``.
    T
        IVA size in bits, a positive multiple of 8.
    Q
        Override for the number of functions (full-straggler runs need
        ``Q`` divisible by the number of survivors).
    """

    matrix: BinaryMatrix
    cover: Cover
    beta: int = 1
    T: int = 64
    Q: Optional[int] = None

    def __post_init__(self):
        if self.beta < 1:
            raise ComputingError(f"beta must be a positive integer, got {self.beta}")
        if self.T < 8 or self.T % 8:
            raise ComputingError(f"T must be a positive multiple of 8, got {self.T}")
        if self.Q is None:
            self.Q = self.beta * self.matrix.K
        if self.matrix.col_weight() is None:
            raise ComputingError("computing matrix must have constant column weight")
        g = self.cover.g
        if g is None or g < 2:
            raise ComputingError(f"cover needs a uniform identity size g >= 2, got {g}")
        rep = verify_cover(self.matrix, self.cover)
        if not rep.ok:
            raise ComputingError("cover fails verification")

    @property
    def K(self) -> int:
        return self.matrix.K

    @property
    def F(self) -> int:
        return self.matrix.F

    @property
    def r(self) -> int:
        return self.matrix.computation_load()

    @property
    def g(self) -> int:
        return self.cover.g

    def stored(self, k: int) -> List[int]:
        """M_k: subfiles stored at node k."""
        missing = set(self.matrix.row_support[k])
        return [f for f in range(self.F) if f not in missing]

    def identities_of(self, k: int) -> List[int]:
        """I_k: indices of identities with k among their rows."""
        return [i for i, idm in enumerate(self.cover.identities) if k in idm.rows]


def make_files(F: int, subfile_size: int = 16, seed: int = 0) -> List[bytes]:
    rng = random.Random(seed)
    return [rng.randbytes(subfile_size) for _ in range(F)]


class IvaStore:
    """IVA digests v_{q,f}: FNV-1a 64 over (q, f label, subfile), stretched to T bits."""

    def __init__(self, cfg: ComputingConfig, files: Sequence[bytes]):
        if len(files) != cfg.F:
            raise ComputingError(f"need {cfg.F} subfiles, got {len(files)}")
        self.cfg = cfg
        self.files = list(files)
        self.nbytes = cfg.T // 8
        self._memo: Dict[Tuple[int, int], bytes] = {}

    def value(self, q: int, f: int) -> bytes:
        key = (q, f)
        out = self._memo.get(key)
        if out is None:
            label = self.cfg.matrix.col_labels[f].encode()
            seed = _accel.fnv1a64(q.to_bytes(8, "little") + label + b"\x00" + self.files[f])
            words = [_accel.fnv1a64(c.to_bytes(8, "little"), seed).to_bytes(8, "little")
                     for c in range(-(-self.nbytes // 8))]
            out = b"".join(words)[:self.nbytes]
            self._memo[key] = out
        return out


def oracle(store: IvaStore) -> List[bytes]:
    """Centralized reduce: u_q = XOR of v_{q,f} over all subfiles."""
    cfg = store.cfg
    out = []
    for q in range(cfg.Q):
        acc = bytes(store.nbytes)
        for f in range(cfg.F):
            acc = _accel.xor_bytes(acc, store.value(q, f))
        out.append(acc)
    return out


@dataclass
class Transmission:
    identity: int
    node: int
    kind: str  # "coded" or "uncoded"
    payload: List[bytes]

    @property
    def bits(self) -> int:
        return sum(len(p) for p in self.payload) * 8


@dataclass
class LoadReport:
    K: int
    F: int
    r: int
    g: int
    Q: int
    beta: Fraction
    T: int
    mode: str
    kappa: int
    bits: int
    per_node_bits: Dict[int, int] = field(default_factory=dict)
    correct: bool = True
    map_counts: Dict[int, int] = field(default_factory=dict)

    @property
    def load(self) -> Fraction:
        return Fraction(self.bits, self.Q * self.F * self.T)

    @staticmethod
    def csv_header() -> str:
        return "K,F,r,g,Q,beta,T,mode,kappa,bits,load"

    def csv_row(self) -> str:
        return (f"{self.K},{self.F},{self.r},{self.g},{self.Q},{self.beta},{self.T},"
                f"{self.mode},{self.kappa},{self.bits},{self.load}")


@dataclass
class RunResult:
    outputs: Dict[int, bytes]  # function id -> reduced value at its reducer
    reducer: Dict[int, int]  # function id -> node
    log: List[Transmission]
    report: LoadReport

    def shuffle_log(self, labels: Sequence[str]) -> str:
        return "".join(f"ROUND {t.identity} {labels[t.node]} {t.kind} {t.bits}\n" for t in self.log)


def coded_round(cfg: ComputingConfig, identity: int, transmitter: int, partner: int,
                fn_of: Dict[int, List[int]], have, alive: Optional[Set[int]] = None,
                ) -> Tuple[Transmission, Transmission]:
    """The coded and uncoded transmissions serving one identity.

    ``fn_of[k]`` lists the functions node k reduces (one payload slot each)
    and ``have(k, q, f)`` returns the IVA held by node k or raises KeyError.
    Rows outside ``alive`` are skipped.
    """
    idm = cfg.cover.identities[identity]
    rows = idm.rows
    if transmitter not in rows or partner not in rows:
        raise ComputingError(f"transmitter {transmitter} or partner {partner} not in identity {identity}")
    if transmitter == partner:
        raise ComputingError("coded and uncoded transmitters must differ")
    pairs = [(u, f) for u, f in idm.pairs if alive is None or u in alive]
    f_p = dict(idm.pairs)[transmitter]
    width = len(fn_of[transmitter])
    nbytes = cfg.T // 8
    coded = []
    for b in range(width):
        acc = bytes(nbytes)
        for u, f in pairs:
            if u != transmitter:
                acc = _accel.xor_bytes(acc, have(transmitter, fn_of[u][b], f))
        coded.append(acc)
    uncoded = [have(partner, fn_of[transmitter][b], f_p) for b in range(width)]
    return (Transmission(identity, transmitter, "coded", coded),
            Transmission(identity, partner, "uncoded", uncoded))


def _default_pairs(cfg: ComputingConfig, alive: Set[int]) -> List[Tuple[int, int]]:
    out = []
    for i, idm in enumerate(cfg.cover.identities):
        live = sorted(u for u in idm.rows if u in alive)
        if len(live) < 2:
            raise ComputingError(f"identity {i} has fewer than two active rows")
        out.append((live[0], live[1]))
    return out


def _simulate(cfg: ComputingConfig, files: Sequence[bytes], alive: Set[int],
              reducers: Sequence[int], computed: Dict[int, Set[Tuple[int, int]]],
              senders: Set[int], assignment: Optional[List[Tuple[int, int]]],
              mode: str) -> RunResult:
    """Shared shuffle + reduce once each node's computed IVA set is fixed."""
    store = IvaStore(cfg, files)
    kappa = len(reducers)
    if cfg.Q % kappa:
        raise ComputingError(f"Q={cfg.Q} is not divisible by the {kappa} reducing nodes")
    reducer = {q: reducers[q % kappa] for q in range(cfg.Q)}
    fn_of: Dict[int, List[int]] = {k: [] for k in range(cfg.K)}
    for q in range(cfg.Q):
        fn_of[reducer[q]].append(q)
    width = cfg.Q // kappa
    for k in range(cfg.K):
        if not fn_of[k]:
            fn_of[k] = [None] * width  # type: ignore[list-item]

    def have(k, q, f):
        if (q, f) not in computed[k]:
            raise ComputingError(f"node {k} never mapped v({q},{f})")
        return store.value(q, f)

    if assignment is None:
        assignment = _default_pairs(cfg, senders)
    log: List[Transmission] = []
    received: Dict[int, Dict[Tuple[int, int], bytes]] = {k: {} for k in range(cfg.K)}
    for i, (p, j) in enumerate(assignment):
        if p not in senders or j not in senders:
            raise ComputingError(f"identity {i} assigned to an inactive node")
        coded, unc = coded_round(cfg, i, p, j, fn_of, have, alive)
        log.extend((coded, unc))
        # decoding at every live row of the identity
        for u, f in cfg.cover.identities[i].pairs:
            if u not in alive or fn_of[u][0] is None:
                continue
            if u == p:
                for b, q in enumerate(fn_of[u]):
                    received[u][(q, f)] = unc.payload[b]
                continue
            for b, q in enumerate(fn_of[u]):
                acc = coded.payload[b]
                for u2, f2 in cfg.cover.identities[i].pairs:
                    if u2 not in (u, p) and u2 in alive:
                        acc = _accel.xor_bytes(acc, have(u, fn_of[u2][b], f2))
                received[u][(q, f)] = acc

    truth = oracle(store)
    outputs: Dict[int, bytes] = {}
    correct = True
    for q, k in reducer.items():
        acc = bytes(store.nbytes)
        for f in range(cfg.F):
            if (q, f) in computed[k]:
                val = store.value(q, f)
            elif (q, f) in received[k]:
                val = received[k][(q, f)]
                if val != store.value(q, f):
                    correct = False
            else:
                correct = False
                continue
            acc = _accel.xor_bytes(acc, val)
        outputs[q] = acc
        if acc != truth[q]:
            correct = False

    per_node: Dict[int, int] = {k: 0 for k in range(cfg.K)}
    for t in log:
        per_node[t.node] += t.bits
    report = LoadReport(cfg.K, cfg.F, cfg.r, cfg.g, cfg.Q, Fraction(cfg.Q, kappa), cfg.T,
                        mode, kappa, sum(per_node.values()), per_node, correct,
                        {k: len(computed[k]) for k in range(cfg.K)})
    return RunResult(outputs, reducer, log, report)


def run_mapreduce(cfg: ComputingConfig, files: Sequence[bytes],
                  assignment: Optional[List[Tuple[int, int]]] = None) -> RunResult:
    """All nodes active: every node maps all Q functions on its stored subfiles."""
    everyone = set(range(cfg.K))
    computed = {k: {(q, f) for q in range(cfg.Q) for f in cfg.stored(k)} for k in everyone}
    return _simulate(cfg, files, everyone, list(range(cfg.K)), computed, everyone,
                     assignment, "none")


def _check_stragglers(cfg: ComputingConfig, stragglers: Iterable[int]) -> FrozenSet[int]:
    s = frozenset(stragglers)
    bad = [k for k in s if not 0 <= k < cfg.K]
    if bad:
        raise ComputingError(f"unknown nodes {sorted(bad)}")
    if len(s) > cfg.g - 2:
        raise ComputingError(f"{len(s)} stragglers exceed the g-2 = {cfg.g - 2} the scheme tolerates")
    return s


def run_full_straggler(cfg: ComputingConfig, files: Sequence[bytes],
                       failed: Iterable[int]) -> RunResult:
    """Failed nodes take no part; survivors share the Q functions evenly."""
    failed = _check_stragglers(cfg, failed)
    alive = set(range(cfg.K)) - failed
    kappa = len(alive)
    if cfg.Q % kappa:
        raise ComputingError(f"Q={cfg.Q} is not divisible by kappa={kappa}")
    computed = {k: ({(q, f) for q in range(cfg.Q) for f in cfg.stored(k)} if k in alive else set())
                for k in range(cfg.K)}
    return _simulate(cfg, files, alive, sorted(alive), computed, alive, None, "full")


@dataclass
class WorstCase:
    exhaustive: bool
    subsets: int
    max_load: Fraction
    failures: List[Tuple[int, ...]]

    @property
    def ok(self) -> bool:
        return not self.failures


def worst_case(cfg: ComputingConfig, files: Sequence[bytes], size: int, mode: str = "full",
               seed: int = 0) -> WorstCase:
    """Run every straggler set of ``size`` nodes (or a seeded sample when too many).

    ``mode`` is ``"full"`` or ``"partial"``.
    """
    runner = {"full": run_full_straggler, "partial": run_partial_straggler}.get(mode)
    if runner is None:
        raise ComputingError(f"unknown straggler mode {mode!r}")
    _check_stragglers(cfg, range(size))
    total = comb(cfg.K, size)
    if total <= EXHAUSTIVE_LIMIT:
        subsets: Iterable[Tuple[int, ...]] = combinations(range(cfg.K), size)
        exhaustive = True
    else:
        rng = random.Random(seed)
        subsets = [tuple(sorted(rng.sample(range(cfg.K), size))) for _ in range(SAMPLE_COUNT)]
        exhaustive = False
    worst = Fraction(0)
    failures = []
    n = 0
    for s in subsets:
        n += 1
        res = runner(cfg, files, s)
        worst = max(worst, res.report.load)
        if not res.report.correct:
            failures.append(s)
    return WorstCase(exhaustive, n, worst, failures)


def run_partial_straggler(cfg: ComputingConfig, files: Sequence[bytes],
                          stragglers: Iterable[int]) -> RunResult:
    """Three map sub-phases; stragglers stop after sub-phase 2 and never transmit."""
    slow = _check_stragglers(cfg, stragglers)
    nodes = list(range(cfg.K))
    if cfg.Q % cfg.K:
        raise ComputingError(f"Q={cfg.Q} is not a multiple of K={cfg.K}")
    own = {k: [q for q in range(cfg.Q) if q % cfg.K == k] for k in nodes}
    computed: Dict[int, Set[Tuple[int, int]]] = {}
    for k in nodes:
        stored = cfg.stored(k)
        done = {(q, f) for q in own[k] for f in stored}  # sub-phase 1
        for i in cfg.identities_of(k):  # sub-phase 2
            for u, f in cfg.cover.identities[i].pairs:
                if u != k:
                    done.update((q, f) for q in own[u])
        if k not in slow:  # sub-phase 3, active set only
            done.update((q, f) for q in range(cfg.Q) for f in stored)
        computed[k] = done
    active = set(nodes) - slow
    return _simulate(cfg, files, set(nodes), nodes, computed, active, None, "partial")


def straggler_map_count(cfg: ComputingConfig, k: int) -> int:
    """beta*|M_k| + (g-1)*beta*|I_k|: IVAs a partial straggler computes."""
    beta = cfg.Q // cfg.K
    return beta * len(cfg.stored(k)) + (cfg.g - 1) * beta * len(cfg.identities_of(k))


# -- load balancing ---------------------------------------------------------

def _perfect_matching(left: int, adj: List[List[int]], right: int) -> List[int]:
    """Augmenting-path matching; returns the right vertex matched to each left vertex."""
    match_l = [-1] * left
    match_r = [-1] * right
    for s in range(left):
        # breadth-first search for an augmenting path starting at s
        came_from: Dict[int, int] = {}
        queue = [s]
        end = -1
        for u in queue:
            for w in adj[u]:
                if w in came_from:
                    continue
                came_from[w] = u
                if match_r[w] < 0:
                    end = w
                    break
                queue.append(match_r[w])
            if end >= 0:
                break
        if end < 0:
            raise ComputingError("no perfect matching exists (graph is not regular?)")
        w = end
        while w >= 0:
            u = came_from[w]
            nxt = match_l[u]
            match_l[u], match_r[w] = w, u
            w = nxt
    return match_l


def balance_load(cfg: ComputingConfig) -> List[Tuple[int, int]]:
    """Transmitter pairs giving every node gamma coded and gamma uncoded rounds."""
    K, S, g = cfg.K, cfg.cover.S, cfg.g
    if S % K:
        raise ComputingError(f"S={S} is not divisible by K={K}; load balancing needs integral gamma")
    gamma = S // K
    member = [cfg.identities_of(k) for k in range(K)]
    bad = [k for k in range(K) if len(member[k]) != g * gamma]
    if bad:
        raise ComputingError(f"nodes {bad} are not in exactly g*gamma = {g * gamma} identities")
    left = K * gamma  # copy c of node k is vertex k*gamma + c
    adj = [list(member[v // gamma]) for v in range(left)]
    first = _perfect_matching(left, adj, S)
    coded = [-1] * S
    for v, i in enumerate(first):
        coded[i] = v // gamma
    adj2 = [[i for i in adj[v] if coded[i] != v // gamma] for v in range(left)]
    if any(len(a) != gamma * (g - 1) for a in adj2):  # pragma: no cover
        raise ComputingError("residual graph is not regular")
    second = _perfect_matching(left, adj2, S)
    uncoded = [-1] * S
    for v, i in enumerate(second):
        uncoded[i] = v // gamma
    return list(zip(coded, uncoded))


# -- closed forms -----------------------------------------------------------

def qys_load(K: int, r: int, kappa: int) -> Fraction:
    """Optimal load of the baseline straggler-robust scheme for K nodes, load r, kappa survivors."""
    if not (1 <= r <= K and 1 <= kappa <= K and K - kappa <= r - 1):
        raise ComputingError(f"need K - kappa <= r - 1, got K={K}, r={r}, kappa={kappa}")
    total = Fraction(0)
    for i in range(max(r + kappa - K, 1), min(r, kappa - 1) + 1):
        total += Fraction(comb(r, i) * comb(K - r - 1, kappa - i - 1), i * comb(K - 1, kappa - 1))
    return (1 - Fraction(r, K)) * total


@dataclass(frozen=True)
class ComputingParams:
    K: int
    F: int
    r: int
    g: Fraction
    S: int

    @property
    def load(self) -> Fraction:
        return Fraction(2 * self.S, self.K * self.F)

    def straggler_load(self, kappa: int) -> Fraction:
        return Fraction(2 * self.S, kappa * self.F)


def computing_params(family: str, **design) -> ComputingParams:
    """Closed-form distributed-computing row for a design family (same keywords as scheme_params)."""
    sp = scheme_params(family, **design)
    return ComputingParams(sp.K, sp.F, sp.r, sp.g, sp.S)


def man_params(K: int, r: int) -> ComputingParams:
    """Binomial computing matrix: F = C(K, r), g = r + 1, S = C(K, r+1)."""
    return ComputingParams(K, comb(K, r), r, Fraction(r + 1), comb(K, r + 1))
