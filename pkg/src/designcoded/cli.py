"""Command line front end: ``construct``, ``verify``, ``simulate`` and ``table``.

Exit codes: 0 success, 1 a verifier or decode check failed, 2 bad flags or
parameters.  Failures print one machine-readable ``ERROR <kind> <message>``
line on stderr.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from math import lcm
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from ._caps import CapExceeded
from .binmat import (BinaryMatrix, Cover, cover_from_text, cover_to_text, matrix_from_text,
                     matrix_to_text, verify_cover)
from .caching import CachingError, FileLibrary, deliver, place, transmission_log
from .designs import Design, DesignError, design_from_text, design_to_text, verify_design
from .gf import FieldError
from .mapreduce import (ComputingConfig, ComputingError, LoadReport, balance_load, make_files,
                        run_full_straggler, run_mapreduce, run_partial_straggler, worst_case)
from .schemes import FAMILY_CHOICES, build_scheme, cover_design
from .subspace import (SubspaceDesign, subspace_design_from_text, subspace_design_to_text,
                       verify_subspace_design)
from .tables import TABLE_IDS, build_table

log = logging.getLogger("designcoded")

DESIGN_FILE = "design.txt"
MATRIX_FILE = "matrix.txt"
COVER_FILE = "cover.txt"

EXIT_OK, EXIT_VERIFY, EXIT_FLAGS = 0, 1, 2

# parameter problems that map to exit code 2
BAD_INPUT = (DesignError, CachingError, ComputingError, FieldError, CapExceeded, OverflowError)


class VerifyFailure(Exception):
    pass


def _error(kind: str, message: str) -> None:
    print(f"ERROR {kind} {' '.join(str(message).split())}", file=sys.stderr)


# -- design I/O -------------------------------------------------------------

def _design_text(design) -> str:
    if isinstance(design, SubspaceDesign):
        return subspace_design_to_text(design)
    return design_to_text(design)


def _read_design(text: str):
    head = text.lstrip().split(None, 1)[0] if text.strip() else ""
    if head == "QDESIGN":
        return subspace_design_from_text(text)
    if head == "DESIGN":
        return design_from_text(text)
    raise DesignError("design file must start with DESIGN or QDESIGN")


def _check_design(design) -> None:
    if isinstance(design, SubspaceDesign):
        rep = verify_subspace_design(design)
    else:
        rep = verify_design(design)
    if not rep.ok:
        raise VerifyFailure("design " + "; ".join(rep.violations[:3]))


def _check_scheme(m: BinaryMatrix, c: Cover, mode: str) -> None:
    rep = verify_cover(m, c)
    if not rep.ok:
        detail = (rep.identity_violations[:2] + [f"overlap {w}" for w in rep.overlap_witness[:2]]
                  + [f"uncovered {u}" for u in rep.uncovered[:2]])
        raise VerifyFailure("cover " + "; ".join(map(str, detail)))
    if mode == "caching" and m.row_weight() is None:
        raise VerifyFailure("matrix row weight is not constant")
    if mode == "computing":
        if m.col_weight() is None:
            raise VerifyFailure("matrix column weight is not constant")
        if c.g is None or c.g < 2:
            raise VerifyFailure(f"computing needs a uniform identity size g >= 2, got {c.g}")


def _summary(m: BinaryMatrix, c: Cover) -> str:
    g = c.g if c.g is not None else "mixed"
    return (f"K={m.K} F={m.F} S={c.S} g={g} Z={m.row_weight()} "
            f"r={m.computation_load()}")


# -- construct --------------------------------------------------------------

def cmd_construct(args) -> int:
    if args.design:
        design = _read_design(Path(args.design).read_text(encoding="utf-8"))
        _check_design(design)
        m, c = cover_design(design)
    else:
        if not args.family:
            raise DesignError("need --family or --design")
        scheme = build_scheme(args.family, n=args.n, q=args.q, v=args.v, k=args.k, t=args.t,
                              K=args.K, r=args.r)
        design, m, c = scheme.design, scheme.matrix, scheme.cover
        if design is not None:
            _check_design(design)
    _check_scheme(m, c, args.mode)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if design is not None:
        (out / DESIGN_FILE).write_text(_design_text(design), encoding="utf-8")
    (out / MATRIX_FILE).write_text(matrix_to_text(m), encoding="utf-8")
    (out / COVER_FILE).write_text(cover_to_text(m, c), encoding="utf-8")
    print(_summary(m, c))
    return EXIT_OK


# -- verify -----------------------------------------------------------------

def _load_scheme(directory: Path):
    m_text = (directory / MATRIX_FILE).read_text(encoding="utf-8")
    c_text = (directory / COVER_FILE).read_text(encoding="utf-8")
    m = matrix_from_text(m_text)
    c = cover_from_text(c_text, m)
    design = None
    if (directory / DESIGN_FILE).exists():
        design = _read_design((directory / DESIGN_FILE).read_text(encoding="utf-8"))
    return design, m, c, m_text, c_text


def cmd_verify(args) -> int:
    directory = Path(args.scheme)
    try:
        design, m, c, m_text, c_text = _load_scheme(directory)
    except (ValueError, OSError) as exc:
        raise VerifyFailure(f"unreadable scheme: {exc}") from None
    if design is not None:
        _check_design(design)
        d_text = (directory / DESIGN_FILE).read_text(encoding="utf-8")
        if _design_text(design) != d_text:
            raise VerifyFailure("design file does not re-serialize identically")
        m2, c2 = cover_design(design)
        if m2 != m or c2 != c:
            raise VerifyFailure("matrix or cover differs from the one the design determines")
    _check_scheme(m, c, args.mode)
    if matrix_to_text(m) != m_text or cover_to_text(m, c) != c_text:
        raise VerifyFailure("matrix or cover file does not re-serialize identically")
    print(_summary(m, c) + " ok")
    return EXIT_OK


# -- simulate ---------------------------------------------------------------

def _parse_stragglers(text: str):
    if text == "none":
        return "none", 0
    mode, _, count = text.partition(":")
    if mode not in ("full", "partial") or not count.isdigit():
        raise argparse.ArgumentTypeError(f"expected none, full:k or partial:k, got {text!r}")
    return mode, int(count)


def _library(args, F: int, rng: random.Random) -> FileLibrary:
    if args.input:
        blobs = [Path(p).read_bytes() for p in args.input]
        size = max(len(b) for b in blobs)
        size = max(F, -(-size // F) * F)
        pads = [size - len(b) for b in blobs]
        if args.out:
            Path(args.out).mkdir(parents=True, exist_ok=True)
            Path(args.out, "padding.txt").write_text(
                "".join(f"PAD {p} {n}\n" for p, n in zip(args.input, pads)), encoding="utf-8")
        return FileLibrary([b + bytes(n) for b, n in zip(blobs, pads)], F)
    N = args.files
    return FileLibrary([rng.randbytes(F * args.subfile_bytes) for _ in range(N)], F)


def _simulate_caching(args, m, c) -> int:
    rng = random.Random(args.seed)
    if args.files is None and not args.input:
        args.files = m.K
    lib = _library(args, m.F, rng)
    caches = place(m, lib)
    ok = True
    tx: List[bytes] = []
    report = None
    for _ in range(args.trials):
        demands = [rng.randrange(lib.N) for _ in range(m.K)]
        tx, report = deliver(m, c, lib, demands, caches=caches)
        ok = ok and report.ok
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.csv").write_text(report.csv_header() + "\n" + report.csv_row() + "\n",
                                    encoding="utf-8")
    (out / "tx.log").write_text(transmission_log(tx), encoding="utf-8")
    print(report.csv_header())
    print(report.csv_row())
    print(f"R={report.R} decode={'ok' if ok else 'FAIL'} trials={args.trials}")
    if not ok:
        _error("decode", "at least one user failed to rebuild its demanded file")
        return EXIT_VERIFY
    return EXIT_OK


def _simulate_mapreduce(args, m, c) -> int:
    mode, count = args.stragglers
    if args.balance and mode != "none":
        raise ComputingError("--balance applies only without stragglers")
    if args.worst_case and mode == "none":
        raise ComputingError("--worst-case needs --stragglers full:k or partial:k")
    Q = args.beta * m.K
    if mode == "full":
        Q = lcm(Q, m.K - count)
    cfg = ComputingConfig(m, c, beta=args.beta, T=args.iva_bits, Q=Q)
    files = make_files(cfg.F, args.subfile_bytes, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.worst_case:
        wc = worst_case(cfg, files, count, mode, seed=args.seed)
        kind = "exhaustive" if wc.exhaustive else f"sampled({wc.subsets})"
        line = (f"mode={mode} stragglers={count} search={kind} subsets={wc.subsets} "
                f"max_load={wc.max_load} failures={len(wc.failures)}")
        (out / "worst_case.txt").write_text(line + "\n", encoding="utf-8")
        print(line)
        if not wc.ok:
            _error("reduce", f"incorrect outputs for straggler sets {wc.failures[:3]}")
            return EXIT_VERIFY
        return EXIT_OK
    rng = random.Random(args.seed)
    slow = sorted(rng.sample(range(m.K), count)) if count else []
    if mode == "full":
        res = run_full_straggler(cfg, files, slow)
    elif mode == "partial":
        res = run_partial_straggler(cfg, files, slow)
    else:
        res = run_mapreduce(cfg, files, balance_load(cfg) if args.balance else None)
    rep = res.report
    (out / "report.csv").write_text(LoadReport.csv_header() + "\n" + rep.csv_row() + "\n",
                                    encoding="utf-8")
    (out / "shuffle.log").write_text(res.shuffle_log(m.row_labels), encoding="utf-8")
    print(LoadReport.csv_header())
    print(rep.csv_row())
    extra = f" stragglers={','.join(m.row_labels[k] for k in slow)}" if slow else ""
    if mode == "partial":
        # IVAs each straggler mapped against the Q*|M_k| an active node maps
        extra += " straggler_maps=" + ",".join(
            f"{rep.map_counts[k]}/{cfg.Q * len(cfg.stored(k))}" for k in slow)
    if args.balance:
        per = sorted(set(rep.per_node_bits.values()))
        extra += f" per_node_bits={'/'.join(map(str, per))}"
    print(f"L={rep.load} reduce={'ok' if rep.correct else 'FAIL'}{extra}")
    if not rep.correct:
        _error("reduce", "a reducer output differs from the centralized oracle")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_simulate(args) -> int:
    directory = Path(args.scheme)
    _, m, c, _, _ = _load_scheme(directory)
    if args.out is None:
        args.out = str(directory)
    if args.mode == "caching":
        if args.stragglers[0] != "none" or args.balance or args.worst_case:
            raise CachingError("straggler and balancing flags apply to --mode mapreduce")
        return _simulate_caching(args, m, c)
    return _simulate_mapreduce(args, m, c)


# -- table ------------------------------------------------------------------

def cmd_table(args) -> int:
    ids = TABLE_IDS if args.table == "all" else (args.table,)
    for tid in ids:
        tab = build_table(tid, simulate=not args.no_sim)
        text = tab.to_csv()
        if args.out:
            out = Path(args.out)
            if args.table == "all" or out.suffix != ".csv":
                out.mkdir(parents=True, exist_ok=True)
                out = out / f"{tid}.csv"
            out.write_text(text, encoding="utf-8")
        else:
            if len(ids) > 1:
                print(f"# {tid}")
            sys.stdout.write(text)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="designcoded", description=__doc__.splitlines()[0],
                                allow_abbrev=False)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a design, its matrix and its cover", allow_abbrev=False)
    c.add_argument("--family", choices=FAMILY_CHOICES)
    c.add_argument("--design", help="read a DESIGN/QDESIGN file instead of constructing one")
    for name in ("n", "q", "v", "k", "t", "K", "r"):
        c.add_argument(f"--{name}", type=int)
    c.add_argument("--mode", choices=("caching", "computing"), default="caching")
    c.add_argument("--out", required=True, help="output directory")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="re-verify a constructed scheme directory", allow_abbrev=False)
    v.add_argument("--scheme", required=True)
    v.add_argument("--mode", choices=("caching", "computing"), default="caching")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="run coded caching or coded MapReduce on a scheme", allow_abbrev=False)
    s.add_argument("--scheme", required=True)
    s.add_argument("--mode", choices=("caching", "mapreduce"), default="caching")
    s.add_argument("--files", type=int, help="number of library files (default K)")
    s.add_argument("--input", nargs="+", help="library files to serve (zero padded to a multiple of F)")
    s.add_argument("--subfile-bytes", type=int, default=16)
    s.add_argument("--trials", type=int, default=1, help="random demand vectors to serve")
    s.add_argument("--beta", type=int, default=1)
    s.add_argument("--iva-bits", type=int, default=64)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--stragglers", type=_parse_stragglers, default=("none", 0))
    s.add_argument("--balance", action="store_true")
    s.add_argument("--worst-case", action="store_true")
    s.add_argument("--out", help="output directory (default: the scheme directory)")
    s.set_defaults(func=cmd_simulate)

    t = sub.add_parser("table", help="emit comparison tables as CSV", allow_abbrev=False)
    t.add_argument("table", choices=TABLE_IDS + ("all",))
    t.add_argument("--out", help="CSV file, or directory when emitting all tables")
    t.add_argument("--no-sim", action="store_true", help="skip simulation cross-checks")
    t.set_defaults(func=cmd_table)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except VerifyFailure as exc:
        _error("verify", str(exc))
        return EXIT_VERIFY
    except BAD_INPUT as exc:
        _error("params", str(exc))
        return EXIT_FLAGS
    except (OSError, ValueError) as exc:
        _error("input", str(exc))
        return EXIT_FLAGS


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
