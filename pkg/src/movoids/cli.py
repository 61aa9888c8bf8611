"""Command-line front end: ``movoids construct|verify|bounds|rerun``.

With ``-o PREFIX`` every command writes its files as PREFIX.<kind> plus
PREFIX.manifest.json recording the command, seeds, input and output digests.
``movoids rerun PREFIX.manifest.json`` replays the command and compares digests.
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import io
import json
import os
import shlex
import sys
import tempfile
import time
from collections import Counter
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import bound_report, bounds_grid, report_rows_csv
from .geometry import (
    SymplecticSpace,
    build_cap,
    hyperplane_profile,
    polar_params,
    read_points,
    verify_cap,
    write_points,
)
from .gf2linalg import IntMatrix, rank_exact, walsh_spectrum
from .graphs import (
    bch_cayley,
    cayley_f2n,
    complementary_rank_f2,
    is_triangle_free,
    read_graph,
    strong_power,
    write_graph,
)
from .ovoids import (
    OvoidCertificate,
    VectorFamily,
    amplify_strong_power,
    bch_rank_bound,
    construct_2ovoid_bch,
    family_to_sets,
    nearly_orthogonal_verify,
    oddtown_verify,
    random_partial_m_ovoid,
    verify_partial_m_ovoid,
)

THREADS_ENV = "MOVOIDS_THREADS"


class CommandError(Exception):
    """Invalid parameters or malformed input; reported with exit status 2."""


# ---------------------------------------------------------------------------
# Output plumbing
# ---------------------------------------------------------------------------


class Run:
    """Collects outputs of one command and writes them with a manifest."""

    def __init__(self, args, argv):
        self.args = args
        self.argv = list(argv)
        self.prefix = getattr(args, "output", None)
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}
        self.seeds: list = []
        self.start = time.perf_counter()

    def read_input(self, path: str) -> str:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise CommandError(f"cannot read {path}: {exc.strerror}") from None
        self.inputs[path] = hashlib.sha256(data).hexdigest()
        return data.decode()

    def emit(self, kind: str, text: str):
        """Record an output; written as PREFIX.<kind> when a prefix was given."""
        self.outputs[kind] = text

    def finish(self, report_text: str) -> None:
        sys.stdout.write(report_text)
        if not self.prefix:
            return
        written = {}
        for kind, text in sorted(self.outputs.items()):
            path = Path(f"{self.prefix}.{kind}")
            path.parent.mkdir(parents=True, exist_ok=True)
            data = text.encode()
            path.write_bytes(data)
            written[kind] = {"path": str(path), "sha256": hashlib.sha256(data).hexdigest()}
        manifest = {
            "command": self.argv,
            "command_line": shlex.join(["movoids", *self.argv]),
            "version": __version__,
            "seeds": self.seeds,
            "threads": self.args.threads,
            "inputs": self.inputs,
            "outputs": written,
            "wall_time": round(time.perf_counter() - self.start, 6),
        }
        Path(f"{self.prefix}.manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _spectrum_text(spec: Counter) -> str:
    return ", ".join(f"{lam}^{mult}" for lam, mult in sorted(spec.items(), reverse=True))


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------


def _construct_cap(args, run: Run) -> int:
    n = args.n
    if n < 3:
        raise CommandError("cap construction needs --n >= 3")
    S = build_cap(n)
    info = {"n": n, "cap_size": len(S), "is_cap": verify_cap(S)}
    spec = walsh_spectrum(n, S)
    info["spectrum"] = {str(k): v for k, v in sorted(spec.items(), reverse=True)}
    info["hyperplane_profile"] = {str(k): v for k, v in sorted(hyperplane_profile(S, n).items())}
    if args.emit_points:
        run.emit("points", write_points(S, q=2, dim=n))
    if args.emit_graph or n <= 8:
        G = cayley_f2n(n, S)
        info.update(vertices=G.n, edges=G.num_edges, degree=len(S),
                    triangle_free=is_triangle_free(G),
                    rank_f2_A_plus_I=complementary_rank_f2(G))
        if G.n <= 512:
            A = G.adjacency_matrix() - np.eye(G.n, dtype=np.int64)
            info["rank_real_A_minus_I"] = rank_exact(IntMatrix.from_array(A))
        if args.emit_graph:
            run.emit("graph", write_graph(G))
    if args.json:
        text = _dump(info)
    else:
        lines = [f"cap in PG({n - 1},2): {len(S)} points, cap={info['is_cap']}"]
        if "vertices" in info:
            lines.append(f"Cayley graph: {info['vertices']} vertices, {info['edges']} edges, "
                         f"{len(S)}-regular, triangle-free={info['triangle_free']}")
        lines.append(f"spectrum: {_spectrum_text(spec)}")
        if "rank_f2_A_plus_I" in info:
            lines.append(f"rank_F2(A+I) = {info['rank_f2_A_plus_I']}")
        if "rank_real_A_minus_I" in info:
            lines.append(f"rank_Q(A-I) = {info['rank_real_A_minus_I']}")
        prof = ", ".join(f"{k}:{v}" for k, v in info["hyperplane_profile"].items())
        lines.append(f"hyperplane profile (|H^S|:count): {prof}")
        text = "\n".join(lines) + "\n"
    run.emit("report.json" if args.json else "report.txt", text)
    run.finish(text)
    return 0


def _construct_bch(args, run: Run) -> int:
    h = args.h
    if not 1 <= h <= 7:
        raise CommandError("BCH construction needs 1 <= --h <= 7")
    F = construct_2ovoid_bch(h)
    info = {
        "h": h,
        "vectors": len(F),
        "dimension": F.t,
        "rank_bound": bch_rank_bound(h),
        "nearly_orthogonal_m2": nearly_orthogonal_verify(F, 2) if h <= 5 else None,
        "exponent": round(np.log(len(F)) / np.log(F.t), 6) if F.t > 1 else None,
    }
    if args.emit_vectors:
        run.emit("vectors", F.to_text())
    if args.emit_graph:
        run.emit("graph", write_graph(bch_cayley(h)))
    if args.json:
        text = _dump(info)
    else:
        text = (f"BCH family h={h}: {info['vectors']} vectors in dimension {info['dimension']} "
                f"(bound {info['rank_bound']}), exponent log|F|/log t = {info['exponent']}\n"
                f"2-nearly orthogonal: {info['nearly_orthogonal_m2']}\n")
    run.emit("report.json" if args.json else "report.txt", text)
    run.finish(text)
    return 0


def _load_graph(run: Run, path: str):
    text = run.read_input(path)
    try:
        return read_graph(text)
    except ValueError as exc:
        raise CommandError(f"{path}: {exc}") from None


def _construct_strong_power(args, run: Run) -> int:
    G = _load_graph(run, args.graph)
    if args.power < 1:
        raise CommandError("--power must be >= 1")
    if G.n ** args.power > 100_000:
        raise CommandError(f"strong power would have {G.n ** args.power} vertices (limit 100000)")
    P = strong_power(G, args.power)
    info = {"base_vertices": G.n, "power": args.power, "vertices": P.n, "edges": P.num_edges,
            "rank_f2_A_plus_I": complementary_rank_f2(P)}
    run.emit("graph", write_graph(P))
    text = _dump(info) if args.json else (
        f"strong power: {P.n} vertices, {P.num_edges} edges, rank_F2(A+I) = {info['rank_f2_A_plus_I']}\n")
    run.emit("report.json" if args.json else "report.txt", text)
    run.finish(text)
    return 0


def _construct_amplify(args, run: Run) -> int:
    G = _load_graph(run, args.graph)
    run.seeds.append(args.seed)
    try:
        res = amplify_strong_power(G, args.m, args.power, seed=args.seed)
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    info = res.summary()
    run.emit("graph", write_graph(res.graph))
    text = _dump(info) if args.json else (
        f"amplified graph: {res.vertices} of {res.power_vertices} vertices kept, "
        f"clique number {res.clique_number} (<= {res.m}), rank_F2(A+I) = {res.rank_f2} "
        f"(<= {res.rank_bound}); target {res.target:.4f}, base {res.base:.4f}\n")
    run.emit("report.json" if args.json else "report.txt", text)
    run.finish(text)
    return 0


def _construct_sample(args, run: Run) -> int:
    try:
        params = polar_params(args.family, args.r, args.q)
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    if params.family != "symplectic" or args.q not in (2, 3, 4) or args.r > 6:
        raise CommandError("sampling supports symplectic spaces with q in {2,3,4} and r <= 6")
    run.seeds.append(args.seed)
    cert = random_partial_m_ovoid(SymplecticSpace(args.r, args.q), args.m, rho=args.rho,
                                  trials=args.trials, seed=args.seed)
    text_json = cert.to_json()
    run.emit("cert.json", text_json)
    text = text_json if args.json else (
        f"{params.label()} m={args.m}: best verified sample of size {cert.size} "
        f"(trial {cert.seed[1]}), {cert.counters['unpruned_successes_at_target']}/{args.trials} "
        f"unpruned samples reached size {cert.counters['target_size']}\n")
    run.finish(text)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _load_vectors(run: Run, path: str) -> VectorFamily:
    text = run.read_input(path)
    try:
        return VectorFamily.from_text(text)
    except ValueError as exc:
        raise CommandError(f"{path}: {exc}") from None


def _verdict(run: Run, args, payload: dict, ok: bool, summary: str) -> int:
    payload["verified"] = ok
    text = _dump(payload) if args.json else f"{summary}: {'VERIFIED' if ok else 'NOT VERIFIED'}\n"
    run.emit("verdict.json", _dump(payload))
    run.finish(text)
    return 0 if ok else 1


def _verify_movoid(args, run: Run) -> int:
    if args.certificate:
        try:
            cert = OvoidCertificate.from_json(run.read_input(args.certificate))
        except (ValueError, KeyError) as exc:
            raise CommandError(f"{args.certificate}: malformed certificate ({exc})") from None
        space = SymplecticSpace(cert.space.rank, cert.space.q)
        pts, m = cert.points, cert.m
    else:
        if args.points is None or args.r is None or args.m is None:
            raise CommandError("give --certificate, or --points with --r, --q and --m")
        space = SymplecticSpace(args.r, args.q)
        try:
            pts, dim = read_points(run.read_input(args.points), q=args.q)
        except ValueError as exc:
            raise CommandError(f"{args.points}: {exc}") from None
        if pts and dim != space.dim:
            raise CommandError(f"{args.points}: vectors have length {dim}, expected {space.dim}")
        m = args.m
    try:
        cert = verify_partial_m_ovoid(space, pts, m, args.method)
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    text_json = cert.to_json()
    run.emit("cert.json", text_json)
    text = text_json if args.json else (
        f"{cert.space.label()} m={m}, {cert.size} points, method {cert.method}: "
        f"{'VERIFIED' if cert.verified else 'NOT VERIFIED'}\n")
    run.finish(text)
    return 0 if cert.verified else 1


def _verify_nearly_orthogonal(args, run: Run) -> int:
    F = _load_vectors(run, args.vectors)
    ok = nearly_orthogonal_verify(F, args.m)
    return _verdict(run, args, {"kind": "nearly-orthogonal", "m": args.m, "t": F.t,
                                "size": len(F)}, ok,
                    f"{len(F)} vectors in F_2^{F.t}, {args.m}-nearly orthogonal")


def _verify_oddtown(args, run: Run) -> int:
    F = _load_vectors(run, args.sets)
    ok = oddtown_verify(family_to_sets(F), args.m)
    return _verdict(run, args, {"kind": "oddtown", "m": args.m, "t": F.t, "size": len(F)}, ok,
                    f"{len(F)} subsets of {{1..{F.t}}}, generalized Oddtown with m={args.m}")


def _verify_cap(args, run: Run) -> int:
    try:
        pts, dim = read_points(run.read_input(args.points), q=2)
        ok = verify_cap(pts)
    except ValueError as exc:
        raise CommandError(f"{args.points}: {exc}") from None
    return _verdict(run, args, {"kind": "cap", "n": dim, "size": len(pts)}, ok,
                    f"{len(pts)} points of PG({dim - 1},2), cap")


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def _int_list(spec: list[str]) -> list[int]:
    out = []
    for token in spec:
        for part in token.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    return out


def _bounds(args, run: Run) -> int:
    try:
        ranks, qs = _int_list(args.r), _int_list(args.q)
    except ValueError:
        raise CommandError("--r and --q take integers, lists a,b,c or ranges a..b") from None
    try:
        if args.grid:
            reports = bounds_grid(args.family, ranks, qs, args.m)
        else:
            if len(ranks) != 1 or len(qs) != 1:
                raise CommandError("several values of --r/--q need --grid")
            reports = [bound_report(polar_params(args.family, ranks[0], qs[0]), args.m)]
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    if not reports:
        raise CommandError("no valid (family, r, q) combination in the grid")
    csv_text = report_rows_csv(reports)
    run.emit("csv", csv_text)
    json_text = _dump([rep.to_dict() for rep in reports])
    run.emit("report.json", json_text)
    if args.json:
        text = json_text
    elif args.csv:
        text = csv_text
    else:
        text = "".join(rep.to_table() for rep in reports)
    run.finish(text)
    return 0


# ---------------------------------------------------------------------------
# rerun
# ---------------------------------------------------------------------------


def _rerun(args, run: Run) -> int:
    try:
        manifest = json.loads(Path(args.manifest).read_text())
        argv = list(manifest["command"])
    except (OSError, ValueError, KeyError) as exc:
        raise CommandError(f"{args.manifest}: unreadable manifest ({exc})") from None
    for path, digest in manifest.get("inputs", {}).items():
        try:
            now = hashlib.sha256(Path(path).read_bytes()).hexdigest()
        except OSError:
            raise CommandError(f"input {path} is missing") from None
        if now != digest:
            raise CommandError(f"input {path} changed since the recorded run")
    out_dir = Path(args.out_dir or tempfile.mkdtemp(prefix="movoids-rerun-"))
    out_dir.mkdir(parents=True, exist_ok=True)
    new_prefix = str(out_dir / "rerun")
    if "-o" in argv:
        argv[argv.index("-o") + 1] = new_prefix
    elif "--output" in argv:
        argv[argv.index("--output") + 1] = new_prefix
    else:
        raise CommandError("the recorded command wrote no files")
    with contextlib.redirect_stdout(io.StringIO()):
        main(argv)
    mismatches = []
    for kind, rec in sorted(manifest["outputs"].items()):
        path = Path(f"{new_prefix}.{kind}")
        digest = hashlib.sha256(path.read_bytes()).hexdigest() if path.exists() else None
        if digest != rec["sha256"]:
            mismatches.append(kind)
    result = {"manifest": args.manifest, "out_dir": str(out_dir),
              "outputs": sorted(manifest["outputs"]), "mismatches": mismatches,
              "identical": not mismatches}
    sys.stdout.write(_dump(result) if args.json else (
        f"rerun of `{manifest.get('command_line', '')}`: "
        + ("all outputs byte-identical\n" if not mismatches else f"MISMATCH in {', '.join(mismatches)}\n")))
    return 0 if not mismatches else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _threads_default() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        raise CommandError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("-o", "--output", metavar="PREFIX",
                        help="write PREFIX.<kind> files and PREFIX.manifest.json")
    common.add_argument("--threads", type=int, default=None,
                        help=f"worker threads (default ${THREADS_ENV} or 1; results never depend on it)")

    p = argparse.ArgumentParser(prog="movoids", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"movoids {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    con = sub.add_parser("construct", help="build caps, BCH families, products, samples")
    csub = con.add_subparsers(dest="what", required=True)
    c = csub.add_parser("cap", parents=[common])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--emit-graph", action="store_true")
    c.add_argument("--emit-points", action="store_true")
    c.set_defaults(func=_construct_cap)
    c = csub.add_parser("bch", parents=[common])
    c.add_argument("--h", type=int, required=True)
    c.add_argument("--emit-vectors", action="store_true")
    c.add_argument("--emit-graph", action="store_true")
    c.set_defaults(func=_construct_bch)
    c = csub.add_parser("strong-power", parents=[common])
    c.add_argument("--graph", required=True)
    c.add_argument("--power", type=int, required=True)
    c.set_defaults(func=_construct_strong_power)
    c = csub.add_parser("amplify", parents=[common])
    c.add_argument("--graph", required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--power", type=int, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=_construct_amplify)
    c = csub.add_parser("sample-ovoid", parents=[common])
    c.add_argument("--family", default="W")
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--q", type=int, default=2)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--rho", type=float, default=None)
    c.add_argument("--trials", type=int, default=1)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=_construct_sample)

    ver = sub.add_parser("verify", help="check files; exit 0 iff verified")
    vsub = ver.add_subparsers(dest="what", required=True)
    v = vsub.add_parser("movoid", parents=[common])
    v.add_argument("--points")
    v.add_argument("--certificate")
    v.add_argument("--r", type=int)
    v.add_argument("--q", type=int, default=2)
    v.add_argument("--m", type=int)
    v.add_argument("--method", choices=["clique-bound", "generator-exhaustive"], default=None)
    v.set_defaults(func=_verify_movoid)
    v = vsub.add_parser("nearly-orthogonal", parents=[common])
    v.add_argument("--vectors", required=True)
    v.add_argument("--m", type=int, required=True)
    v.set_defaults(func=_verify_nearly_orthogonal)
    v = vsub.add_parser("oddtown", parents=[common])
    v.add_argument("--sets", required=True, help="characteristic vectors, one 0/1 string per line")
    v.add_argument("--m", type=int, required=True)
    v.set_defaults(func=_verify_oddtown)
    v = vsub.add_parser("cap", parents=[common])
    v.add_argument("--points", required=True)
    v.set_defaults(func=_verify_cap)

    b = sub.add_parser("bounds", parents=[common], help="bound tables and nonexistence verdicts")
    b.add_argument("--family", required=True)
    b.add_argument("--r", nargs="+", required=True)
    b.add_argument("--q", nargs="+", required=True)
    b.add_argument("--m", type=int, default=2)
    b.add_argument("--grid", action="store_true")
    b.add_argument("--csv", action="store_true", help="print CSV instead of a table")
    b.set_defaults(func=_bounds)

    r = sub.add_parser("rerun", parents=[common], help="replay a manifest and compare outputs")
    r.add_argument("manifest")
    r.add_argument("--out-dir")
    r.set_defaults(func=_rerun)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.threads is None:
            args.threads = _threads_default()
        elif args.threads < 1:
            raise CommandError("--threads must be positive")
        run = Run(args, argv)
        if args.func is _rerun:
            run.prefix = None
        return args.func(args, run)
    except CommandError as exc:
        print(f"movoids: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
