"""Command-line interface: compute, generate, batch, and verify.

Instances travel as JSON objects (one per line for batch mode); results are
emitted as JSON on stdout with deterministic key and dimension ordering.
Diagnostics go to stderr.  Exit codes: 0 on success, 1 when any instance
failed or any verification disagreed, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from multiprocessing import Pool
from typing import Optional

from .complexes import DEFAULT_FACE_CAP
from .errors import BoundedDegreeError, InvalidParamsError, ParseError
from .graph import CanonicalKey, CaterpillarSpec, gen_cycle, gen_path
from .harness import (
    ComputeResult,
    Instance,
    compute_instance,
    instance_json,
    parse_instance,
    sweep_caterpillars,
    sweep_cycles,
    sweep_forests,
    sweep_matching_caterpillars,
    sweep_random_forests,
)
from .homology import HomologyProfile
from .recursion import SphereCounts

CACHE_ENV = "BDCOMPLEX_CACHE"
CACHE_HEADER = "bdcomplex-cache v1"


# ---------------------------------------------------------------------------
# persistent memo cache
# ---------------------------------------------------------------------------


def load_cache(path: str) -> dict[CanonicalKey, SphereCounts]:
    """Load a cache file; anything corrupt is skipped with a warning."""
    cache: dict[CanonicalKey, SphereCounts] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n")
            if header != CACHE_HEADER:
                print(f"warning: ignoring cache {path}: bad header", file=sys.stderr)
                return {}
            for lineno, line in enumerate(fh, start=2):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    hexkey, payload = line.split("\t", 1)
                    counts = {int(d): int(c) for d, c in json.loads(payload).items()}
                    cache[bytes.fromhex(hexkey)] = counts
                except (ValueError, json.JSONDecodeError):
                    print(
                        f"warning: ignoring corrupt cache record at {path}:{lineno}",
                        file=sys.stderr,
                    )
    except FileNotFoundError:
        pass
    except OSError as exc:
        print(f"warning: ignoring cache {path}: {exc}", file=sys.stderr)
    return cache


def append_cache(path: str, cache: dict[CanonicalKey, SphereCounts], known: set[CanonicalKey]):
    """Append records for keys not yet in the file."""
    fresh = [k for k in cache if k not in known]
    if not fresh:
        return
    try:
        new_file = not os.path.exists(path)
        with open(path, "a", encoding="utf-8") as fh:
            if new_file:
                fh.write(CACHE_HEADER + "\n")
            for key in fresh:
                payload = json.dumps(
                    {str(d): c for d, c in sorted(cache[key].items())},
                    separators=(",", ":"),
                )
                fh.write(f"{key.hex()}\t{payload}\n")
    except OSError as exc:
        print(f"warning: could not update cache {path}: {exc}", file=sys.stderr)


# ---------------------------------------------------------------------------
# JSON rendering
# ---------------------------------------------------------------------------


def _counts_json(counts: SphereCounts) -> dict[str, int]:
    return {str(d): counts[d] for d in sorted(counts)}


def _homology_json(profile: HomologyProfile) -> dict:
    return {
        "betti": {str(d): profile.betti[d] for d in sorted(profile.betti)},
        "torsion": {str(d): list(profile.torsion[d]) for d in sorted(profile.torsion)},
    }


def result_json(instance: Instance, res: ComputeResult, timings: bool = False) -> dict:
    out: dict = {"instance": instance.source, "method": res.method_used}
    if res.wedge_consistent:
        out["contractible"] = res.contractible
        out["spheres"] = _counts_json(res.spheres)
    else:
        out["wedge_consistent"] = False
    if res.homology is not None:
        out["homology"] = _homology_json(res.homology)
    if timings:
        out["timing_ms"] = {k: round(v, 3) for k, v in res.timings_ms.items()}
    return out


def _result_table(obj: dict) -> str:
    if obj.get("wedge_consistent") is False:
        shape = "NOT a wedge of spheres (torsion)"
    elif obj.get("contractible"):
        shape = "contractible"
    else:
        spheres = obj.get("spheres", {})
        shape = " v ".join(
            f"{c}*S^{d}" if c > 1 else f"S^{d}"
            for d, c in sorted(spheres.items(), key=lambda kv: int(kv[0]))
        )
    return f"{obj['method']:<14} {shape}"


def _emit(obj: dict, output: str, stream=None):
    stream = stream or sys.stdout
    if output == "table":
        print(_result_table(obj) if "method" in obj else json.dumps(obj), file=stream)
    else:
        print(json.dumps(obj, separators=(",", ":")), file=stream)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _read_instance_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _parse_json_instance(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return parse_instance(obj)


def cmd_compute(args) -> int:
    cache_path = os.environ.get(CACHE_ENV)
    cache = load_cache(cache_path) if cache_path else {}
    known = set(cache)
    try:
        instance = _parse_json_instance(_read_instance_text(args.instance))
        res = compute_instance(instance, args.method, args.face_cap, cache=cache)
    except BoundedDegreeError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, args.output)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(result_json(instance, res, args.timings), args.output)
    if cache_path:
        append_cache(cache_path, cache, known)
    return 0


_worker_state: dict = {}


def _batch_init(method: str, face_cap: int, cache: dict):
    _worker_state["method"] = method
    _worker_state["face_cap"] = face_cap
    _worker_state["cache"] = dict(cache)


def _batch_line(task: tuple[int, str]) -> dict:
    lineno, line = task
    try:
        instance = _parse_json_instance(line)
        res = compute_instance(
            instance,
            _worker_state["method"],
            _worker_state["face_cap"],
            cache=_worker_state["cache"],
        )
        return result_json(instance, res, False)
    except BoundedDegreeError as exc:
        return {
            "error": {"type": type(exc).__name__, "message": str(exc)},
            "line": lineno,
        }


def cmd_batch(args) -> int:
    cache_path = os.environ.get(CACHE_ENV)
    cache = load_cache(cache_path) if cache_path else {}
    if args.file == "-":
        raw_lines = sys.stdin.read().splitlines()
    else:
        with open(args.file, "r", encoding="utf-8") as fh:
            raw_lines = fh.read().splitlines()
    tasks = [
        (i, line) for i, line in enumerate(raw_lines, start=1) if line.strip()
    ]
    _batch_init(args.method, args.face_cap, cache)
    if args.jobs > 1 and len(tasks) > 1:
        with Pool(
            processes=args.jobs,
            initializer=_batch_init,
            initargs=(args.method, args.face_cap, cache),
        ) as pool:
            results = list(pool.imap(_batch_line, tasks, chunksize=1))
    else:
        results = [_batch_line(t) for t in tasks]
    failed = False
    for obj in results:
        failed = failed or "error" in obj
        _emit(obj, args.output)
    return 1 if failed else 0


def _parse_int_list(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")] if text else []
    except ValueError as exc:
        raise InvalidParamsError(f"{what} must be comma-separated integers") from exc


def cmd_generate(args) -> int:
    try:
        if args.family == "caterpillar":
            m = _parse_int_list(args.m, "--m")
            lam = _parse_int_list(args.bounds, "--lambda")
            CaterpillarSpec(tuple(m), tuple(lam))  # validate
            obj = {"caterpillar": {"m": m, "lambda": lam}}
        elif args.family == "cycle":
            lam = _parse_int_list(args.bounds, "--lambda")
            gen_cycle(args.n)
            if len(lam) != args.n:
                raise InvalidParamsError("cycle needs n bounds")
            obj = {"cycle": {"n": args.n, "lambda": lam}}
        else:  # path
            lam = _parse_int_list(args.bounds, "--lambda")
            graph = gen_path(args.n)
            if len(lam) != args.n:
                raise InvalidParamsError("path needs n bounds")
            obj = instance_json(graph, lam)
    except (BoundedDegreeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(obj, separators=(",", ":")))
    return 0


def cmd_verify(args) -> int:
    if args.family == "forests":
        report = sweep_forests(
            args.max_edges,
            args.max_bound,
            jobs=args.jobs,
            face_cap=args.face_cap,
            raw_samples=args.raw_samples,
            seed=args.seed,
        )
    elif args.family == "caterpillars":
        report = sweep_caterpillars(
            args.max_spine,
            args.max_leaves,
            args.max_bound,
            min_leaves=args.min_leaves,
            jobs=args.jobs,
            face_cap=args.face_cap,
        )
    elif args.family == "cycles":
        report = sweep_cycles(
            list(range(3, args.max_n + 1)),
            args.max_bound,
            _parse_int_list(args.last_bounds, "--last-bounds"),
            jobs=args.jobs,
            face_cap=args.face_cap,
        )
    elif args.family == "matching":
        report = sweep_matching_caterpillars(
            args.max_spine,
            args.max_leaves,
            _parse_int_list(args.k, "--k"),
            jobs=args.jobs,
            face_cap=args.face_cap,
        )
    else:  # random
        report = sweep_random_forests(
            args.count,
            args.seed,
            args.max_edges,
            args.max_bound,
            jobs=args.jobs,
            face_cap=args.face_cap,
        )
    obj = report.to_json(include_timings=args.timings)
    if args.output == "table":
        for key, value in obj.items():
            print(f"{key}: {value}")
    else:
        print(json.dumps(obj, separators=(",", ":")))
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bdcomplex",
        description="Bounded degree complexes: homotopy types and verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--face-cap", type=int, default=DEFAULT_FACE_CAP)
        p.add_argument("--output", choices=("json", "table"), default="json")
        p.add_argument("--timings", action="store_true", help="include timing fields")

    p = sub.add_parser("compute", help="compute one instance")
    p.add_argument("instance", nargs="?", default="-", help="instance JSON file or - for stdin")
    p.add_argument("--method", choices=("auto", "recursion", "closed-form", "homology"), default="auto")
    common(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("batch", help="compute a JSON-lines file of instances")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--method", choices=("auto", "recursion", "closed-form", "homology"), default="auto")
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("generate", help="emit an instance JSON")
    fam = p.add_subparsers(dest="family", required=True)
    pc = fam.add_parser("caterpillar")
    pc.add_argument("--m", required=True, help="comma-separated leaf counts")
    pc.add_argument("--lambda", dest="bounds", required=True, help="comma-separated spine bounds")
    pp = fam.add_parser("path")
    pp.add_argument("--n", type=int, required=True)
    pp.add_argument("--lambda", dest="bounds", required=True)
    py = fam.add_parser("cycle")
    py.add_argument("--n", type=int, required=True)
    py.add_argument("--lambda", dest="bounds", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="sweep a family and check all methods agree")
    fam = p.add_subparsers(dest="family", required=True)

    def verify_common(q):
        q.add_argument("--jobs", type=int, default=1)
        q.add_argument("--face-cap", type=int, default=DEFAULT_FACE_CAP)
        q.add_argument("--output", choices=("json", "table"), default="json")
        q.add_argument("--timings", action="store_true")
        q.add_argument("--seed", type=int, default=0)

    q = fam.add_parser("forests")
    q.add_argument("--max-edges", type=int, default=5)
    q.add_argument("--max-bound", type=int, default=2)
    q.add_argument("--raw-samples", type=int, default=200)
    verify_common(q)
    q = fam.add_parser("caterpillars")
    q.add_argument("--max-spine", type=int, default=3)
    q.add_argument("--max-leaves", type=int, default=3)
    q.add_argument("--max-bound", type=int, default=3)
    q.add_argument("--min-leaves", type=int, default=1)
    verify_common(q)
    q = fam.add_parser("cycles")
    q.add_argument("--max-n", type=int, default=7)
    q.add_argument("--max-bound", type=int, default=3)
    q.add_argument("--last-bounds", default="0,2,3")
    verify_common(q)
    q = fam.add_parser("matching")
    q.add_argument("--max-spine", type=int, default=3)
    q.add_argument("--max-leaves", type=int, default=3)
    q.add_argument("--k", default="1,2,3")
    verify_common(q)
    q = fam.add_parser("random")
    q.add_argument("--count", type=int, default=100)
    q.add_argument("--max-edges", type=int, default=9)
    q.add_argument("--max-bound", type=int, default=3)
    verify_common(q)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BoundedDegreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
