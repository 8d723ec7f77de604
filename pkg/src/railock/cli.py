"""Command-line front door: check, gen, bench, serve.

Exit codes for ``check``: 0 = LIVE, 1 = DEAD, 2 = UNKNOWN (timeout),
64 = usage error, 65 = unreadable or invalid instance.  ``bench`` walks a
directory of instance files and writes a delimited table plus rendered
figures next to it.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import generator
from .detector import detect
from .model import InstanceError, parse_instance, serialize_instance

EXIT_LIVE = 0
EXIT_DEAD = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64
EXIT_BAD_INSTANCE = 65

_STATUS_EXIT = {"live": EXIT_LIVE, "dead": EXIT_DEAD, "unknown": EXIT_UNKNOWN}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_instance(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        print(f"cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_INSTANCE)
    try:
        return parse_instance(text)
    except InstanceError as exc:
        print(f"invalid instance {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_INSTANCE)


def cmd_check(args) -> int:
    inst = _load_instance(args.instance)
    verdict = detect(
        inst,
        algorithm=args.algorithm,
        backend=args.backend,
        timeout=args.timeout_s,
        dimacs_path=args.dimacs,
    )
    if args.json:
        print(json.dumps(verdict.to_doc()))
    else:
        print(
            f"{verdict.status.upper()} steps={verdict.steps} "
            f"time={verdict.time_s:.3f}s algorithm={verdict.algorithm}"
        )
    if args.plan_out and verdict.plan is not None:
        plan_doc = [[[t, r] for t, r in step] for step in verdict.plan]
        Path(args.plan_out).write_text(json.dumps(plan_doc, indent=2) + "\n")
    return _STATUS_EXIT[verdict.status]


def cmd_gen(args) -> int:
    try:
        if args.family == "ladder":
            inst = generator.gen_ladder(
                args.stations, train_len=args.train_len, track_len=args.track_len
            )
        elif args.family == "corridor":
            right = args.right_train_len
            if right is None:
                right = args.train_len
            inst = generator.gen_corridor(args.routes, args.train_len, right)
        elif args.family == "junction":
            inst = generator.gen_junction()
        else:
            inst = generator.gen_random(args.seed)
    except generator.InvalidParameter as exc:
        print(f"invalid parameter: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = serialize_instance(inst) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _bench_rows(args) -> tuple[list[dict], bool]:
    paths = sorted(Path(args.instance_dir).glob("*.json"))
    algorithms = [int(a) for a in args.algorithms.split(",")]
    rows, failed = [], False
    for path in paths:
        row: dict = {"instance": path.stem}
        try:
            inst = parse_instance(path.read_text())
        except (OSError, InstanceError) as exc:
            row["error"] = str(exc)
            failed = True
            rows.append(row)
            continue
        row["n_routes"] = len(inst.infrastructure.proutes)
        row["n_trains"] = len(inst.trains)
        for alg in algorithms:
            v = detect(inst, algorithm=alg, backend=args.backend, timeout=args.timeout_s)
            row[f"alg{alg}_result"] = v.status
            row[f"alg{alg}_steps"] = v.steps
            row[f"alg{alg}_time_s"] = round(v.time_s, 4)
        results = {row[f"alg{a}_result"] for a in algorithms}
        row["result"] = results.pop() if len(results) == 1 else "mixed"
        rows.append(row)
    return rows, failed


def _bench_figures(rows: list[dict], algorithms: list[int], outdir: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    done = [r for r in rows if "error" not in r]
    if not done:
        return
    names = [r["instance"] for r in done]
    for metric, fname, ylabel in [
        ("steps", "bench_steps.png", "steps at termination"),
        ("time_s", "bench_times.png", "wall time [s]"),
    ]:
        fig, ax = plt.subplots(figsize=(max(6, 0.9 * len(names)), 4))
        for alg in algorithms:
            ax.plot(names, [r[f"alg{alg}_{metric}"] for r in done], marker="o",
                    label=f"algorithm {alg}")
        ax.set_ylabel(ylabel)
        ax.set_xlabel("instance")
        ax.tick_params(axis="x", rotation=45)
        if metric == "time_s":
            ax.set_yscale("log")
        ax.legend()
        fig.tight_layout()
        fig.savefig(outdir / fname, dpi=150)
        plt.close(fig)


def cmd_bench(args) -> int:
    rows, failed = _bench_rows(args)
    algorithms = [int(a) for a in args.algorithms.split(",")]
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    fields = ["instance", "result", "n_routes", "n_trains"]
    for alg in algorithms:
        fields += [f"alg{alg}_result", f"alg{alg}_steps", f"alg{alg}_time_s"]
    fields.append("error")
    with open(outdir / "bench.csv", "w", newline="") as fp:
        writer = csv.DictWriter(fp, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    _bench_figures(rows, algorithms, outdir)
    for row in rows:
        if "error" in row:
            print(f"{row['instance']}: ERROR {row['error']}")
        else:
            cells = " ".join(
                f"alg{a}={row[f'alg{a}_result']}/{row[f'alg{a}_steps']}"
                f"/{row[f'alg{a}_time_s']}s"
                for a in algorithms
            )
            print(f"{row['instance']}: routes={row['n_routes']} "
                  f"trains={row['n_trains']} {cells}")
    print(f"wrote {outdir / 'bench.csv'}")
    return 1 if failed else 0


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="railock", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide liveness of an instance file")
    p.add_argument("instance")
    p.add_argument("--algorithm", type=int, choices=(1, 2, 3), default=3)
    p.add_argument("--timeout-s", type=float, default=60.0)
    p.add_argument("--backend", choices=("auto", "bridge", "internal"), default=None)
    p.add_argument("--plan-out", help="write the live plan as JSON to this path")
    p.add_argument("--dimacs", help="dump the final CNF in DIMACS format to this path")
    p.add_argument("--json", action="store_true", help="print the verdict as JSON")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="write a generated instance file")
    p.add_argument("family", choices=("ladder", "corridor", "junction", "random"))
    p.add_argument("--stations", type=int, default=2, help="ladder: station count")
    p.add_argument("--routes", type=int, default=9, help="corridor: route count")
    p.add_argument("--train-len", type=float, default=None)
    p.add_argument("--track-len", type=float, default=1.0, help="ladder: station track length")
    p.add_argument("--right-train-len", type=float, default=None,
                   help="corridor: right train length (0 omits it; default --train-len)")
    p.add_argument("--seed", type=int, default=0, help="random: generator seed")
    p.add_argument("-o", "--output", help="output path (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run all algorithms over a directory of instances")
    p.add_argument("instance_dir")
    p.add_argument("--algorithms", default="1,2,3")
    p.add_argument("--timeout-s", type=float, default=60.0)
    p.add_argument("--backend", choices=("auto", "bridge", "internal"), default=None)
    p.add_argument("-o", "--output-dir", default="bench_out",
                   help="directory for bench.csv and figures")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="start the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
