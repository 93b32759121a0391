"""Command-line entry points: run refinement batches, evaluate clusterings,
generate synthetic corpora, and launch the session service."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path

from .core import ClusteringError, MinedClustering
from .corpus import (
    CorpusError,
    CorruptionKnobs,
    baseline_parse,
    export_clustering,
    generate_synthetic,
    import_clustering,
    load_corpus,
)
from .feedback import SimulatedFeedback
from .metrics import RefinementReport, error_census, group_accuracy, message_accuracy
from .refine import pipeline

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

UNTIL_STABLE_CAP = 100
DEFAULT_SERVE_ADDR = "127.0.0.1:8200"
SERVE_ADDR_ENV = "LOGREFINE_SERVE_ADDR"


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_ERROR):
        super().__init__(message)
        self.code = code


def _parse_kv(text: str) -> dict[str, str]:
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise CliError(f"expected key=value, got {item!r}", EXIT_USAGE)
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _parse_generate(text: str, seed: int):
    spec = _parse_kv(text)
    aliases = {"K": "k", "logs": "logs_per_cluster", "slots": "param_slots"}
    params = {"k": 10, "logs_per_cluster": 20, "param_slots": 3}
    for key, value in spec.items():
        name = aliases.get(key, key)
        if name not in params:
            raise CliError(
                f"unknown generator parameter {key!r}; "
                "use K=, logs=, slots=",
                EXIT_USAGE,
            )
        params[name] = int(value)
    return params, seed


def _parse_repeat(value: str) -> int:
    if value == "until-stable":
        return UNTIL_STABLE_CAP
    try:
        n = int(value)
    except ValueError:
        raise CliError(
            f"--repeat takes an integer or 'until-stable', got {value!r}", EXIT_USAGE
        )
    if n < 0:
        raise CliError("--repeat must be >= 0", EXIT_USAGE)
    return n


def _require_file(path: str | None, what: str) -> Path:
    if not path:
        raise CliError(f"missing {what}", EXIT_USAGE)
    p = Path(path)
    if not p.exists():
        raise CliError(f"{what} not found: {p}", EXIT_USAGE)
    return p


def _load_inputs(args):
    if args.generate:
        params, seed = _parse_generate(args.generate, args.seed)
        store, gt = generate_synthetic(
            params["k"], params["logs_per_cluster"], params["param_slots"], seed=seed
        )
    else:
        logs = _require_file(args.logs, "log file (--logs)")
        truth = _require_file(args.truth, "ground-truth file (--truth)")
        store, gt = load_corpus(logs, truth)
    return store, gt


def _load_base(args, store) -> MinedClustering:
    if args.import_path:
        path = _require_file(args.import_path, "clustering file (--import)")
        mc = import_clustering(path)
        if mc.n_logs != len(store):
            raise CliError(
                f"imported clustering covers {mc.n_logs} logs, corpus has {len(store)}"
            )
        return mc
    knobs = CorruptionKnobs.from_mapping(
        {k: float(v) for k, v in _parse_kv(",".join(args.knob or [])).items()}
    )
    return baseline_parse(store, knobs, seed=args.seed + 1)


def _clustering_path(out: Path) -> Path:
    if out.suffix == ".json":
        return out.with_name(out.stem + ".clustering.json")
    return out.with_name(out.name + ".clustering.json")


def cmd_run(args) -> int:
    store, gt = _load_inputs(args)
    base = _load_base(args, store)
    fb = SimulatedFeedback(gt)
    started = time.perf_counter()
    refined = pipeline(base.copy(), store, fb, _parse_repeat(args.repeat))
    elapsed = time.perf_counter() - started
    report = RefinementReport.build(base, refined, gt, fb.counters)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(report.to_json())
    clustering_out = _clustering_path(out)
    export_clustering(refined, clustering_out)

    print(f"GA {report.ga_before:.4f} -> {report.ga_after:.4f}")
    print(f"MA {report.ma_before:.4f} -> {report.ma_after:.4f}")
    print(f"feedback: {report.counters['n_total']} questions")
    print(f"report: {out}")
    print(f"clustering: {clustering_out}")
    print(f"refinement time: {elapsed:.2f}s", file=sys.stderr)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    store, gt = _load_inputs(args)
    path = _require_file(args.import_path, "clustering file (--import)")
    mc = import_clustering(path)
    if mc.n_logs != len(store):
        raise CliError(
            f"clustering covers {mc.n_logs} logs, corpus has {len(store)}"
        )
    doc = {
        "version": 1,
        "ga": group_accuracy(mc, gt),
        "ma": message_accuracy(mc, gt),
        "census": error_census(mc.pairs, gt),
        "n_logs": mc.n_logs,
        "n_pairs": len(mc.pairs),
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"report: {args.out}")
    print(f"GA {doc['ga']:.4f}  MA {doc['ma']:.4f}")
    for name, count in sorted(doc["census"].items()):
        print(f"  {name}: {count}")
    return EXIT_OK


def cmd_generate(args) -> int:
    params, seed = _parse_generate(args.generate or "", args.seed)
    store, gt = generate_synthetic(
        params["k"], params["logs_per_cluster"], params["param_slots"], seed=seed
    )
    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    log_path = prefix.with_suffix(".log")
    truth_path = prefix.with_suffix(".csv")
    with log_path.open("w") as fh:
        for n in range(len(store)):
            fh.write(store.raw(n) + "\n")
    with truth_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["LineId", "EventId", "EventTemplate"])
        for n in range(len(store)):
            k = gt.cluster_of[n]
            writer.writerow([n + 1, f"E{k}", " ".join(gt.templates[k])])
    print(f"logs: {log_path}")
    print(f"truth: {truth_path}")
    print(f"{len(store)} lines, {gt.k} clusters")
    return EXIT_OK


def _resolve_serve_addr(flag_value: str | None) -> tuple[str, int]:
    addr = flag_value or os.environ.get(SERVE_ADDR_ENV) or DEFAULT_SERVE_ADDR
    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise CliError(f"serve address must be host:port, got {addr!r}", EXIT_USAGE)
    return host, int(port)


def cmd_serve(args) -> int:
    import socket

    import uvicorn

    from .service import create_app

    host, port = _resolve_serve_addr(args.serve_addr)
    probe = socket.socket()
    try:
        probe.bind((host, port))
    except OSError as exc:
        raise CliError(f"cannot bind {host}:{port} (port in use?): {exc}")
    finally:
        probe.close()
    uvicorn.run(create_app(), host=host, port=port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logrefine",
        description="Refine log template mining output with light-weight feedback.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_corpus_flags(p):
        p.add_argument("--logs", help="raw log file, one log per line")
        p.add_argument("--truth", help="ground truth CSV (LineId,EventId,EventTemplate)")
        p.add_argument(
            "--generate",
            metavar="SPEC",
            help="synthesize a corpus instead, e.g. K=50,logs=40,slots=3",
        )
        p.add_argument("--seed", type=int, default=0)

    run = sub.add_parser("run", help="refine a base clustering with simulated feedback")
    add_corpus_flags(run)
    run.add_argument("--import", dest="import_path", help="base clustering JSON")
    run.add_argument(
        "--knob",
        action="append",
        metavar="K=V",
        help="baseline corruption knob (split_p, merge_p, truncate_p); repeatable",
    )
    run.add_argument("--repeat", default="0", help="merge rounds: N or 'until-stable'")
    run.add_argument("--out", default="report.json", help="report path")
    run.set_defaults(fn=cmd_run)

    ev = sub.add_parser("evaluate", help="score a clustering against ground truth")
    add_corpus_flags(ev)
    ev.add_argument("--import", dest="import_path", required=True)
    ev.add_argument("--out", help="metrics report path (optional)")
    ev.set_defaults(fn=cmd_evaluate)

    gen = sub.add_parser("generate", help="write a synthetic corpus to disk")
    gen.add_argument("--generate", metavar="SPEC", help="e.g. K=50,logs=40,slots=3")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default="corpus", help="output path prefix")
    gen.set_defaults(fn=cmd_generate)

    serve = sub.add_parser("serve", help="start the interactive session service")
    serve.add_argument(
        "--serve-addr",
        help=f"host:port (default {DEFAULT_SERVE_ADDR}, env {SERVE_ADDR_ENV})",
    )
    serve.set_defaults(fn=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (CorpusError, ClusteringError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
