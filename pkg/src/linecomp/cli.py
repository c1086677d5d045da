"""Command-line entry points.

- ``bench gen``        build a masked benchmark dataset from a corpus
- ``eval run``         score a dataset against configured backends
- ``eval report``      aggregate metric rows into a table
- ``eval telemetry``   analyze an exported telemetry journal
- ``completion-server`` serve the HTTP API
- ``mock-backend``     serve a deterministic mock model backend
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from linecomp.analysis import (
    aggregate,
    analyze_telemetry,
    read_rows,
    run_offline_eval,
    write_rows,
)
from linecomp.benchmark import (
    DEFAULT_MAX_PER_FILE,
    RANDOM_STRATEGY,
    TRIGGER_STRATEGY,
    dedup_repositories,
    gen_random_masks,
    gen_trigger_masks,
    read_dataset,
    scan_corpus,
    write_dataset,
)
from linecomp.config import load_config, parse_backend
from linecomp.gateway import ModelGateway
from linecomp.mock_backend import MockBackendServer, echo_tail, fixed


def bench_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="bench", description="Benchmark dataset tools")
    sub = parser.add_subparsers(dest="command", required=True)
    gen = sub.add_parser("gen", help="generate a masked dataset from a corpus")
    gen.add_argument("--corpus", required=True, help="corpus root directory")
    gen.add_argument(
        "--strategy", required=True, choices=(RANDOM_STRATEGY, TRIGGER_STRATEGY)
    )
    gen.add_argument("--max-per-file", type=int, default=DEFAULT_MAX_PER_FILE)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument(
        "--exclude-repos", default=None, help="file with one repository id per line"
    )
    gen.add_argument("--out", required=True, help="output dataset path (JSONL)")
    args = parser.parse_args(argv)

    scan = scan_corpus(args.corpus)
    files = scan.files
    if args.exclude_repos:
        with open(args.exclude_repos, "r", encoding="utf-8") as fh:
            excluded = {line.strip() for line in fh if line.strip()}
        files = dedup_repositories(files, excluded)

    generate = gen_random_masks if args.strategy == RANDOM_STRATEGY else gen_trigger_masks
    samples = []
    for corpus_file in files:
        samples.extend(generate(corpus_file, args.seed, args.max_per_file))
    samples.sort(key=lambda s: (s.file_id, s.line_no))
    write_dataset(samples, args.out)
    message = f"wrote {len(samples)} samples from {len(files)} files to {args.out}"
    if scan.skipped_non_utf8:
        message += f" ({scan.skipped_non_utf8} non-UTF-8 files skipped)"
    print(message)
    return 0


def eval_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="eval", description="Evaluation tools")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a dataset against backends")
    run.add_argument("--dataset", required=True)
    run.add_argument("--backends", required=True, help="JSON config with a backends array")
    run.add_argument("--out", required=True, help="output rows path (JSONL)")

    report = sub.add_parser("report", help="aggregate metric rows")
    report.add_argument("--rows", required=True)
    report.add_argument("--group-by", required=True, choices=("language", "trigger", "model"))
    report.add_argument("--out", default=None, help="optional JSONL output path")

    telemetry = sub.add_parser("telemetry", help="analyze exported telemetry")
    telemetry.add_argument("--export", required=True)
    telemetry.add_argument("--out", required=True, help="report output directory")

    args = parser.parse_args(argv)

    if args.command == "run":
        samples = read_dataset(args.dataset)
        with open(args.backends, "r", encoding="utf-8") as fh:
            config = json.load(fh)
        gateway = ModelGateway([parse_backend(b) for b in config["backends"]])
        rows = run_offline_eval(samples, gateway)
        write_rows(rows, args.out)
        print(f"wrote {len(rows)} rows to {args.out}")
        return 0

    if args.command == "report":
        rows = read_rows(args.rows)
        table = aggregate(rows, args.group_by)
        print(table.to_text())
        if args.out:
            table.write_jsonl(args.out)
        return 0

    report_out = Path(args.out)
    result = analyze_telemetry(args.export, report_out)
    print(
        f"analyzed {result.n_records} records ({result.n_valid} valid), "
        f"acceptance rate {result.acceptance_rate:.4f}; report in {report_out}"
    )
    return 0


def serve_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="completion-server", description="Run the completion HTTP service"
    )
    parser.add_argument("--config", default=None, help="JSON service config path")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8008)
    args = parser.parse_args(argv)

    import uvicorn

    from linecomp.service import create_app

    config = load_config(args.config)
    if not config.backends:
        parser.error("no backends configured (config file or LINECOMP_BACKENDS)")
    app = create_app(config)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def mock_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="mock-backend", description="Run a deterministic mock model backend"
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8101)
    parser.add_argument("--behavior", choices=("fixed", "echo-tail"), default="echo-tail")
    parser.add_argument("--text", default="pass", help="suggestion for the fixed behavior")
    parser.add_argument("--delay-ms", type=int, default=0)
    args = parser.parse_args(argv)

    behavior = fixed(args.text) if args.behavior == "fixed" else echo_tail()
    server = MockBackendServer(
        behavior, delay_ms=args.delay_ms, host=args.host, port=args.port
    )
    print(f"mock backend listening at {server.endpoint}")
    try:
        server.start()._thread.join()
    except KeyboardInterrupt:
        server.stop()
    return 0


if __name__ == "__main__":
    sys.exit(bench_main())
