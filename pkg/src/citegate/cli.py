"""Command-line entry points.

Exit codes: 0 success, 1 usage or config error, 2 dataset I/O error,
3 run completed but some citations carry diagnostic flags.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import plotting
from .benchmark import (DEFAULT_SEED, EchoCorruptionBackend, HeuristicCorruptionBackend,
                        build_benchmark)
from .cache import CachedClient, RetrievalCache
from .config import ConfigError, PipelineConfig, load_config
from .evaluation import LatencyRun, aggregate_latency, compute_metrics
from .labeling import ScoredExample, best_pair, sweep_thresholds
from .models import CASCADE_ORDER, LABELS, Label, RawCitation, Thresholds
from .pipeline import run_batch, verdict_row
from .sources import ScriptedBackend, live_clients
from .verification import RuleBasedJudge

log = logging.getLogger("citegate")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_PARTIAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_jsonl(path) -> list:
    rows = []
    try:
        with open(path, encoding="utf-8") as fh:
            for n, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    row = json.loads(line)
                except ValueError as exc:
                    raise DataError(f"{path}:{n}: invalid JSON: {exc}") from None
                if not isinstance(row, dict):
                    raise DataError(f"{path}:{n}: expected a JSON object")
                rows.append(row)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    return rows


def write_jsonl(path, rows) -> None:
    text = "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in rows)
    _write(path, text)


def _write(path, text) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def _write_json(path, obj) -> None:
    _write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_csv(path, header, rows) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def _require(row, keys, where):
    missing = [k for k in keys if k not in row]
    if missing:
        raise DataError(f"{where}: missing field(s) {missing}")


def load_dataset(path) -> list:
    out = []
    for i, row in enumerate(read_jsonl(path)):
        _require(row, ("id", "text"), f"{path} row {i + 1}")
        try:
            out.append(RawCitation(str(row["id"]), str(row.get("collection", "")), row["text"]))
        except ValueError as exc:
            raise DataError(f"{path} row {i + 1}: {exc}") from exc
    if len({c.id for c in out}) != len(out):
        raise DataError(f"{path}: duplicate citation ids")
    return out


def load_gold(path) -> dict:
    gold = {}
    for i, row in enumerate(read_jsonl(path)):
        _require(row, ("id", "gold_label"), f"{path} row {i + 1}")
        try:
            gold[str(row["id"])] = Label.parse(row["gold_label"])
        except ValueError as exc:
            raise DataError(f"{path} row {i + 1}: {exc}") from exc
    return gold


def _load_config(args) -> PipelineConfig:
    cfg = load_config(getattr(args, "config", None))
    return cfg.with_overrides(no_web_search=getattr(args, "no_web_search", False),
                              no_reviewer=getattr(args, "no_reviewer", False),
                              workers=getattr(args, "workers", None),
                              cache_path=getattr(args, "cache", None))


def _make_judge(cfg: PipelineConfig):
    if cfg.verifier.backend == "rule_based":
        return RuleBasedJudge()
    from .llm import ChatClient, ChatJudge
    return ChatJudge(ChatClient(cfg.verifier.model, cfg.verifier.temperature,
                                base_url=cfg.verifier.base_url))


def cmd_verify(args) -> int:
    cfg = _load_config(args)
    if args.thresholds:
        try:
            record = json.loads(Path(args.thresholds).read_text(encoding="utf-8"))
            cfg = replace(cfg, thresholds=Thresholds.from_dict(record))
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"bad thresholds file {args.thresholds}: {exc}") from exc
    citations = load_dataset(args.dataset)
    if args.fixtures:
        try:
            backend = ScriptedBackend.from_file(args.fixtures)
        except (OSError, ValueError) as exc:
            raise DataError(f"cannot load fixtures {args.fixtures}: {exc}") from exc
        clients, clock = backend.clients(), backend.clock
    else:
        s = cfg.sources
        clients = live_clients(s.timeout, s.retries, s.rate_limits, s.web_endpoint)
        clock = time.perf_counter
    if cfg.cache_path:
        cache = RetrievalCache(cfg.cache_path)
        clients = {k: CachedClient(v, cache) for k, v in clients.items()}
    outputs = run_batch(citations, cfg, clients, _make_judge(cfg), clock=clock)
    write_jsonl(args.out, (verdict_row(o.verdict) for o in outputs))
    if args.audit:
        write_jsonl(args.audit, (o.audit_record() for o in outputs))
    flagged = sum(o.has_diagnostics for o in outputs)
    counts = {label.value: sum(o.verdict.label is label for o in outputs) for label in LABELS}
    print(f"verified {len(outputs)} citations: {counts}; {flagged} with diagnostics")
    return EXIT_PARTIAL if flagged else EXIT_OK


def _scored_examples(args) -> list:
    rows = read_jsonl(args.dataset)
    if args.verdicts:
        gold = load_gold(args.dataset)
        examples = []
        for i, row in enumerate(read_jsonl(args.verdicts)):
            _require(row, ("id", "score"), f"{args.verdicts} row {i + 1}")
            if str(row["id"]) not in gold:
                raise DataError(f"no gold label for {row['id']!r}")
            examples.append(ScoredExample(float(row["score"]), gold[str(row["id"])]))
        return examples
    out = []
    for i, row in enumerate(rows):
        _require(row, ("score", "gold_label"), f"{args.dataset} row {i + 1}")
        try:
            out.append(ScoredExample(float(row["score"]), Label.parse(row["gold_label"])))
        except ValueError as exc:
            raise DataError(f"{args.dataset} row {i + 1}: {exc}") from exc
    return out


def cmd_calibrate(args) -> int:
    examples = _scored_examples(args)
    if not examples:
        raise DataError("calibration set is empty")
    try:
        sweep = sweep_thresholds(examples, args.step)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    tau_m, tau_e, f1 = best_pair(sweep)
    record = {"tau_m": tau_m, "tau_e": tau_e, "weighted_f1": float(f1), "grid_step": args.step}
    _write_json(args.out, record)
    if args.csv:
        _write_csv(args.csv, ["tau_m", "tau_e", "weighted_f1"],
                   [(m, e, f"{float(v):.6f}") for m, e, v in sweep])
    if args.figures:
        plotting.calibration_heatmap(sweep, Path(args.figures) / "calibration_f1.png",
                                     Thresholds(tau_m, tau_e))
    print(f"tau_m={tau_m} tau_e={tau_e} weighted_f1={float(f1):.4f} over {len(sweep)} pairs")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    gold = load_gold(args.dataset)
    preds, golds = [], []
    for i, row in enumerate(read_jsonl(args.verdicts)):
        _require(row, ("id", "label"), f"{args.verdicts} row {i + 1}")
        key = str(row["id"])
        if key not in gold:
            raise DataError(f"no gold label for {key!r}")
        preds.append(Label.parse(row["label"]))
        golds.append(gold[key])
    if not preds:
        raise DataError("no verdicts to evaluate")
    report = compute_metrics(preds, golds)
    _write_json(args.out, report.to_dict())
    if args.csv:
        rows = [(label.value, f"{s.precision:.6f}", f"{s.recall:.6f}", f"{s.f1:.6f}", s.support)
                for label, s in report.per_class.items()]
        rows.append(("macro", "", "", f"{report.macro_f1:.6f}", report.n))
        rows.append(("accuracy", "", "", f"{report.accuracy:.6f}", report.n))
        _write_csv(args.csv, ["class", "precision", "recall", "f1", "support"], rows)
    if args.figures:
        plotting.confusion_heatmap(report, Path(args.figures) / "confusion.png")
        plotting.f1_bars(report, Path(args.figures) / "f1.png")
    print(report.format_table())
    return EXIT_OK


def _latency_runs(args) -> list:
    gold = load_gold(args.dataset) if args.dataset else {}
    runs = []
    for i, row in enumerate(read_jsonl(args.verdicts)):
        _require(row, ("id", "stage_timings_ms"), f"{args.verdicts} row {i + 1}")
        timings = row["stage_timings_ms"] or {}
        try:
            stages = {s: (None if timings.get(s.value) is None else timings[s.value] / 1000.0)
                      for s in CASCADE_ORDER}
        except TypeError as exc:
            raise DataError(f"{args.verdicts} row {i + 1}: bad timing: {exc}") from exc
        error = any(str(f).startswith("source_error:") for f in row.get("flags", []))
        runs.append(LatencyRun(stages, error, gold.get(str(row["id"]))))
    return runs


def _fmt(v):
    return "" if v is None else f"{v:.6f}"


def latency_record(stats) -> dict:
    def summ(s):
        return None if s is None else {k: getattr(s, k) for k in
                                            ("mean", "median", "p95", "p99", "max", "std", "n")}
    return {
        "n_runs": stats.n_runs,
        "n_excluded": stats.n_excluded,
        "stages": {s.value: {"reach_rate": st.reach_rate, "cond_mean": st.cond_mean,
                             "cond_median": st.cond_median, "cond_p95": st.cond_p95,
                             "cond_p99": st.cond_p99,
                             "expected_contribution": st.expected_contribution,
                             "n_reached": st.n_reached}
                   for s, st in stats.stages.items()},
        "overall": summ(stats.overall),
        "structured_only": summ(stats.structured_only),
        "per_class": {label.value: summ(s) for label, s in stats.per_class.items()},
        "units": "seconds",
    }


def cmd_bench_latency(args) -> int:
    stats = aggregate_latency(_latency_runs(args))
    _write_json(args.out, latency_record(stats))
    if args.csv:
        rows = [(s.value, f"{st.reach_rate:.6f}", _fmt(st.cond_mean), _fmt(st.cond_median),
                 _fmt(st.cond_p95), _fmt(st.cond_p99), f"{st.expected_contribution:.6f}")
                for s, st in stats.stages.items()]
        _write_csv(args.csv, ["stage", "reach_rate", "cond_mean_s", "cond_median_s",
                              "cond_p95_s", "cond_p99_s", "expected_contribution_s"], rows)
    if args.figures:
        plotting.stage_latency_bars(stats, Path(args.figures) / "stage_latency.png")
    o = stats.overall
    if o is None:
        print(f"no usable runs ({stats.n_excluded} excluded)")
    else:
        print(f"{stats.n_runs} runs ({stats.n_excluded} excluded): mean {o.mean:.3f}s "
              f"median {o.median:.3f}s p95 {o.p95:.3f}s max {o.max:.3f}s")
    return EXIT_OK


def cmd_corrupt(args) -> int:
    pool = load_dataset(args.dataset)
    topics = {}
    if args.topics:
        try:
            topics = {k: tuple(v) for k, v in
                      json.loads(Path(args.topics).read_text(encoding="utf-8")).items()}
        except (OSError, ValueError, TypeError) as exc:
            raise DataError(f"cannot read topics {args.topics}: {exc}") from exc
    if args.backend == "heuristic":
        backend = HeuristicCorruptionBackend(args.seed)
    elif args.backend == "echo":
        backend = EchoCorruptionBackend()
    else:
        from .llm import ChatClient, ChatCorruptionBackend
        backend = ChatCorruptionBackend(ChatClient(args.model))
    records, summary = build_benchmark(pool, backend, seed=args.seed, topics=topics)
    write_jsonl(args.out, (r.to_dict() for r in records))
    if args.dataset_out:
        write_jsonl(args.dataset_out, (r.to_dataset_row() for r in records))
    shares = ", ".join(f"{k} {100 * v:.2f}%" for k, v in summary.shares().items())
    print(f"{summary.total} records ({shares}); {summary.failed_batches} failed batches, "
          f"{summary.fallback_records} records kept valid by fallback")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="citegate", description="Detect hallucinated citations.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="label every citation in a dataset")
    v.add_argument("--dataset", required=True, help="JSONL with id, collection, text")
    v.add_argument("--out", required=True, help="verdict JSONL")
    v.add_argument("--audit", help="optional JSONL with full provenance per citation")
    v.add_argument("--config")
    v.add_argument("--fixtures", help="scripted source fixtures (JSON) instead of live APIs")
    v.add_argument("--thresholds", help="thresholds record from calibrate")
    v.add_argument("--workers", type=int)
    v.add_argument("--cache", help="retrieval cache directory")
    v.add_argument("--no-web-search", action="store_true")
    v.add_argument("--no-reviewer", action="store_true")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("calibrate", help="grid-search label thresholds on a dev set")
    c.add_argument("--dataset", required=True,
                   help="JSONL with gold_label (and score, unless --verdicts is given)")
    c.add_argument("--verdicts", help="verdict JSONL supplying scores")
    c.add_argument("--out", required=True)
    c.add_argument("--step", type=float, default=0.25)
    c.add_argument("--csv", help="write the full sweep as CSV")
    c.add_argument("--figures", help="directory for PNG figures")
    c.set_defaults(func=cmd_calibrate)

    e = sub.add_parser("evaluate", help="score verdicts against gold labels")
    e.add_argument("--dataset", required=True, help="gold JSONL with id, gold_label")
    e.add_argument("--verdicts", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--csv")
    e.add_argument("--figures")
    e.set_defaults(func=cmd_evaluate)

    k = sub.add_parser("corrupt", help="build a corruption benchmark from a clean pool")
    k.add_argument("--dataset", required=True, help="clean pool JSONL")
    k.add_argument("--out", required=True, help="benchmark record JSONL")
    k.add_argument("--dataset-out", help="also write a verify-ready dataset JSONL")
    k.add_argument("--seed", type=int, default=DEFAULT_SEED)
    k.add_argument("--topics", help="JSON mapping collection -> [topic, subtopic]")
    k.add_argument("--backend", choices=("heuristic", "echo", "chat"), default="heuristic")
    k.add_argument("--model", default="gpt-4o-mini")
    k.set_defaults(func=cmd_corrupt)

    b = sub.add_parser("bench-latency", help="aggregate per-stage retrieval latency")
    b.add_argument("--verdicts", required=True)
    b.add_argument("--dataset", help="gold JSONL for the per-class breakdown")
    b.add_argument("--out", required=True)
    b.add_argument("--csv")
    b.add_argument("--figures")
    b.set_defaults(func=cmd_bench_latency)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "workers", None) is not None and args.workers < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args)
    except (ConfigError, UsageError) as exc:
        print(f"citegate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"citegate: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
