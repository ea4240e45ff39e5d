"""Command-line entry point for synthesis, dataset/index builds, retrieval,
optimization, verification and benchmarking."""

from __future__ import annotations

import argparse
import json
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from pathlib import Path

from .backend import BackendConfig, optimize_example
from .config import Config, load_config
from .errors import CompilerNotFound, Infeasible, LoopsmithError
from .features import extract_features
from .llm.providers import CannedTransformProvider, HttpChatProvider, ReplayProvider
from .pipeline.metrics import compute_metrics
from .pipeline.run import PipelineConfig, run_pipeline
from .retrieval.index import build_index, load_index, retrieve_top_n, save_index
from .retrieval.records import DatasetRecord
from .retrieval.scoring import RetrievalConfig
from .retrieval.target import prepare_target
from .scop.deps import compute_dependences
from .sidecar import (
    dependence_to_json,
    dumps_doc,
    features_to_json,
    read_doc,
    write_doc,
)
from .synth.core import synthesize
from .verify.difftest import VerifyConfig, differential_test
from .verify.inputs import builtin_seed_inputs, parse_array_decls

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_ENV = 2


def _error_doc(code: str, message: str) -> str:
    return dumps_doc("error", {"error": code, "message": message})


def _verify_config(cfg: Config) -> VerifyConfig:
    return VerifyConfig(
        cc=cfg.cc,
        cflags=cfg.cflags_tuple(),
        scop_time_limit=cfg.scop_time_limit,
        original_time_limit=cfg.original_time_limit,
        omp_threads=cfg.omp_threads,
    )


def _provider(cfg: Config):
    if cfg.provider == "stub":
        return CannedTransformProvider()
    if cfg.provider == "replay":
        if not cfg.fixture:
            raise LoopsmithError("replay provider needs --fixture")
        return ReplayProvider.from_file(cfg.fixture)
    if cfg.provider == "http":
        return HttpChatProvider.from_env()
    raise LoopsmithError(f"unknown provider {cfg.provider!r}")


def _synth_one(args):
    seed, size_spec = args
    try:
        return seed, synthesize(seed, size_spec=size_spec), None
    except Infeasible as exc:
        return seed, None, str(exc)


def _sidecar_payload(rec) -> dict:
    deps = compute_dependences(rec.scop, collapse=True)
    scop = rec.scop
    return {
        "id": f"seed{rec.seed:06d}",
        "seed": rec.seed,
        "retries": rec.retries,
        "params": rec.params.as_dict(),
        "global_params": dict(scop.global_params),
        "schedules": [list(s.schedule.entries) for s in scop.statements],
        "statements": [
            {
                "write": {
                    "array": s.write.array_name,
                    "rows": [r.render() for r in s.write.rows],
                },
                "reads": [
                    {"array": r.array_name, "rows": [x.render() for x in r.rows]}
                    for r in s.reads
                ],
                "op": s.op,
            }
            for s in scop.statements
        ],
        "dependences": [dependence_to_json(d) for d in deps.dependences],
        "dependences_best_effort": deps.best_effort,
        "configured_deps": [list(map(str, link)) for link in rec.configured_deps],
        "dropped_deps": [list(map(str, link)) for link in rec.dropped_deps],
    }


def cmd_synth(ns, cfg: Config) -> int:
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    seeds = [ns.seed + k for k in range(ns.count)]
    tasks = [(seed, cfg.size_spec()) for seed in seeds]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_synth_one, tasks))
    else:
        results = [_synth_one(t) for t in tasks]
    emitted = skipped = 0
    for seed, rec, err in results:
        if rec is None:
            skipped += 1
            continue
        stem = f"example_{seed:06d}"
        (out / f"{stem}.c").write_text(rec.program)
        write_doc(out / f"{stem}.json", "example", _sidecar_payload(rec))
        emitted += 1
    print(f"synthesized {emitted} examples ({skipped} infeasible) in {out}")
    return EXIT_OK


def _dataset_one(args):
    c_path, out_dir, cfg = args
    program = Path(c_path).read_text()
    doc = read_doc(Path(c_path).with_suffix(".json"), "example")
    optimized, tag = optimize_example(program, BackendConfig(kind="builtin"))
    arrays = parse_array_decls(program)
    verdict = differential_test(
        program, optimized, builtin_seed_inputs(arrays), arrays, _verify_config(cfg)
    )
    if not verdict.passed:
        return c_path, f"excluded: optimized version verdict {verdict.klass}"
    target = prepare_target(program)
    record = DatasetRecord(
        id=doc["id"],
        example_source=program,
        optimized_source=optimized,
        features=target.features,
        dependence_summary=[],
        params=doc.get("params"),
    )
    payload = record.to_payload()
    payload["dependences"] = doc["dependences"]
    payload["optimize_backend"] = tag
    write_doc(Path(out_dir) / (Path(c_path).stem + ".json"), "record", payload)
    return c_path, None


def cmd_dataset_build(ns, cfg: Config) -> int:
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    sources = sorted(Path(ns.examples).glob("*.c"))
    if not sources:
        sys.stderr.write(_error_doc("EmptyCorpus", f"no .c files in {ns.examples}"))
        return EXIT_DOMAIN
    tasks = [(str(p), str(out), cfg) for p in sources]
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_dataset_one, tasks))
    else:
        results = [_dataset_one(t) for t in tasks]
    excluded = [(p, why) for p, why in results if why]
    for p, why in excluded:
        print(f"{p}: {why}")
    print(f"dataset: {len(results) - len(excluded)} records, {len(excluded)} excluded")
    return EXIT_OK


def _load_records(dataset_dir) -> list:
    records = []
    for path in sorted(Path(dataset_dir).glob("*.json")):
        doc = read_doc(path, "record")
        records.append(DatasetRecord.from_payload(doc))
    return records


def cmd_index_build(ns, cfg: Config) -> int:
    records = _load_records(ns.dataset)
    index = build_index(records, RetrievalConfig(top_n=cfg.top_n, demos=cfg.demos))
    save_index(index, ns.out)
    print(f"indexed {len(index)} records into {ns.out}")
    return EXIT_OK


def cmd_retrieve(ns, cfg: Config) -> int:
    rcfg = RetrievalConfig(top_n=ns.top_n or cfg.top_n, demos=min(cfg.demos, ns.top_n or cfg.top_n))
    index = load_index(ns.index, rcfg)
    target = prepare_target(Path(ns.target).read_text())
    result = retrieve_top_n(target.features, target.tokens, index, rcfg)
    hits = []
    for rec, breakdown in result.hits:
        entry = {"id": rec.id, "la": breakdown.la, "s_b": breakdown.s_b, "s_w": breakdown.s_w}
        if ns.explain:
            entry["s_m"] = breakdown.s_m
            entry["s_f"] = breakdown.s_f
            entry["per_statement"] = breakdown.per_statement
        hits.append(entry)
    print(dumps_doc("retrieval", {
        "target": ns.target,
        "corpus_smaller_than_n": result.corpus_smaller_than_n,
        "hits": hits,
    }), end="")
    return EXIT_OK


def cmd_optimize(ns, cfg: Config) -> int:
    program = Path(ns.target).read_text()
    index = load_index(ns.index)
    pcfg = PipelineConfig(
        k=cfg.k,
        seed=ns.seed,
        model=cfg.model,
        timing=cfg.timing,
        retrieval=RetrievalConfig(top_n=cfg.top_n, demos=cfg.demos),
        verify=_verify_config(cfg),
        coverage_saturation=cfg.coverage_saturation,
    )
    workdir = ns.workdir or tempfile.mkdtemp(prefix="loopsmith-opt-")
    result = run_pipeline(program, index, _provider(cfg), pcfg, workdir)
    Path(ns.out).write_text(result.final_program)
    report_path = ns.report or (str(ns.out) + ".report.json")
    write_doc(report_path, "run_report", result.report)
    print(f"wrote {ns.out} and {report_path}")
    return EXIT_DOMAIN if result.no_improvement else EXIT_OK


def cmd_verify(ns, cfg: Config) -> int:
    original = Path(ns.original).read_text()
    candidate = Path(ns.candidate).read_text()
    arrays = parse_array_decls(original)
    verdict = differential_test(
        original, candidate, builtin_seed_inputs(arrays), arrays, _verify_config(cfg)
    )
    print(dumps_doc("verdict", {
        "class": verdict.klass,
        "detail": verdict.detail[:2000],
        "scop_time": verdict.scop_time,
    }), end="")
    return EXIT_OK if verdict.passed else EXIT_DOMAIN


def cmd_bench(ns, cfg: Config) -> int:
    suite = sorted(Path(ns.suite).glob("*.c"))
    if not suite:
        sys.stderr.write(_error_doc("EmptyCorpus", f"no .c files in {ns.suite}"))
        return EXIT_DOMAIN
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    index = load_index(ns.index)
    reports = []
    for target in suite:
        pcfg = PipelineConfig(
            k=cfg.k,
            seed=ns.seed,
            model=cfg.model,
            timing=cfg.timing,
            retrieval=RetrievalConfig(top_n=cfg.top_n, demos=cfg.demos),
            verify=_verify_config(cfg),
            coverage_saturation=cfg.coverage_saturation,
        )
        result = run_pipeline(
            target.read_text(), index, _provider(cfg), pcfg, out / (target.stem + ".work")
        )
        (out / (target.stem + ".opt.c")).write_text(result.final_program)
        write_doc(out / (target.stem + ".report.json"), "run_report", result.report)
        reports.append(result.report)
    metrics = compute_metrics(reports)
    write_doc(out / "metrics.json", "metrics", metrics)
    print(f"{'target':<28} {'pass':<6} {'speedup':<10}")
    for target, report in zip(suite, reports):
        from .pipeline.metrics import speedup_of

        print(f"{target.stem:<28} {str(report['final']['passed']):<6} "
              f"{speedup_of(report):<10.3f}")
    print(f"pass@k={metrics['pass_at_k']:.4f} mean_speedup={metrics['mean_speedup']:.4f} "
          f"percent_faster={metrics['percent_faster']:.4f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopsmith",
        description="Synthesize SCoP loop programs, retrieve demonstrations, "
        "and drive feedback-based optimization.",
    )
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--cc", dest="flag_cc")
    parser.add_argument("--cflags", dest="flag_cflags")
    parser.add_argument("--time-limit", dest="flag_scop_time_limit", type=float)
    parser.add_argument("--provider", dest="flag_provider")
    parser.add_argument("--fixture", dest="flag_fixture")
    parser.add_argument("--timing", dest="flag_timing", choices=["wall", "virtual"])
    parser.add_argument("--jobs", dest="flag_jobs", type=int)
    parser.add_argument("--sizes", dest="flag_sizes")
    parser.add_argument("--k", dest="flag_k", type=int)
    parser.add_argument("--model", dest="flag_model")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate examples")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    dataset = sub.add_parser("dataset", help="dataset operations").add_subparsers(
        dest="subcommand", required=True
    )
    p = dataset.add_parser("build", help="optimize examples and write records")
    p.add_argument("--examples", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dataset_build)

    index = sub.add_parser("index", help="index operations").add_subparsers(
        dest="subcommand", required=True
    )
    p = index.add_parser("build", help="build the retrieval index")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_index_build)

    p = sub.add_parser("retrieve", help="rank dataset records for a target")
    p.add_argument("--target", required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--top-n", type=int, default=None)
    p.add_argument("--explain", action="store_true")
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("optimize", help="full four-step pipeline on a target")
    p.add_argument("--target", required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workdir", default=None)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify", help="differential-test two programs")
    p.add_argument("original")
    p.add_argument("candidate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="optimize a suite and emit metrics")
    p.add_argument("--suite", required=True)
    p.add_argument("--index", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    flags = {
        key[len("flag_"):]: value
        for key, value in vars(ns).items()
        if key.startswith("flag_") and value is not None
    }
    try:
        cfg = load_config(ns.config, flags)
        return ns.func(ns, cfg)
    except (CompilerNotFound,) as exc:
        sys.stderr.write(_error_doc(type(exc).__name__, str(exc)))
        return EXIT_ENV
    except LoopsmithError as exc:
        sys.stderr.write(_error_doc(type(exc).__name__, str(exc)))
        return EXIT_DOMAIN
    except FileNotFoundError as exc:
        sys.stderr.write(_error_doc("FileNotFound", str(exc)))
        return EXIT_ENV


if __name__ == "__main__":
    sys.exit(main())
