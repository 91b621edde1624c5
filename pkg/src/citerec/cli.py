"""Command line: ``citerec ingest | recommend | evaluate``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 partial algorithm failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .algorithms import parse_algo
from .cache import load_cache, save_cache
from .corpus import CorpusError, CorpusGraph, load_corpus, print_load_report
from .evaluation.runner import EvalConfig, run_evaluation
from .evaluation.synthetic import SyntheticParams, generate_synthetic_corpus
from .ranking import top_k

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_PARTIAL = 0, 1, 2, 3

log = logging.getLogger("citerec")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _kv(text: str) -> dict:
    out = {}
    for item in filter(None, (x.strip() for x in text.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"expected key=value, got {item!r}")
        for cast in (int, float):
            try:
                out[key] = cast(val)
                break
            except ValueError:
                continue
        else:
            out[key] = val
    return out


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def synthetic_corpus(spec: dict) -> CorpusGraph:
    spec = dict(spec)
    n = int(spec.pop("n", 10000))
    seed = int(spec.pop("seed", 0))
    try:
        params = SyntheticParams(**spec)
    except TypeError as exc:
        raise UsageError(f"bad synthetic parameter: {exc}") from None
    return generate_synthetic_corpus(n, params, seed)


def open_graph(corpus: str | None = None, graph: str | None = None, synthetic: dict | None = None,
               fmt: str = "jsonl") -> CorpusGraph:
    given = [x is not None for x in (corpus, graph, synthetic)]
    if sum(given) != 1:
        raise UsageError("give exactly one of --corpus, --graph, --synthetic")
    if graph is not None:
        return load_cache(graph)
    if corpus is not None:
        g = load_corpus(corpus, fmt)
        print_load_report(g)
        return g
    return synthetic_corpus(synthetic)


def _add_source(p: argparse.ArgumentParser):
    p.add_argument("--corpus", help="JSON-lines or TSV corpus file")
    p.add_argument("--format", default="jsonl", choices=["jsonl", "tsv"])
    p.add_argument("--graph", help="binary cache written by 'ingest'")
    p.add_argument("--synthetic", type=_kv, help="synthetic corpus, e.g. n=10000,seed=1")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="citerec", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ing = sub.add_parser("ingest", help="load a corpus and write a binary cache")
    ing.add_argument("--corpus", required=True)
    ing.add_argument("--format", default="jsonl", choices=["jsonl", "tsv"])
    ing.add_argument("--out", required=True)

    rec = sub.add_parser("recommend", help="rank papers for a seed set")
    _add_source(rec)
    rec.add_argument("--algo", required=True, help="name[:param=val,...]")
    rec.add_argument("--seeds", required=True, help="comma-separated paper ids")
    rec.add_argument("--k", type=int, default=10)
    rec.add_argument("--out", help="write CSV here instead of standard output")

    ev = sub.add_parser("evaluate", help="run the random-hide experiments")
    _add_source(ev)
    ev.add_argument("--config", help="JSON config file; flags override its values")
    ev.add_argument("--algo", action="append", help="repeatable name[:param=val,...]")
    ev.add_argument("--queries", type=int)
    ev.add_argument("--rng-seed", type=int)
    ev.add_argument("--k", type=_int_list)
    ev.add_argument("--delta", type=_int_list)
    ev.add_argument("--delta-mode", action="append", choices=["eq", "le"])
    ev.add_argument("--metrics", type=lambda s: tuple(x for x in s.split(",") if x))
    ev.add_argument("--out", default="eval_out")
    ev.add_argument("--threads", type=int)
    return parser


def cmd_ingest(args) -> int:
    g = load_corpus(args.corpus, args.format)
    print_load_report(g)
    save_cache(g, args.out)
    return EXIT_OK


def cmd_recommend(args) -> int:
    try:
        spec = parse_algo(args.algo)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    g = open_graph(args.corpus, args.graph, args.synthetic, args.format)
    seeds = [g.index_of(s.strip()) for s in args.seeds.split(",") if s.strip()]
    if not seeds:
        raise UsageError("no seed ids given")
    v = spec(g, seeds)
    ranked = top_k(v, args.k, seeds)
    header = f"algorithm={spec.label} params={json.dumps(v.params, sort_keys=True)} k={args.k} seeds={args.seeds}"
    if not v.converged:
        header += f" converged=false iterations={v.iterations}"
    text = ranked.to_csv(ids=g.ext_ids, header=header)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def evaluation_config(args) -> tuple[EvalConfig, str | None]:
    base = {}
    if args.config:
        base = json.loads(Path(args.config).read_text(encoding="utf-8"))
    overrides = {
        "algorithms": args.algo,
        "n_queries": args.queries,
        "rng_seed": args.rng_seed,
        "ks": args.k,
        "deltas": args.delta,
        "delta_modes": tuple(args.delta_mode) if args.delta_mode else None,
        "metrics": args.metrics,
        "threads": args.threads,
        "corpus": args.corpus,
        "synthetic": args.synthetic,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    if args.graph:
        base["graph"] = args.graph
    graph = base.pop("graph", None)
    try:
        cfg = EvalConfig.from_dict(base)
        cfg.specs()
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None
    return cfg, graph


def cmd_evaluate(args) -> int:
    cfg, graph = evaluation_config(args)
    g = open_graph(cfg.corpus, graph, cfg.synthetic, args.format)
    report = run_evaluation(g, cfg)
    report.write(args.out)
    print(report.summary())
    for label, query, msg in report.failures:
        print(f"FAILED {label} on query {g.ext_ids[query]}: {msg}", file=sys.stderr)
    return EXIT_PARTIAL if report.failures else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        handler = {"ingest": cmd_ingest, "recommend": cmd_recommend, "evaluate": cmd_evaluate}[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"citerec: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusError, FileNotFoundError, KeyError, json.JSONDecodeError, ValueError) as exc:
        print(f"citerec: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
