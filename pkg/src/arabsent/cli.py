"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 resource-load failure,
3 strict-mode data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from . import lexicon as lx
from .config import ConfigError, ResourceError
from .corpus import RecordError, balanced_split, dedup, read_annotated, read_records, write_jsonl
from .normalizer import EMPTY_VOCABULARY, Vocabulary, load_wordlist, normalize
from .translit import (
    DecoderParams,
    PhraseTableError,
    default_exclusions,
    default_phrase_table,
    load_exclusions,
    load_phrase_table,
    transliterate_text,
)

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_DATA = 0, 1, 2, 3

log = logging.getLogger("arabsent")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _vocab(args) -> Vocabulary:
    vocab = EMPTY_VOCABULARY
    if getattr(args, "wordlist", None):
        vocab = vocab.union(load_wordlist(args.wordlist))
    if getattr(args, "lexicon", None):
        vocab = vocab.union(Vocabulary.from_words(lx.load_lexicon(args.lexicon).surfaces()))
    return vocab


def cmd_normalize(args) -> int:
    vocab = _vocab(args)
    for line in sys.stdin:
        sys.stdout.write(normalize(line.rstrip("\n"), vocab) + "\n")
    return EXIT_OK


def cmd_translit(args) -> int:
    table = load_phrase_table(args.table) if args.table else default_phrase_table()
    exclusion = load_exclusions(args.exclude) if args.exclude else default_exclusions()
    params = DecoderParams(beam_width=args.beam_width, max_phrase_len=args.max_phrase_len)
    for line in sys.stdin:
        out = transliterate_text(line.rstrip("\n"), table, exclusion, params, strict=args.strict)
        sys.stdout.write(out + "\n")
    return EXIT_OK


def _open_out(path: str | None):
    return open(path, "w", encoding="utf-8") if path and path != "-" else sys.stdout


def cmd_dedup(args) -> int:
    from .corpus import iter_records

    src = open(args.input, encoding="utf-8") if args.input != "-" else sys.stdin
    with src:
        records = iter_records(src, strict=args.strict)
        out = _open_out(args.output)
        n = write_jsonl((r.to_dict() for r in dedup(records, _vocab(args))), fh=out)
        if out is not sys.stdout:
            out.close()
    log.info("kept %d records", n)
    return EXIT_OK


def cmd_sample(args) -> int:
    annotated = read_annotated(args.input, strict=args.strict)
    try:
        test, dev = balanced_split(annotated, args.n, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    out = _open_out(args.output)
    write_jsonl((a.to_dict() for a in test), fh=out)
    if out is not sys.stdout:
        out.close()
    if args.dev_output:
        write_jsonl((a.to_dict() for a in dev), args.dev_output)
    return EXIT_OK


def cmd_classify(args) -> int:
    from .pipeline import StrictModeError, run_pipeline

    try:
        manifest = run_pipeline(args.config, args.input, args.output, workers=args.workers,
                                strict=args.strict, manifest_path=args.manifest)
    except StrictModeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    c = manifest.counts
    print(f"{c.input} records, {c.after_dedup} after dedup, {c.relevant} relevant "
          f"({c.positive} positive, {c.negative} negative, {c.neutral} neutral); "
          f"{manifest.throughput_docs_per_s} docs/s", file=sys.stderr)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    from .evaluate import EvaluationError, eval_report

    try:
        report = eval_report(args.gold, args.pred)
    except (EvaluationError, RecordError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(report.render())
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            report.write_csv(fh)
    return EXIT_OK


def cmd_aggregate(args) -> int:
    from .profiles import aggregate, extract_profile, load_pattern_rules

    rules = load_pattern_rules(args.patterns)
    profiles = {rec.id: extract_profile(rec, rules) for rec in read_records(args.docs)}
    with open(args.results, encoding="utf-8") as fh:
        results = [json.loads(line) for line in fh if line.strip()]
    report = aggregate(results, profiles, args.by)
    out = _open_out(args.output)
    report.write_csv(out)
    if out is not sys.stdout:
        out.close()
    return EXIT_OK


def cmd_lexicon_check(args) -> int:
    lex = lx.load_lexicon(args.files)
    counts = lex.counts()
    for cat in lx.CATEGORIES:
        print(f"{cat}\t{counts.get(cat, 0)}")
    print(f"total\t{len(lex.entries)}")
    return EXIT_OK


def cmd_synth(args) -> int:
    from .synth import write_synthetic

    write_synthetic(args.output, args.n, args.config, seed=args.seed, with_noise=not args.clean)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    from .pipeline import default_workers

    p = _Parser(prog="arabsent", description="Rule-based Arabic dialect sentiment extraction.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("normalize", help="normalize text lines from stdin")
    s.add_argument("--wordlist", help="known word forms guiding elongation collapse")
    s.add_argument("--lexicon", nargs="+", help="lexicon files whose surfaces join the vocabulary")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("translit", help="transliterate arabizi tokens in stdin lines")
    s.add_argument("--table", help="phrase table TSV (default: bundled)")
    s.add_argument("--exclude", help="exclusion word list (default: bundled)")
    s.add_argument("--beam-width", type=int, default=16)
    s.add_argument("--max-phrase-len", type=int, default=3)
    s.add_argument("--strict", action="store_true", help="fail on untransliterable tokens")
    s.set_defaults(func=cmd_translit)

    s = sub.add_parser("dedup", help="drop retweets and duplicate posts")
    s.add_argument("--input", default="-")
    s.add_argument("--output", default="-")
    s.add_argument("--wordlist")
    s.add_argument("--lexicon", nargs="+")
    s.add_argument("--strict", action="store_true")
    s.set_defaults(func=cmd_dedup)

    s = sub.add_parser("sample", help="balanced per-class test sample from an annotated file")
    s.add_argument("--input", required=True)
    s.add_argument("--n", type=int, default=400, help="records per class")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output", default="-")
    s.add_argument("--dev-output", help="write the remaining records here")
    s.add_argument("--strict", action="store_true")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("classify", help="classify a JSONL corpus")
    s.add_argument("--config", required=True, help="use-case config JSON (or bundled:NAME.json)")
    s.add_argument("--input", required=True)
    s.add_argument("--output", required=True)
    s.add_argument("--workers", type=int, default=default_workers())
    s.add_argument("--manifest", help="manifest path (default: OUTPUT.manifest.json)")
    s.add_argument("--strict", action="store_true", help="abort on the first malformed record")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("evaluate", help="precision/recall/F per class")
    s.add_argument("--gold", required=True)
    s.add_argument("--pred", required=True)
    s.add_argument("--output", help="CSV output path")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("aggregate", help="sentiment counts per author segment")
    s.add_argument("--results", required=True)
    s.add_argument("--docs", required=True)
    s.add_argument("--by", required=True, choices=["gender", "country", "gender_x_polarity", "country_x_polarity"])
    s.add_argument("--output", default="-")
    s.add_argument("--patterns", help="profile pattern rules TSV (default: bundled)")
    s.set_defaults(func=cmd_aggregate)

    s = sub.add_parser("lexicon", help="lexicon utilities")
    lsub = s.add_subparsers(dest="lexicon_command", required=True, parser_class=_Parser)
    c = lsub.add_parser("check", help="validate lexicon files and print category counts")
    c.add_argument("files", nargs="+")
    c.set_defaults(func=cmd_lexicon_check)

    s = sub.add_parser("synth", help="write a synthetic corpus")
    s.add_argument("--output", required=True)
    s.add_argument("--n", type=int, default=10000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--config", default="bundled:egyptian_teleco.json")
    s.add_argument("--clean", action="store_true", help="no retweets or duplicates")
    s.set_defaults(func=cmd_synth)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if hasattr(args, "workers") and args.workers < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args)
    except (ResourceError, ConfigError, lx.LexiconError, PhraseTableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except RecordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
