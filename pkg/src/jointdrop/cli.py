"""Command-line pipeline: extract, augment, perturb, eval-consistency,
eval-bleu, stats.

Every run resolves its configuration as CLI flag > config file > built-in
default, emits a manifest next to its primary output (tool version, resolved
config, input digests, seed, timestamp), and is a pure function of inputs,
flags and seed: re-running the manifest's config reproduces outputs
byte-identically. Exit codes: 0 ok, 1 I/O, 2 validation/config.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .baselines import BaselineConfig, augment_corpus_baseline
from .corpus_io import (
    EMPTY_ALIGNMENT,
    AlignedPair,
    load_aligned_corpus,
    load_corpus,
    read_alignment_file,
    read_vocabulary,
    write_corpus,
    write_lines,
)
from .errors import ConfigError, LengthMismatch, ValidationError
from .evaluation import (
    consistency,
    consistency_score,
    corpus_bleu,
    format_verdict,
    generate_perturbations,
    read_perturbation_cases,
)
from .joint_dropout import (
    ADJACENCY_POLICIES,
    MODES,
    JdConfig,
    format_record,
    induce_corpus,
    read_annotations,
)
from .phrases import build_phrase_table

METHOD_NAMES = ("jd", "token-drop", "switchout", "zeroout")
_BASELINE_OF = {"token-drop": "token_drop", "switchout": "switch_out", "zeroout": "zero_out"}

EXTRACT_DEFAULTS = {
    "src": None,
    "tgt": None,
    "align": None,
    "max_src_len": 7,
    "max_tgt_len": 7,
    "out": None,
    "stats": None,
}

AUGMENT_DEFAULTS = {
    "method": "jd",
    "src": None,
    "tgt": None,
    "align": None,
    "out_src": None,
    "out_tgt": None,
    "rate": 0.3,
    "max_vars": 10,
    "mode": "joint",
    "adjacency": "either_side",
    "min_phrase_len": 1,
    "max_phrase_len": None,
    "var_src_format": "<X_{i}>",
    "var_tgt_format": "<Y_{i}>",
    "drop_token": "<dropped>",
    "zero_token": "<zero>",
    "src_vocab": None,
    "tgt_vocab": None,
    "span_filter": None,
    "labels": None,
    "log": None,
    "seed": None,
    "threads": None,
}

PERTURB_DEFAULTS = {"cases": None, "out": None}

EVAL_CONSISTENCY_DEFAULTS = {
    "orig": None,
    "perturbed": None,
    "allow_identical": False,
    "strict": False,
    "out": None,
    "report": None,
}

EVAL_BLEU_DEFAULTS = {
    "hyp": None,
    "ref": None,
    "max_order": 4,
    "smoothing": "exp",
    "report": None,
}

STATS_DEFAULTS = {"src": None, "tgt": None, "align": None, "out": None}


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(65536), b""):
            h.update(block)
    return h.hexdigest()


def _write_json(path: str, payload: dict) -> None:
    write_lines(path, [json.dumps(payload, sort_keys=True, ensure_ascii=False)])


def _write_manifest(out_path: str, subcommand: str, resolved: dict, inputs: list) -> None:
    manifest = {
        "tool": "jointdrop",
        "version": __version__,
        "subcommand": subcommand,
        "config": resolved,
        "inputs": {p: _sha256(p) for p in inputs if p},
        "seed": resolved.get("seed"),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    _write_json(out_path + ".manifest.json", manifest)


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    """CLI flag > config file > built-in default."""
    resolved = dict(defaults)
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as f:
            loaded = json.load(f)
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a flat JSON object")
        for key, value in loaded.items():
            norm = key.replace("-", "_")
            if norm not in defaults:
                raise ConfigError(f"unknown config key {key!r}")
            resolved[norm] = value
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            resolved[key] = value
    return resolved


def _resolve_seed(resolved: dict) -> int:
    if resolved.get("seed") is None:
        resolved["seed"] = int(os.environ.get("JOINTDROP_SEED", "0"))
    return int(resolved["seed"])


def _require(resolved: dict, *keys: str) -> None:
    for key in keys:
        if resolved.get(key) is None:
            flag = "--" + key.replace("_", "-")
            raise ConfigError(f"{flag} is required (flag or config file)")


def _read_token_lines(path: str) -> list[list[str]]:
    with open(path, encoding="utf-8") as f:
        return [line.rstrip("\n").split() for line in f]


def cmd_extract(args) -> int:
    resolved = _resolve(args, EXTRACT_DEFAULTS)
    _require(resolved, "src", "tgt", "align", "out")
    corpus = load_aligned_corpus(resolved["src"], resolved["tgt"], resolved["align"])
    table = build_phrase_table(corpus, resolved["max_src_len"], resolved["max_tgt_len"])
    write_lines(resolved["out"], table.to_lines())
    occurrences = table.total_occurrences()
    n = len(corpus)
    stats = {
        "pairs": n,
        "phrases": occurrences,
        "distinct_entries": len(table),
        "mean_phrases_per_pair": occurrences / n if n else 0.0,
    }
    stats_path = resolved["stats"] or resolved["out"] + ".stats.json"
    _write_json(stats_path, stats)
    _write_manifest(
        resolved["out"], "extract", resolved,
        [resolved["src"], resolved["tgt"], resolved["align"]],
    )
    print(f"extracted {occurrences} phrase pairs ({len(table)} distinct) from {n} pairs")
    return 0


def _jd_config(resolved: dict) -> JdConfig:
    span_filter = None
    if resolved["span_filter"]:
        with open(resolved["span_filter"], encoding="utf-8") as f:
            span_filter = read_annotations(f)
    labels = resolved["labels"]
    if isinstance(labels, str):
        labels = frozenset(x.strip() for x in labels.split(",") if x.strip())
    elif labels is not None:
        labels = frozenset(labels)
    return JdConfig(
        rate=float(resolved["rate"]),
        max_vars=int(resolved["max_vars"]),
        mode=resolved["mode"],
        adjacency_policy=resolved["adjacency"],
        min_phrase_len=int(resolved["min_phrase_len"]),
        max_phrase_len=resolved["max_phrase_len"],
        var_src_format=resolved["var_src_format"],
        var_tgt_format=resolved["var_tgt_format"],
        seed=resolved["seed"],
        span_filter=span_filter,
        span_labels=labels,
    )


def _log_header(resolved: dict) -> list[str]:
    lines = [
        f"# substitution log: method={resolved['method']} seed={resolved['seed']} "
        f"rate={resolved['rate']}",
        "# line format: pair_id<TAB>k<TAB>i:src_start-src_end/tgt_start-tgt_end;...",
    ]
    if resolved["method"] == "zeroout":
        lines.append(
            f"# marker contract: the trainer must map {resolved['zero_token']!r} to an "
            "all-zero, non-trainable embedding; this tool only marks the tokens"
        )
    return lines


def cmd_augment(args) -> int:
    resolved = _resolve(args, AUGMENT_DEFAULTS)
    _require(resolved, "src", "tgt", "out_src", "out_tgt")
    _resolve_seed(resolved)
    if resolved["threads"] is None:
        resolved["threads"] = os.cpu_count() or 1
    threads = int(resolved["threads"])
    method = resolved["method"]
    if method not in METHOD_NAMES:
        raise ConfigError(f"--method must be one of {METHOD_NAMES}, got {method!r}")

    inputs = [resolved["src"], resolved["tgt"]]
    log_lines: list[str] = []
    if method == "jd":
        if resolved["mode"] == "joint" and not resolved["align"]:
            raise ConfigError("--align is required for jd in joint mode")
        if resolved["align"]:
            corpus = load_aligned_corpus(resolved["src"], resolved["tgt"], resolved["align"])
            inputs.append(resolved["align"])
        else:
            corpus = [
                AlignedPair(p, EMPTY_ALIGNMENT)
                for p in load_corpus(resolved["src"], resolved["tgt"])
            ]
        if resolved["span_filter"]:
            inputs.append(resolved["span_filter"])
        cfg = _jd_config(resolved)
        induced = induce_corpus(corpus, cfg, threads)
        out = [ap.pair for ap in corpus]
        out.extend(vp.pair for vp in induced)
        log_lines = [format_record(vp.origin_id, vp.record) for vp in induced]
    else:
        if method == "switchout":
            if not (resolved["src_vocab"] and resolved["tgt_vocab"]):
                raise ConfigError("switchout needs --src-vocab and --tgt-vocab")
            src_vocab = read_vocabulary(resolved["src_vocab"])
            tgt_vocab = read_vocabulary(resolved["tgt_vocab"])
            inputs += [resolved["src_vocab"], resolved["tgt_vocab"]]
        else:
            src_vocab = tgt_vocab = None
        bcfg = BaselineConfig(
            method=_BASELINE_OF[method],
            rate=float(resolved["rate"]),
            seed=resolved["seed"],
            drop_token=resolved["drop_token"],
            zero_token=resolved["zero_token"],
            src_vocab=src_vocab,
            tgt_vocab=tgt_vocab,
        )
        originals = load_corpus(resolved["src"], resolved["tgt"])
        out = augment_corpus_baseline(originals, bcfg, threads)
        n = len(originals)
        for orig, mod in zip(originals, out[n:]):
            changed = sum(a != b for a, b in zip(orig.src, mod.src))
            changed += sum(a != b for a, b in zip(orig.tgt, mod.tgt))
            log_lines.append(f"{orig.id}\t{changed}\t")

    write_corpus(out, resolved["out_src"], resolved["out_tgt"])
    if resolved["log"]:
        write_lines(resolved["log"], _log_header(resolved) + log_lines)
    _write_manifest(resolved["out_src"], "augment", resolved, inputs)
    print(f"augmented {len(out) // 2} pairs -> {len(out)} ({method}, seed {resolved['seed']})")
    return 0


def cmd_perturb(args) -> int:
    resolved = _resolve(args, PERTURB_DEFAULTS)
    _require(resolved, "cases", "out")
    with open(resolved["cases"], encoding="utf-8") as f:
        cases = read_perturbation_cases(f)
    rows = generate_perturbations(cases)
    write_lines(
        resolved["out"],
        [f"{cid}\t{ridx}\t{' '.join(sentence)}" for cid, ridx, sentence in rows],
    )
    _write_manifest(resolved["out"], "perturb", resolved, [resolved["cases"]])
    print(f"perturbed {len(cases)} cases -> {len(rows)} sentences")
    return 0


def cmd_eval_consistency(args) -> int:
    resolved = _resolve(args, EVAL_CONSISTENCY_DEFAULTS)
    _require(resolved, "orig", "perturbed")
    orig = _read_token_lines(resolved["orig"])
    pert = _read_token_lines(resolved["perturbed"])
    if len(orig) != len(pert):
        raise LengthMismatch(len(orig), len(pert))
    verdicts = [
        consistency(
            o,
            p,
            allow_identical=bool(resolved["allow_identical"]),
            strict_substitution=bool(resolved["strict"]),
            case_id=i,
        )
        for i, (o, p) in enumerate(zip(orig, pert))
    ]
    score = consistency_score(verdicts)
    print(f"consistency {score}")
    if resolved["out"]:
        write_lines(resolved["out"], [format_verdict(v) for v in verdicts])
    if resolved["report"]:
        _write_json(
            resolved["report"],
            {"metric": "consistency", "value": score, "count": len(verdicts)},
        )
    primary = resolved["report"] or resolved["out"]
    if primary:
        _write_manifest(
            primary, "eval-consistency", resolved,
            [resolved["orig"], resolved["perturbed"]],
        )
    return 0


def cmd_eval_bleu(args) -> int:
    resolved = _resolve(args, EVAL_BLEU_DEFAULTS)
    _require(resolved, "hyp", "ref")
    hyp = _read_token_lines(resolved["hyp"])
    ref = _read_token_lines(resolved["ref"])
    score = corpus_bleu(
        hyp, ref, max_order=int(resolved["max_order"]), smoothing=resolved["smoothing"]
    )
    print(f"bleu {score:.4f}")
    if resolved["report"]:
        _write_json(
            resolved["report"], {"metric": "bleu", "value": score, "count": len(hyp)}
        )
        _write_manifest(
            resolved["report"], "eval-bleu", resolved, [resolved["hyp"], resolved["ref"]]
        )
    return 0


def cmd_stats(args) -> int:
    resolved = _resolve(args, STATS_DEFAULTS)
    _require(resolved, "src", "tgt")
    corpus = load_corpus(resolved["src"], resolved["tgt"])
    n = len(corpus)
    src_tokens = sum(len(p.src) for p in corpus)
    tgt_tokens = sum(len(p.tgt) for p in corpus)
    payload = {
        "pairs": n,
        "src_tokens": src_tokens,
        "tgt_tokens": tgt_tokens,
        "src_vocab": len({t for p in corpus for t in p.src}),
        "tgt_vocab": len({t for p in corpus for t in p.tgt}),
        "mean_src_len": src_tokens / n if n else 0.0,
        "mean_tgt_len": tgt_tokens / n if n else 0.0,
    }
    inputs = [resolved["src"], resolved["tgt"]]
    if resolved["align"]:
        with open(resolved["align"], encoding="utf-8") as f:
            alignments = read_alignment_file(f)
        payload["alignment_links"] = sum(len(a) for a in alignments)
        inputs.append(resolved["align"])
    print(json.dumps(payload, sort_keys=True))
    if resolved["out"]:
        _write_json(resolved["out"], payload)
        _write_manifest(resolved["out"], "stats", resolved, inputs)
    return 0


def _add_config_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--config",
        help="flat JSON object mirroring the flag names; flags given on the "
        "command line win over it",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jointdrop",
        description="Phrase-pair variable augmentation and evaluation harness "
        "for parallel corpora",
    )
    parser.add_argument("--version", action="version", version=f"jointdrop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="build a phrase table from an aligned corpus")
    p.add_argument("--src", help="tokenized source corpus, one sentence per line")
    p.add_argument("--tgt", help="tokenized target corpus")
    p.add_argument("--align", help="word alignment file, `i-j` items per line")
    p.add_argument("--max-src-len", type=int, help="source phrase length cap (default: 7)")
    p.add_argument("--max-tgt-len", type=int, help="target phrase length cap (default: 7)")
    p.add_argument("--out", help="phrase table output path")
    p.add_argument("--stats", help="stats JSON path (default: <out>.stats.json)")
    _add_config_flag(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("augment", help="write the doubled, augmented corpus")
    p.add_argument("--method", choices=METHOD_NAMES, help="augmenter (default: jd)")
    p.add_argument("--src", help="tokenized source corpus")
    p.add_argument("--tgt", help="tokenized target corpus")
    p.add_argument("--align", help="alignment file (required for jd joint mode)")
    p.add_argument("--out-src", help="augmented source output")
    p.add_argument("--out-tgt", help="augmented target output")
    p.add_argument("--rate", type=float, help="dropout rate (default: 0.3)")
    p.add_argument("--max-vars", type=int, help="max variables per sentence (default: 10)")
    p.add_argument("--mode", choices=MODES, help="jd candidate mode (default: joint)")
    p.add_argument(
        "--adjacency", choices=ADJACENCY_POLICIES,
        help="which adjacency blocks two substitutions (default: either_side)",
    )
    p.add_argument("--min-phrase-len", type=int, help="min candidate span length (default: 1)")
    p.add_argument("--max-phrase-len", type=int, help="max candidate span length (default: unbounded)")
    p.add_argument("--var-src-format", help="source variable token template (default: <X_{i}>)")
    p.add_argument("--var-tgt-format", help="target variable token template (default: <Y_{i}>)")
    p.add_argument("--drop-token", help="token-drop marker (default: <dropped>)")
    p.add_argument("--zero-token", help="zero-out marker (default: <zero>)")
    p.add_argument("--src-vocab", help="source vocabulary file for switchout")
    p.add_argument("--tgt-vocab", help="target vocabulary file for switchout")
    p.add_argument("--span-filter", help="span annotation TSV restricting jd source spans")
    p.add_argument("--labels", help="comma-separated span labels to allow (default: all)")
    p.add_argument("--log", help="substitution log output path")
    p.add_argument(
        "--seed", type=int,
        help="RNG seed; falls back to $JOINTDROP_SEED, then 0",
    )
    p.add_argument("--threads", type=int, help="worker threads (default: available CPUs)")
    _add_config_flag(p)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("perturb", help="apply annotated subject-noun replacements")
    p.add_argument("--cases", help="perturbation case TSV")
    p.add_argument("--out", help="perturbed sentence TSV output")
    _add_config_flag(p)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("eval-consistency", help="one-word-difference consistency score")
    p.add_argument("--orig", help="translations of the original sentences")
    p.add_argument("--perturbed", help="translations of the perturbed sentences")
    p.add_argument(
        "--allow-identical", action="store_true", default=None,
        help="also count identical translations as consistent (default: off)",
    )
    p.add_argument(
        "--strict", action="store_true", default=None,
        help="require the single difference to be an in-place substitution (default: off)",
    )
    p.add_argument("--out", help="verdict TSV output")
    p.add_argument("--report", help="report JSON output")
    _add_config_flag(p)
    p.set_defaults(func=cmd_eval_consistency)

    p = sub.add_parser("eval-bleu", help="smoothed corpus BLEU on tokenized text")
    p.add_argument("--hyp", help="hypothesis corpus")
    p.add_argument("--ref", help="reference corpus")
    p.add_argument("--max-order", type=int, help="largest n-gram order (default: 4)")
    p.add_argument(
        "--smoothing", choices=("exp", "none"),
        help="zero-count smoothing (default: exp)",
    )
    p.add_argument("--report", help="report JSON output")
    _add_config_flag(p)
    p.set_defaults(func=cmd_eval_bleu)

    p = sub.add_parser("stats", help="corpus statistics as JSON")
    p.add_argument("--src", help="tokenized source corpus")
    p.add_argument("--tgt", help="tokenized target corpus")
    p.add_argument("--align", help="optional alignment file")
    p.add_argument("--out", help="stats JSON output (also printed)")
    _add_config_flag(p)
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"jointdrop: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"jointdrop: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
