"""Command-line entry points: extract, train, evaluate, predict, report.

Exit codes: 0 on success, 1 on usage errors (unknown flags, bad subcommand),
2 on data errors (missing files, invariant violations, width mismatches).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bundle import ModelBundle, fused_row_for_bundle, train_bundle
from .config import PipelineConfig
from .errors import InterviewKitError
from .experiment import run_experiment_matrix, write_results
from .extract import extract_features, extract_or_load, write_cache
from .manifest import LABEL_NAMES, load_manifest
from .report import render_report, write_report

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the CLI contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _load_config(args) -> PipelineConfig:
    config = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
    if getattr(args, "seed", None) is not None:
        config.data["seed"] = args.seed
    return config


def _restrict_experiment(config: PipelineConfig, args) -> None:
    """Narrow the experiment axes from CLI flags, when given."""
    exp = config.data["experiment"]
    if getattr(args, "modalities", None):
        exp["masks"] = [sorted_mask(args.modalities)]
    if getattr(args, "selector", None):
        exp["selectors"] = [args.selector]
    if getattr(args, "model", None):
        exp["families"] = [args.model]
    if getattr(args, "label", None) and args.label != "all":
        exp["labels"] = [args.label]


def sorted_mask(spec: str) -> list[str]:
    order = ("audio", "video", "lexical")
    mods = [m.strip() for m in spec.split(",") if m.strip()]
    unknown = set(mods) - set(order)
    if unknown:
        raise InterviewKitError(f"unknown modalities: {sorted(unknown)}")
    if not mods:
        raise InterviewKitError("--modalities must name at least one modality")
    return [m for m in order if m in mods]


def _label_list(args) -> list[str]:
    if args.label == "all":
        return list(LABEL_NAMES)
    if args.label not in LABEL_NAMES:
        raise InterviewKitError(f"unknown label {args.label!r}; expected one of {', '.join(LABEL_NAMES)} or 'all'")
    return [args.label]


def cmd_extract(args) -> int:
    config = _load_config(args)
    records = load_manifest(args.manifest)
    features = extract_features(records, config)
    write_cache(features, args.out, config)
    print(f"extracted features for {len(records)} records into {args.out}")
    return EXIT_OK


def cmd_train(args) -> int:
    config = _load_config(args)
    records = load_manifest(args.manifest)
    features = extract_features(records, config)
    mask = tuple(sorted_mask(args.modalities)) if args.modalities else ("audio", "video", "lexical")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for label in _label_list(args):
        bundle = train_bundle(features, label, config, mask=mask,
                              selector_name=args.selector, family=args.model)
        bundle.save(out_dir / f"{label}.bundle.json")
        print(f"trained {args.model} bundle for {label} -> {out_dir / (label + '.bundle.json')}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    config = _load_config(args)
    _restrict_experiment(config, args)
    records = load_manifest(args.manifest)
    out_dir = Path(args.out)
    cache_dir = Path(args.cache) if args.cache else out_dir / "cache"
    features = extract_or_load(records, cache_dir, config)
    results = run_experiment_matrix(features, config)
    written = write_results(results, out_dir, config)
    for name in written:
        print(f"wrote {out_dir / name}")
    return EXIT_OK


def _load_bundles(bundle_dir: str, labels: list[str]) -> dict[str, ModelBundle]:
    bundle_path = Path(bundle_dir)
    bundles = {}
    for label in labels:
        path = bundle_path / f"{label}.bundle.json"
        if path.is_file():
            bundles[label] = ModelBundle.load(path)
    if not bundles:
        raise InterviewKitError(f"no model bundles found under {bundle_path}")
    return bundles


def _extraction_config(bundle: ModelBundle, args) -> PipelineConfig:
    # An explicit --config wins; otherwise predict with the settings the
    # bundle was trained under (a differing config is the width-mismatch path).
    if args.config:
        return PipelineConfig.from_file(args.config)
    return PipelineConfig({k: v for k, v in bundle.extraction.items()})


def _predict_all(args) -> tuple[dict[str, dict[str, int]], dict[str, ModelBundle], dict]:
    labels = _label_list(args)
    bundles = _load_bundles(args.bundle, labels)
    config = _extraction_config(next(iter(bundles.values())), args)
    records = load_manifest(args.manifest, require_labels=False)
    features = extract_features(records, config)

    predictions: dict[str, dict[str, int]] = {rid: {} for rid in features.record_ids}
    rows: dict[str, dict[str, object]] = {rid: {} for rid in features.record_ids}
    for label, bundle in bundles.items():
        fused = fused_row_for_bundle(features, bundle)
        if fused.n_cols != bundle.feature_width:
            raise InterviewKitError(
                f"feature width mismatch for {label}: bundle expects {bundle.feature_width}, "
                f"got {fused.n_cols}"
            )
        predicted = bundle.predict(fused.values)
        for i, rid in enumerate(fused.row_ids):
            predictions[rid][label] = int(predicted[i])
            rows[rid][label] = fused.values[i]
    return predictions, bundles, rows


def cmd_predict(args) -> int:
    predictions, _, _ = _predict_all(args)
    payload = {"predictions": predictions}
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_report(args) -> int:
    predictions, bundles, rows = _predict_all(args)
    if args.predictions:
        stored = json.loads(Path(args.predictions).read_text(encoding="utf-8"))
        predictions = {rid: {k: int(v) for k, v in preds.items()}
                       for rid, preds in stored["predictions"].items()}
    for rid, preds in predictions.items():
        report = render_report(rid, preds, bundles, rows[rid])
        text_path, json_path = write_report(report, args.out)
        print(f"wrote {text_path} and {json_path}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="interviewkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_help):
        p.add_argument("--manifest", required=True, help="manifest JSON file")
        p.add_argument("--config", help="config JSON file overriding defaults")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", required=True, help=out_help)

    p_extract = sub.add_parser("extract", help="extract features into a cache directory")
    common(p_extract, "cache directory for feature CSVs")
    p_extract.set_defaults(func=cmd_extract)

    p_train = sub.add_parser("train", help="train per-label model bundles")
    common(p_train, "directory for model bundles")
    p_train.add_argument("--modalities", help="comma list of audio,video,lexical (default all)")
    p_train.add_argument("--selector", choices=("kbest", "bh", "fwe"), default="fwe")
    p_train.add_argument("--model", choices=("rf", "svc", "lasso", "mlp"), default="rf")
    p_train.add_argument("--label", default="all", help="label name or 'all'")
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("evaluate", help="run the experiment matrix and write tables")
    common(p_eval, "directory for table CSVs and the run manifest")
    p_eval.add_argument("--cache", help="feature cache directory (default <out>/cache)")
    p_eval.add_argument("--modalities", help="restrict the matrix to one modality mask")
    p_eval.add_argument("--selector", choices=("kbest", "bh", "fwe"), help="restrict to one selector")
    p_eval.add_argument("--model", choices=("rf", "svc", "lasso", "mlp"), help="restrict to one family")
    p_eval.add_argument("--label", help="restrict to one label")
    p_eval.set_defaults(func=cmd_evaluate)

    p_predict = sub.add_parser("predict", help="predict classes for manifest records")
    common(p_predict, "output predictions JSON file")
    p_predict.add_argument("--bundle", required=True, help="directory holding *.bundle.json")
    p_predict.add_argument("--label", default="all", help="label name or 'all'")
    p_predict.set_defaults(func=cmd_predict)

    p_report = sub.add_parser("report", help="render candidate feedback reports")
    common(p_report, "output directory for report files")
    p_report.add_argument("--bundle", required=True, help="directory holding *.bundle.json")
    p_report.add_argument("--predictions", help="reuse a predictions JSON instead of re-predicting")
    p_report.add_argument("--label", default="all", help="label name or 'all'")
    p_report.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except InterviewKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
