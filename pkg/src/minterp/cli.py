"""Command-line harness for dataset generation, fitting, and experiment suites.

Config files are JSON objects whose keys are ExperimentConfig fields; the
--seed / --trials / --out flags override the file.  Every output embeds
the resolved config and the package version, and identical (config, seed)
pairs produce byte-identical files regardless of --threads.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from ._version import VERSION
from .errors import MinterpError
from .experiments import (
    ExperimentConfig,
    run_bound_audit,
    run_scale_study,
    run_verify_lemma,
    write_study,
    VERIFY_SELECTORS,
)
from .random_features import FeatureFamily, fit_random_features
from .resnet import embed_two_layer, interpolate_resnet, resnet_eval_batch, weighted_path_norm
from .sampling import make_teacher, rescale_teacher, sample_dataset, teacher_eval_batch
from .sampling import barron_norm_upper
from .seeding import derive_seed, rng_from
from .serialize import (
    dataset_from_dict,
    dataset_to_dict,
    detect_model_kind,
    load_json,
    resnet_from_dict,
    resnet_to_dict,
    rf_model_from_dict,
    rf_model_to_dict,
    save_json,
    teacher_from_dict,
    teacher_to_dict,
    two_layer_from_dict,
    two_layer_to_dict,
    write_csv,
    write_json_report,
)
from .two_layer import approximate_teacher, interpolate_two_layer, path_norm, two_layer_eval_batch


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="JSON config file")
    parser.add_argument("--seed", type=int, default=None, help="master seed override")
    parser.add_argument("--out", default=None, help="output directory (default .)")
    parser.add_argument("--trials", type=int, default=None, help="trial count override")
    parser.add_argument("--threads", type=int, default=1, help="worker threads")


def _load_config(args, **forced) -> ExperimentConfig:
    obj = dict(load_json(args.config)) if args.config else {}
    if args.seed is not None:
        obj["seed"] = args.seed
    if args.trials is not None:
        obj["trials"] = args.trials
    if args.out is not None:
        obj["out"] = args.out
    obj.update(forced)
    return ExperimentConfig.from_dict(obj)


def _out_dir(config: ExperimentConfig) -> Path:
    out = Path(config.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_gen_teacher(args) -> int:
    config = _load_config(args)
    teacher = rescale_teacher(
        make_teacher(config.d_grid[0], config.n_atoms, 1.0, derive_seed(config.seed, 0))
    )
    path = _out_dir(config) / "teacher.json"
    save_json(teacher_to_dict(teacher), path)
    print(f"wrote {path}")
    return 0


def _cmd_gen_data(args) -> int:
    config = _load_config(args)
    teacher = teacher_from_dict(load_json(args.teacher))
    data = sample_dataset(teacher, config.n_grid[0], derive_seed(config.seed, 1))
    path = _out_dir(config) / "dataset.json"
    save_json(dataset_to_dict(data), path)
    print(f"wrote {path}")
    return 0


def _cmd_fit(args) -> int:
    config = _load_config(args)
    data = dataset_from_dict(load_json(args.data))
    out = _out_dir(config)
    if args.model != "rf" and args.teacher is None:
        raise ValueError(f"fit {args.model} needs a teacher file")
    if args.model == "rf":
        family = FeatureFamily(tag=config.family, gamma=config.gamma)
        fit = fit_random_features(
            data.X, data.y, family, config.m2, derive_seed(config.seed, 2),
            rcond=config.rcond,
        )
        model_path = out / "model_rf.json"
        save_json(rf_model_to_dict(fit.model), model_path)
        report = {
            "kind": "rf", "m": config.m2, "coeff_norm": fit.coeff_norm,
            "norm_radius": fit.norm_radius, "interp_error": fit.interp_error,
        }
    elif args.model == "two-layer":
        teacher = teacher_from_dict(load_json(args.teacher))
        fit = interpolate_two_layer(
            data, teacher, config.m1, config.m2, derive_seed(config.seed, 2),
            lambda_target=config.lambda_target,
            max_resamples=config.max_resamples,
            n_retry_draws=config.n_retry_draws,
            rcond=config.rcond,
            lambda_quadrature=config.quadrature,
        )
        model_path = out / "model_two_layer.json"
        save_json(two_layer_to_dict(fit.net), model_path)
        report = {
            "kind": "two-layer", "m1": fit.m1, "m2": fit.m2,
            "path_norm": fit.path_norm, "teacher_norm_upper": fit.teacher_norm_upper,
            "norm_ratio": fit.norm_ratio, "interp_error": fit.interp_error,
            "lambda_target": fit.lambda_target, "lambda_emp": fit.lambda_emp,
            "resamples_used": fit.resamples_used,
        }
    else:
        teacher = teacher_from_dict(load_json(args.teacher))
        part1 = approximate_teacher(
            teacher, config.m1, data.X, derive_seed(config.seed, 3),
            n_retry_draws=config.n_retry_draws,
        )
        teacher_net = embed_two_layer(part1.net)
        m2 = min(config.m2, config.L_cap - teacher_net.L)
        fit = interpolate_resnet(
            data, teacher_net, teacher_net.L, m2, derive_seed(config.seed, 2),
            lambda_target=config.lambda_target,
            max_resamples=config.max_resamples,
            rcond=config.rcond,
            lambda_quadrature=config.quadrature,
        )
        model_path = out / "model_resnet.json"
        save_json(resnet_to_dict(fit.net), model_path)
        report = {
            "kind": "resnet", "L": fit.net.L, "D": fit.net.D, "m": fit.net.m,
            "weighted_path_norm": fit.weighted_norm,
            "surrogate_norm": fit.surrogate_norm, "embedded_norm": fit.embedded_norm,
            "interp_error": fit.interp_error, "lambda_target": fit.lambda_target,
            "lambda_emp": fit.lambda_emp, "resamples_used": fit.resamples_used,
            "certificate": fit.certificate,
        }
    report_path = out / "fit_report.json"
    write_json_report(
        report_path, {"version": VERSION, "config": config.echo(), "report": report}
    )
    print(f"wrote {model_path}")
    print(f"wrote {report_path}")
    print(f"fit {args.model}: interp_error={report['interp_error']!r}")
    return 0


def _print_study(paths, line: str) -> None:
    for path in paths:
        print(f"wrote {path}")
    print(line)


def _cmd_verify(args) -> int:
    config = _load_config(args, kind="verify-lemma", lemma=args.lemma)
    result = run_verify_lemma(config, threads=args.threads)
    paths = write_study(result, _out_dir(config))
    _print_study(
        paths,
        f"verify {args.lemma}: pass fraction {result.pass_fraction!r} "
        f"over {len(result.rows)} rows ({result.failures} failures)",
    )
    return 0


def _cmd_scale_study(args) -> int:
    config = _load_config(args, kind="scale-study")
    result = run_scale_study(config, threads=args.threads)
    paths = write_study(result, _out_dir(config))
    slope = result.summary.get("slope")
    note = f"slope {slope!r}" if slope is not None else result.summary.get("slope_flag", "no slope")
    _print_study(paths, f"scale-study: {note} over {len(result.rows)} rows "
                        f"({result.failures} failures)")
    return 0


def _cmd_bound_audit(args) -> int:
    config = _load_config(args, kind="bound-audit")
    result = run_bound_audit(config, threads=args.threads)
    paths = write_study(result, _out_dir(config))
    _print_study(
        paths,
        f"bound-audit: bound pass fraction {result.summary.get('bound_pass_fraction')!r} "
        f"over {len(result.rows)} rows ({result.failures} failures)",
    )
    return 0


def _cmd_norms(args) -> int:
    config = _load_config(args)
    obj = load_json(args.model_file)
    kind = detect_model_kind(obj)
    net_id = Path(args.model_file).stem

    def checksum(eval_batch, d: int) -> float:
        X = rng_from(derive_seed(config.seed, 0)).uniform(-1.0, 1.0, size=(d, 128))
        return float(np.sum(eval_batch(X)))

    if kind == "resnet":
        net = resnet_from_dict(obj)
        columns = ["net_id", "L", "D", "m", "weighted_path_norm", "eval_checksum"]
        row = {
            "net_id": net_id, "L": net.L, "D": net.D, "m": net.m,
            "weighted_path_norm": weighted_path_norm(net),
            "eval_checksum": checksum(lambda X: resnet_eval_batch(net, X), net.d),
        }
        norm_line = f"weighted_path_norm={row['weighted_path_norm']!r}"
    elif kind == "two-layer":
        net = two_layer_from_dict(obj)
        columns = ["net_id", "m", "d", "path_norm", "eval_checksum"]
        row = {
            "net_id": net_id, "m": net.m, "d": net.d,
            "path_norm": path_norm(net),
            "eval_checksum": checksum(lambda X: two_layer_eval_batch(net, X), net.d),
        }
        norm_line = f"path_norm={row['path_norm']!r}"
    elif kind == "rf":
        model = rf_model_from_dict(obj)
        columns = ["net_id", "m", "d", "norm_radius", "eval_checksum"]
        row = {
            "net_id": net_id, "m": model.m, "d": model.d,
            "norm_radius": model.norm_radius,
            "eval_checksum": checksum(model.predict, model.d),
        }
        norm_line = f"norm_radius={row['norm_radius']!r}"
    elif kind == "teacher":
        teacher = teacher_from_dict(obj)
        columns = ["net_id", "n_atoms", "d", "barron_norm_upper", "eval_checksum"]
        row = {
            "net_id": net_id, "n_atoms": teacher.n_atoms, "d": teacher.d,
            "barron_norm_upper": barron_norm_upper(teacher),
            "eval_checksum": checksum(lambda X: teacher_eval_batch(teacher, X), teacher.d),
        }
        norm_line = f"barron_norm_upper={row['barron_norm_upper']!r}"
    else:
        raise ValueError(f"norms expects a model file, got a {kind} file")

    path = _out_dir(config) / "norms.csv"
    write_csv(path, columns, [row], config.echo(), VERSION)
    print(f"wrote {path}")
    print(f"norms {net_id}: {norm_line} eval_checksum={row['eval_checksum']!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minterp",
        description="Minimum-norm interpolation constructions and their verification suites.",
    )
    parser.add_argument("--version", action="version", version=f"minterp {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-teacher", help="sample a finite-atom teacher function")
    _add_common(p)
    p.set_defaults(func=_cmd_gen_teacher)

    p = sub.add_parser("gen-data", help="sample a dataset from a teacher file")
    p.add_argument("teacher", help="teacher JSON file")
    _add_common(p)
    p.set_defaults(func=_cmd_gen_data)

    p = sub.add_parser("fit", help="fit an interpolating model to a dataset")
    p.add_argument("model", choices=["rf", "two-layer", "resnet"])
    p.add_argument("data", help="dataset JSON file")
    p.add_argument("teacher", nargs="?", default=None,
                   help="teacher JSON file (two-layer and resnet)")
    _add_common(p)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("verify", help="run one lemma verification suite")
    p.add_argument("--lemma", required=True, choices=list(VERIFY_SELECTORS))
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("scale-study", help="risk-vs-n study over the n grid")
    _add_common(p)
    p.set_defaults(func=_cmd_scale_study)

    p = sub.add_parser("bound-audit", help="scale study plus deviation-bound audit")
    _add_common(p)
    p.set_defaults(func=_cmd_bound_audit)

    p = sub.add_parser("norms", help="norm audit of a saved model file")
    p.add_argument("model_file", help="model JSON file")
    _add_common(p)
    p.set_defaults(func=_cmd_norms)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MinterpError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
