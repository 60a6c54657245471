# main.py

"""mesocov command line: predictions, simulations, comparisons and checks."""
import argparse
import copy
import csv
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import yaml

from core.accumulator import McAccumulator, McEstimate
from core.errors import ConfigError, DomainError, NumericalFailure
from core.evaluator import PredictionEvaluator
from core.orchestrator import ExperimentConfig, run_experiment
from core.resource_manager import available_threads
from core.selftest import run_selftest
from core.spectral import sine_kernel
from core.theory import TermBreakdown, upsilon
from experiments import registry
from formal import ParseError, exponents, format_monomial, parse_lines
from models.presets import preset_manager
from models.schemas import load_experiment
from utils.logger import logger
from utils.rng import resolve_seed
from utils.storage import RunRecord, storage

DEFAULT_CONFIG: Dict[str, Any] = {
    "run": {"master_seed": 20240101, "threads": 0, "batch_count": 20, "tau": 0.1},
    "tolerances": {"compare_threshold": 0.15, "quad_tol": 1e-6, "boundary_epsilon": 1e-7, "zeta_max": 10.0},
    "experiment": {
        "preset": "goe",
        "N": 400,
        "n_samples": 20000,
        "window": {"E": 0.0, "omega": 0.1, "eta": 0.01, "M": 1.0},
        "observables": ["green_cov_conjugate", "green_cov_nonconjugate"],
        "z": "0.3+0.5i",
        "profile": [0.0, 0.0, 1.0],
    },
    "logging": {"level": "INFO", "file": "logs/mesocov.log", "rich_terminal": True},
    "storage": {"directory": "data", "records_file": "runs.jsonl"},
}

PREDICT_KINDS = {
    "green-conj": "green_cov_conjugate",
    "green-nonconj": "green_cov_nonconjugate",
    "green-var": "green_variance",
    "mean": "mean_stieltjes",
    "mean-sq": "mean_stieltjes_sq",
    "linstat": "linstat_cov",
    "lp": "linstat_var",
}

EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    out = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def load_config(config_path: Optional[str] = "config.yaml", required: bool = False) -> dict:
    """Built-in defaults overlaid with the YAML file."""
    path = Path(config_path) if config_path else None
    if path is None or not path.exists():
        if required:
            raise ConfigError(f"config file not found: {config_path}")
        return copy.deepcopy(DEFAULT_CONFIG)
    with open(path, 'r') as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot read {config_path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{config_path} must hold a mapping")
    return _merge(DEFAULT_CONFIG, data)


def _read_json(path: str) -> Dict[str, Any]:
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except FileNotFoundError as exc:
        raise ConfigError(f"file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def _emit(record: RunRecord) -> None:
    sys.stdout.write(record.to_json() + "\n")
    sys.stdout.flush()


# -- experiment assembly --------------------------------------------------

def _preset_name(args: argparse.Namespace, exp: Dict[str, Any]) -> str:
    named = [n for n, flag in (("goe", args.goe), ("gue", args.gue)) if flag]
    if args.preset:
        named.append(args.preset)
    if len(named) > 1:
        raise ConfigError(f"conflicting ensemble flags: {named}")
    if named:
        name = preset_manager.valid(named[0])
    elif args.beta is not None:
        name = "goe" if args.beta == 1 else "gue"
    else:
        name = preset_manager.valid(exp.get("preset"))
    beta = preset_manager.model(name, 2).beta
    if args.beta is not None and args.beta != beta:
        raise ConfigError(f"--beta {args.beta} contradicts preset '{name}' (beta={beta})")
    return name


def experiment_data(args: argparse.Namespace, config: Dict[str, Any]) -> Dict[str, Any]:
    """Experiment JSON from YAML defaults and flags; a --config file replaces it wholesale."""
    if getattr(args, "config", None):
        return _read_json(args.config)
    exp = config["experiment"]
    run = config["run"]
    N = args.N if args.N is not None else int(exp["N"])
    zeta = "zero" if args.zeta_zero else "canonical"
    ensemble = preset_manager.model(_preset_name(args, exp), N, zeta).model_dump(mode="json")
    ensemble["zeta_max"] = float(config["tolerances"]["zeta_max"])
    window = dict(exp["window"])
    for key in ("E", "omega", "eta", "M"):
        value = getattr(args, key)
        if value is not None:
            window[key] = value
    data = {
        "ensemble": ensemble,
        "window": window,
        "n_samples": int(exp["n_samples"]),
        "batch_count": int(run["batch_count"]),
        "observables": list(exp["observables"]),
        "z": exp["z"],
        "profile": list(exp["profile"]),
        "tau": float(run["tau"]),
        "quad_tol": float(config["tolerances"]["quad_tol"]),
    }
    if getattr(args, "samples", None):
        data["n_samples"] = args.samples
    if getattr(args, "batches", None):
        data["batch_count"] = args.batches
    if getattr(args, "observables", None):
        data["observables"] = [o.strip() for o in args.observables.split(";") if o.strip()]
    if getattr(args, "z", None):
        data["z"] = args.z
    if getattr(args, "profile", None):
        data["profile"] = [float(c) for c in args.profile.split(",")]
    if getattr(args, "seed", None) is not None:
        data["master_seed"] = args.seed
    return data


def predictions_for(cfg: ExperimentConfig) -> Dict[str, TermBreakdown]:
    out = {}
    for name in cfg.observables:
        observable = registry.build(name, cfg)
        out[observable.label] = observable.prediction()
    return out


def _threads(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    threads = args.threads if args.threads is not None else int(config["run"]["threads"])
    return threads if threads > 0 else available_threads()


# -- subcommands ----------------------------------------------------------

def cmd_predict(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    data = experiment_data(args, config)
    if not args.config and args.kind != "upsilon":
        data["observables"] = [PREDICT_KINDS[args.kind]]
    cfg = load_experiment(data, config["run"]["master_seed"])

    if args.kind == "upsilon" and not args.config:
        if args.u is None or args.v is None:
            raise ConfigError("predict upsilon needs --u and --v")
        reference = registry.build("green_cov_conjugate", cfg)
        spec = cfg.spec
        value = upsilon(cfg.window, args.u, args.v, reference.sums, spec.beta, spec.N, reference.zeta_profile)
        logger.term_table(f"Upsilon(u={args.u}, v={args.v})", value.terms.terms, value.error_bound)
        _emit(RunRecord("predict", {"ensemble": cfg.to_dict()["ensemble"], "window": cfg.window.to_dict(),
                                    "u": args.u, "v": args.v},
                        {"upsilon": value.to_dict()}))
        return 0

    predictions = predictions_for(cfg)
    for label, breakdown in predictions.items():
        logger.term_table(label, breakdown.terms, breakdown.error_bound)
    _emit(RunRecord("predict", cfg.to_dict(),
                    {"predictions": {label: b.to_dict() for label, b in predictions.items()}}))
    return 0


def cmd_simulate(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    cfg = load_experiment(experiment_data(args, config), config["run"]["master_seed"])
    fingerprint = cfg.fingerprint()
    out_path = Path(args.out) if args.out else storage.default_path
    if out_path.exists() and not args.resume and storage.completed_batches(fingerprint, out_path):
        logger.warning(f"{out_path} already holds batches of this run; pass --resume to reuse them")

    completed = {}
    if args.resume:
        labels = {registry.build(name, cfg).label for name in cfg.observables}
        for batch, payload in storage.completed_batches(fingerprint, out_path).items():
            if set(payload) == labels:
                completed[batch] = {label: McAccumulator.from_dict(acc) for label, acc in payload.items()}

    def on_batch(batch: int, accs: Dict[str, McAccumulator]) -> None:
        storage.append_record(RunRecord(
            "simulate",
            {"fingerprint": fingerprint},
            {"fingerprint": fingerprint, "batch": batch,
             "accumulators": {label: acc.to_dict() for label, acc in accs.items()}},
            kind="batch",
        ), out_path)

    estimates = run_experiment(cfg, _threads(args, config), on_batch, completed)
    predictions = predictions_for(cfg)
    final = RunRecord("simulate", cfg.to_dict(), {
        "fingerprint": fingerprint,
        "estimates": {label: est.to_dict() for label, est in estimates.items()},
        "predictions": {label: p.to_dict() for label, p in predictions.items()},
    })
    storage.append_record(final, out_path)
    _emit(final)
    logger.step("records", str(out_path))
    return 0


def _load_final(path: str, subcommand: str) -> Dict[str, Any]:
    if not Path(path).exists():
        raise ConfigError(f"file not found: {path}")
    record = storage.final_record(path, subcommand)
    if record is None:
        raise ConfigError(f"{path} holds no finished {subcommand} record")
    return record


def cmd_compare(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    sim = _load_final(args.sim, "simulate")
    estimates = {label: McEstimate.from_dict(d) for label, d in sim["results"]["estimates"].items()}
    if args.pred:
        raw = _load_final(args.pred, "predict")["results"].get("predictions", {})
    elif "predictions" in sim["results"]:
        raw = sim["results"]["predictions"]
    else:
        cfg = load_experiment(sim["config"], config["run"]["master_seed"])
        raw = {label: p.to_dict() for label, p in predictions_for(cfg).items()}
    predictions = {label: TermBreakdown.from_dict(d) for label, d in raw.items()}

    threshold = args.threshold if args.threshold is not None else float(config["tolerances"]["compare_threshold"])
    evaluator = PredictionEvaluator(threshold)
    reports = evaluator.evaluate(estimates, predictions)
    if not reports:
        raise ConfigError("no observable appears in both the simulation and the predictions")
    _emit(RunRecord("compare", {"sim": args.sim, "pred": args.pred, "threshold": threshold},
                    {"reports": [r.to_dict() for r in reports], "passed": evaluator.all_passed()}))
    return 0 if evaluator.all_passed() else EXIT_FAIL


def kernel_grid(args: argparse.Namespace) -> List[float]:
    if args.u:
        return [float(u) for u in args.u.split(",")]
    if args.start is None or args.stop is None or args.step is None:
        raise ConfigError("kernel needs --u or all of --from, --to and --step")
    if args.step <= 0 or args.stop < args.start:
        raise ConfigError("kernel grid needs --step > 0 and --to >= --from")
    count = int(np.floor((args.stop - args.start) / args.step + 1e-9)) + 1
    return [float(args.start + k * args.step) for k in range(count)]


def cmd_kernel(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    columns = ["u", "s", "Y1", "Y2", "Y1_avg_asym"]
    writer.writerow(columns)
    for u in kernel_grid(args):
        row = sine_kernel(u)
        writer.writerow([repr(float(row[c])) for c in columns])
    return 0


def cmd_formal(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    labels = [l.strip() for l in args.labels.split(",")] if args.labels else None
    if args.input:
        try:
            with open(args.input, 'r', encoding='utf-8') as f:
                lines = f.read().splitlines()
        except FileNotFoundError as exc:
            raise ConfigError(f"file not found: {args.input}") from exc
    else:
        lines = sys.stdin.read().splitlines()

    failed = False
    for lineno, parsed in parse_lines(lines, labels):
        if isinstance(parsed, ParseError):
            failed = True
            out = {"line": lineno, "error": parsed.to_dict()}
            logger.error(f"formal line {lineno}: {parsed}")
        else:
            report = exponents(parsed, args.alpha, args.beta_exp)
            out = {"line": lineno, "monomial": format_monomial(parsed), **report.to_dict()}
        sys.stdout.write(json.dumps(out, ensure_ascii=False) + "\n")
    return EXIT_USAGE if failed else 0


def cmd_selftest(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    results = run_selftest(show=True)
    passed = all(r.passed for r in results)
    _emit(RunRecord("selftest", {}, {"checks": [r.to_dict() for r in results], "passed": passed}))
    return 0 if passed else EXIT_FAIL


# -- parser ---------------------------------------------------------------

def _ensemble_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="experiment JSON; supersedes YAML defaults and flags")
    p.add_argument("--beta", type=int, choices=[1, 2])
    p.add_argument("--N", type=int)
    p.add_argument("--goe", action="store_true")
    p.add_argument("--gue", action="store_true")
    p.add_argument("--preset", help=f"one of {preset_manager.list_presets()}")
    p.add_argument("--zeta-zero", action="store_true", help="zero diagonal variance profile")
    p.add_argument("--E", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--M", type=float)
    p.add_argument("--z", help="spectral parameter, e.g. 0.3+0.5i")
    p.add_argument("--profile", help="polynomial coefficients, lowest degree first")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mesocov", description=__doc__)
    parser.add_argument("--settings", default="config.yaml", help="YAML defaults")
    parser.add_argument("--threads", type=int)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="theory prediction with its term breakdown")
    p.add_argument("kind", nargs="?", default="green-conj", choices=list(PREDICT_KINDS) + ["upsilon"])
    _ensemble_flags(p)
    p.add_argument("--u", type=float)
    p.add_argument("--v", type=float)
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("simulate", help="Monte Carlo estimates")
    _ensemble_flags(p)
    p.add_argument("--samples", type=int)
    p.add_argument("--batches", type=int)
    p.add_argument("--observables", help="';'-separated, e.g. 'green_cov_conjugate;gustavsson(150,151)'")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="JSONL records file")
    p.add_argument("--resume", action="store_true")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("compare", help="join estimates with predictions")
    p.add_argument("--sim", required=True)
    p.add_argument("--pred")
    p.add_argument("--threshold", type=float)
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("kernel", help="sine-kernel table as CSV")
    p.add_argument("--u", help="comma-separated points")
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", dest="stop", type=float)
    p.add_argument("--step", type=float)
    p.set_defaults(handler=cmd_kernel)

    p = sub.add_parser("formal", help="exponents of formal monomials, one per line")
    p.add_argument("--input")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--beta-exp", type=float, default=0.5)
    p.add_argument("--labels", help="restrict labels, e.g. 'G,G*,F,F*'")
    p.set_defaults(handler=cmd_formal)

    p = sub.add_parser("selftest", help="deterministic invariant checks")
    p.set_defaults(handler=cmd_selftest)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.settings, required=args.settings != "config.yaml")
        log = config["logging"]
        logger.configure(level=log["level"], log_file=log.get("file"), rich_terminal=bool(log["rich_terminal"]))
        storage.configure(config["storage"]["directory"], config["storage"]["records_file"])
        config["run"]["master_seed"] = resolve_seed(config["run"]["master_seed"])
        return args.handler(args, config)
    except (ConfigError, ParseError, DomainError) as exc:
        logger.error(str(exc))
        return EXIT_USAGE
    except NumericalFailure as exc:
        logger.error(str(exc))
        return EXIT_NUMERICAL
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        logger.error(f"numerical failure: {type(exc).__name__}: {exc}")
        return EXIT_NUMERICAL
    except KeyboardInterrupt:
        logger.warning("interrupted; finished batches are on disk, rerun with --resume")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
