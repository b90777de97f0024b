"""Command line surface: gen, train, eval, bench-sweep, verify.

Exit codes: 0 success, 1 usage or config error, 2 data error, 3 numerical
failure (including failed verify identities).
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .data import MixtureSpec
from .errors import ConfigError, DataError, InputError, NumericalError, WsaucError
from .estimator import datasets_from_labels
from .io import cfg_floats, cfg_get
from .losses import SurrogateLoss
from .metrics import ScorePair, auc_exact, opauc_eval, rpauc_eval, tpauc_eval
from .models import score_batch
from .scenarios import (
    PopulationSpec,
    corrupt_noisy,
    make_mil,
    make_pu,
    make_ssl,
    sample_clean,
)
from .sweep import SweepConfig, default_population, run_sweep, sweep_table
from .trainer import SCENARIOS, TrainConfig, pair_plan_for_scenario, train
from .verify import run_all


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _derive_seed(seed: int, stream: int) -> int:
    return int(np.random.SeedSequence((seed, stream)).generate_state(1)[0])


def _parse_cov(raw: str | None, dim: int, default: float = 1.0):
    if raw is None:
        return default
    if ";" in raw:
        try:
            return [[float(v) for v in row.split(",")] for row in raw.split(";")]
        except ValueError as exc:
            raise ConfigError(f"bad covariance spec {raw!r}: {exc}") from None
    vals = [float(v) for v in raw.split(",") if v.strip()]
    return vals[0] if len(vals) == 1 else np.diag(vals)


def _build_population(cfg) -> PopulationSpec:
    dim = cfg_get(cfg, "dim", int, 2)
    mu_pos = cfg_floats(cfg, "mu_pos", default=[1.163] + [0.0] * (dim - 1))
    mu_neg = cfg_floats(cfg, "mu_neg", default=[-1.163] + [0.0] * (dim - 1))
    cov_pos = _parse_cov(cfg.get("cov_pos"), dim)
    cov_neg = _parse_cov(cfg.get("cov_neg"), dim)
    pi_pos = cfg_get(cfg, "pi_pos", float, 0.5)
    return PopulationSpec(mu_pos, cov_pos, mu_neg, cov_neg, pi_pos)


def _mixture_dict(mix: MixtureSpec) -> dict:
    return {"theta_a": mix.theta_a, "theta_b": mix.theta_b, "a": mix.a, "b": mix.b}


def _gen_payload(scenario: str, cfg, pop: PopulationSpec, seed: int):
    """Training rows (features, labels, bag_ids) plus realized parameters."""
    n_pos = cfg_get(cfg, "n_pos", int, 500)
    n_neg = cfg_get(cfg, "n_neg", int, 500)
    xp, xn = sample_clean(pop, n_pos, n_neg, _derive_seed(seed, 0))
    realized: dict = {}
    bag_ids = None

    if scenario == "clean":
        feats = np.concatenate([xp.features, xn.features])
        labels = np.concatenate([np.ones(len(xp), dtype=np.int64),
                                 -np.ones(len(xn), dtype=np.int64)])
        mixture = MixtureSpec(1.0, 0.0)
    elif scenario == "noisy":
        split = corrupt_noisy(xp, xn, cfg_get(cfg, "eta_pos", float, 0.2),
                              cfg_get(cfg, "eta_neg", float, 0.2), _derive_seed(seed, 1))
        feats = np.concatenate([split.noisy_pos.features, split.noisy_neg.features])
        labels = np.concatenate([np.ones(len(split.noisy_pos), dtype=np.int64),
                                 -np.ones(len(split.noisy_neg), dtype=np.int64)])
        mixture = split.mixture
        realized = {"eta_pos_realized": split.eta_pos_realized,
                    "eta_neg_realized": split.eta_neg_realized,
                    "coefficient_a": split.coefficient_a()}
    elif scenario == "pu":
        split = make_pu(xp, xn, cfg_get(cfg, "label_ratio", float, 0.1), _derive_seed(seed, 1))
        feats = np.concatenate([split.labeled_pos.features, split.unlabeled.features])
        labels = np.concatenate([np.ones(len(split.labeled_pos), dtype=np.int64),
                                 np.zeros(len(split.unlabeled), dtype=np.int64)])
        mixture = split.mixture
        realized = {"pi_pos_realized": split.pi_pos_realized,
                    "pi_neg_realized": split.pi_neg_realized,
                    "coefficient_a": split.coefficient_a()}
    elif scenario in ("ssl", "ssl_noisy"):
        split = make_ssl(xp, xn, cfg_get(cfg, "label_ratio", float, 0.1), _derive_seed(seed, 1))
        lp, ln = split.labeled_pos, split.labeled_neg
        mixture = MixtureSpec(1.0, 0.0)
        realized = {"pi_pos_realized": split.pi_pos_realized}
        if scenario == "ssl_noisy":
            noisy = corrupt_noisy(lp, ln, cfg_get(cfg, "eta_pos", float, 0.2),
                                  cfg_get(cfg, "eta_neg", float, 0.2), _derive_seed(seed, 2))
            lp, ln = noisy.noisy_pos, noisy.noisy_neg
            mixture = noisy.mixture
            realized.update({"eta_pos_realized": noisy.eta_pos_realized,
                             "eta_neg_realized": noisy.eta_neg_realized,
                             "coefficient_a": noisy.coefficient_a()})
        feats = np.concatenate([lp.features, ln.features, split.unlabeled.features])
        labels = np.concatenate([np.ones(len(lp), dtype=np.int64),
                                 -np.ones(len(ln), dtype=np.int64),
                                 np.zeros(len(split.unlabeled), dtype=np.int64)])
    elif scenario == "mil":
        mil = make_mil(xp, xn,
                       cfg_get(cfg, "n_pos_bags", int, 25),
                       cfg_get(cfg, "n_neg_bags", int, 25),
                       cfg_get(cfg, "bag_size", int, 8),
                       cfg_get(cfg, "witness_rate", float, 0.5),
                       _derive_seed(seed, 1))
        feats = np.concatenate([mil.union_pos.features, mil.union_neg.features])
        labels = np.concatenate([np.ones(len(mil.union_pos), dtype=np.int64),
                                 -np.ones(len(mil.union_neg), dtype=np.int64)])
        bag_ids = np.concatenate([mil.union_pos.bag_ids, mil.union_neg.bag_ids])
        mixture = mil.mixture
        realized = {"eta_pos_realized": mil.eta_pos_realized,
                    "witness_per_bag": mil.witness_per_bag,
                    "coefficient_a": mil.coefficient_a()}
    else:
        raise ConfigError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
    return feats, labels, bag_ids, mixture, realized


def cmd_gen(args) -> int:
    cfg = io.parse_config(args.config)
    scenario = cfg_get(cfg, "scenario", str, required=True)
    seed = args.seed if args.seed is not None else cfg_get(cfg, "seed", int, 0)
    out_dir = Path(args.out or cfg_get(cfg, "out_dir", str, required=True))
    out_dir.mkdir(parents=True, exist_ok=True)
    pop = _build_population(cfg)

    feats, labels, bag_ids, mixture, realized = _gen_payload(scenario, cfg, pop, seed)
    io.write_dataset(out_dir / "train.csv", feats, labels, bag_ids)

    n_test_pos = cfg_get(cfg, "n_test_pos", int, 1000)
    n_test_neg = cfg_get(cfg, "n_test_neg", int, 1000)
    tp, tn = sample_clean(pop, n_test_pos, n_test_neg, _derive_seed(seed, 10))
    if scenario == "mil":
        mil_test = make_mil(tp, tn,
                            cfg_get(cfg, "n_test_pos_bags", int, 25),
                            cfg_get(cfg, "n_test_neg_bags", int, 25),
                            cfg_get(cfg, "bag_size", int, 8),
                            cfg_get(cfg, "witness_rate", float, 0.5),
                            _derive_seed(seed, 11))
        test_feats = np.concatenate([mil_test.union_pos.features, mil_test.union_neg.features])
        test_labels = np.concatenate([np.ones(len(mil_test.union_pos), dtype=np.int64),
                                      -np.ones(len(mil_test.union_neg), dtype=np.int64)])
        test_bags = np.concatenate([mil_test.union_pos.bag_ids, mil_test.union_neg.bag_ids])
        io.write_dataset(out_dir / "test.csv", test_feats, test_labels, test_bags)
    else:
        test_feats = np.concatenate([tp.features, tn.features])
        test_labels = np.concatenate([np.ones(len(tp), dtype=np.int64),
                                      -np.ones(len(tn), dtype=np.int64)])
        io.write_dataset(out_dir / "test.csv", test_feats, test_labels)

    manifest = {
        "scenario": scenario,
        "seed": seed,
        "dim": pop.dim,
        "config": dict(cfg),
        "mixture": _mixture_dict(mixture),
        "realized": realized,
        "files": {"train": "train.csv", "test": "test.csv"},
        "columns": [f"f{i}" for i in range(pop.dim)] + ["label"]
                   + (["bag_id"] if bag_ids is not None else []),
    }
    (out_dir / "manifest.json").write_text(io.canonical_json(manifest))
    print(f"wrote {out_dir / 'train.csv'}, {out_dir / 'test.csv'}, {out_dir / 'manifest.json'}")
    return 0


def _train_config_from(cfg, scenario: str, seed: int) -> TrainConfig:
    gamma = cfg_get(cfg, "gamma", float, 0.45)
    return TrainConfig(
        alpha=cfg_get(cfg, "alpha", float, 0.0),
        beta=cfg_get(cfg, "beta", float, 0.0),
        gamma=gamma,
        outer_rounds=cfg_get(cfg, "outer_rounds", int, 50),
        inner_rounds=cfg_get(cfg, "inner_rounds", int, 20),
        batch_a=cfg_get(cfg, "batch_a", int, 64),
        batch_b=cfg_get(cfg, "batch_b", int, 64),
        learning_rate=cfg_get(cfg, "learning_rate", float, 0.01),
        seed=seed,
        loss=SurrogateLoss(cfg_get(cfg, "surrogate", str, "squared")),
        pair_plan=pair_plan_for_scenario(scenario, gamma),
        architecture=cfg_get(cfg, "architecture", str, "linear"),
        hidden_width=cfg_get(cfg, "hidden_width", int, 32),
        trim_cadence=cfg_get(cfg, "trim_cadence", str, "outer"),
        warmup_rounds=cfg_get(cfg, "warmup_rounds", int, 0),
    )


def _bag_auc(scores: np.ndarray, y: np.ndarray, bag_ids: np.ndarray) -> float:
    uniq = np.unique(bag_ids)
    bag_scores, bag_labels = [], []
    for b in uniq:
        mask = bag_ids == b
        bag_scores.append(float(scores[mask].max()))
        bag_labels.append(int(y[mask][0]))
    bag_scores = np.asarray(bag_scores)
    bag_labels = np.asarray(bag_labels)
    return auc_exact(ScorePair(bag_scores[bag_labels == 1], bag_scores[bag_labels == -1]))


def _test_metrics(model, test_path, alpha: float, beta: float) -> dict:
    x, y, bags = io.read_dataset(test_path)
    scores = score_batch(model, x)
    pos, neg = scores[y == 1], scores[y == -1]
    if pos.size == 0 or neg.size == 0:
        raise DataError(f"test data {test_path} must contain both classes")
    sp = ScorePair(pos, neg)
    out = {
        "auc": auc_exact(sp),
        "rpauc": rpauc_eval(sp, alpha, beta),
        "alpha": alpha,
        "beta": beta,
    }
    if bags is not None:
        out["bag_auc"] = _bag_auc(scores, y, bags)
    return out


def cmd_train(args) -> int:
    cfg = io.parse_config(args.config)
    data_dir = Path(cfg_get(cfg, "data", str, required=True))
    manifest = io.read_json(data_dir / "manifest.json")
    scenario = manifest.get("scenario")
    if scenario not in SCENARIOS:
        raise DataError(f"manifest names unknown scenario {scenario!r}")
    x, y, bags = io.read_dataset(data_dir / manifest["files"]["train"])
    try:
        datasets = datasets_from_labels(scenario, x, y, bags)
    except InputError as exc:
        raise ConfigError(f"scenario/data mismatch: {exc}") from None

    seed = args.seed if args.seed is not None else cfg_get(cfg, "seed", int, 0)
    tc = _train_config_from(cfg, scenario, seed)

    started = time.perf_counter()
    model, trace = train(datasets, tc)
    wall = time.perf_counter() - started

    out_dir = Path(args.out) if args.out else data_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    model_path = out_dir / cfg_get(cfg, "model_out", str, "model.json")
    report_path = out_dir / cfg_get(cfg, "report_out", str, "report.json")
    io.write_model(model_path, model)

    report = io.RunReport(
        config={**dict(cfg), "seed": str(seed)},
        scenario=scenario,
        coefficients=manifest.get("mixture", {}),
        trace_summary=trace.summary(),
        test_metrics=_test_metrics(model, data_dir / manifest["files"]["test"],
                                   tc.alpha, tc.beta),
        seeds={"train_seed": seed, "data_seed": manifest.get("seed")},
        wall_time_s=None,  # never persisted: reports must be byte-reproducible
    )
    report_path.write_text(report.to_json())
    print(f"trained in {wall:.2f}s", file=sys.stderr)
    print(f"wrote {model_path} and {report_path}")
    return 0


def cmd_eval(args) -> int:
    model = io.read_model(args.model)
    x, y, bags = io.read_dataset(args.data)
    scores = score_batch(model, x)
    pos, neg = scores[y == 1], scores[y == -1]
    if pos.size == 0 or neg.size == 0:
        raise DataError("eval data must contain both +1 and -1 labels")
    sp = ScorePair(pos, neg)
    alpha, beta = args.alpha, args.beta
    metrics = {
        "auc": auc_exact(sp),
        "rpauc": rpauc_eval(sp, alpha, beta),
        "opauc": opauc_eval(sp, 0.0, alpha) if alpha > 0.0 else None,
        "tpauc": tpauc_eval(sp, alpha, beta) if alpha > 0.0 else None,
        "alpha": alpha,
        "beta": beta,
        "n_pos": int(pos.size),
        "n_neg": int(neg.size),
    }
    if bags is not None:
        metrics["bag_auc"] = _bag_auc(scores, y, bags)
    text = io.canonical_json(metrics)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench_sweep(args) -> int:
    cfg = io.parse_config(args.config)
    pop_keys = {"dim", "mu_pos", "mu_neg", "cov_pos", "cov_neg", "pi_pos"}
    population = _build_population(cfg) if pop_keys & cfg.keys() else default_population()
    sweep_cfg = SweepConfig(
        grid=cfg_floats(cfg, "grid", default=None) or SweepConfig().grid,
        repeats=cfg_get(cfg, "repeats", int, 10),
        n_pool=cfg_get(cfg, "n_pool", int, 4000),
        train_fraction=cfg_get(cfg, "train_fraction", float, 0.05),
        n_test=cfg_get(cfg, "n_test", int, 2000),
        base_seed=args.seed if args.seed is not None else cfg_get(cfg, "seed", int, 0),
        trim_mode=cfg_get(cfg, "trim_mode", str, "matched"),
        alpha_fixed=cfg_get(cfg, "alpha_fixed", float, 0.2),
        beta_fixed=cfg_get(cfg, "beta_fixed", float, 0.2),
        surrogate=cfg_get(cfg, "surrogate", str, "squared"),
        architecture=cfg_get(cfg, "architecture", str, "linear"),
        hidden_width=cfg_get(cfg, "hidden_width", int, 8),
        outer_rounds=cfg_get(cfg, "outer_rounds", int, 30),
        inner_rounds=cfg_get(cfg, "inner_rounds", int, 10),
        batch_a=cfg_get(cfg, "batch_a", int, 32),
        batch_b=cfg_get(cfg, "batch_b", int, 32),
        learning_rate=cfg_get(cfg, "learning_rate", float, 0.05),
        warmup_rounds=cfg_get(cfg, "warmup_rounds", int, 6),
        population=population,
    )
    rows = run_sweep(sweep_cfg)
    out_path = Path(args.out or cfg_get(cfg, "out", str, "sweep.tsv"))
    out_path.write_text(sweep_table(rows))
    out_path.with_suffix(".json").write_text(io.canonical_json(rows))
    noisiest = min(rows, key=lambda r: (r["theta_a"], r["one_minus_theta_b"]))
    print(f"wrote {out_path} ({len(rows)} cells); "
          f"noisiest cell delta_mean={noisiest['delta_mean']:+.4f}")
    return 0


def cmd_verify(args) -> int:
    results = run_all(seed=args.seed if args.seed is not None else 0)
    for res in results:
        print(res.line())
    return 0 if all(r.passed for r in results) else 3


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wsauc",
                     description="Weakly supervised AUC optimization toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate synthetic datasets")
    p_gen.add_argument("--config", required=True)
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=cmd_gen)

    p_train = sub.add_parser("train", help="train on a generated dataset")
    p_train.add_argument("--config", required=True)
    p_train.add_argument("--seed", type=int, default=None)
    p_train.add_argument("--out", default=None)
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("eval", help="evaluate a saved model on a dataset")
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--data", required=True)
    p_eval.add_argument("--alpha", type=float, default=0.0)
    p_eval.add_argument("--beta", type=float, default=0.0)
    p_eval.add_argument("--out", default=None)
    p_eval.set_defaults(func=cmd_eval)

    p_sweep = sub.add_parser("bench-sweep", help="paired robustness sweep over contamination")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.add_argument("--out", default=None)
    p_sweep.set_defaults(func=cmd_bench_sweep)

    p_verify = sub.add_parser("verify", help="run the exact-identity oracle suites")
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DataError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, WsaucError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
