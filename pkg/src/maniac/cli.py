"""Command-line front end: cut inspection, single roundtrips, and campaigns.

Outputs are machine-readable by design: `mincut` and `roundtrip` print one
JSON object to stdout, `campaign` writes a per-trial CSV and prints a JSON
summary.  Per-trial seeds are derived from the base seed with a stable hash,
so a campaign gives byte-identical rows (timing column aside) no matter how
many worker processes split the trials.

Exit codes: 0 on success, 1 when a single-shot roundtrip fails to decode,
2 for configuration or usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import dataclass
from multiprocessing import get_context

import numpy as np

from .codec import (
    ManiacParams,
    binomial_margin,
    coherent_decode,
    derive_params,
    lift_headers,
    noncoherent_decode,
    s1_encode,
    s2_encode,
    success_lower_bound,
)
from .errors import ManiacError
from .matrix import Mat, rank
from .netsim import AdversaryPlan, NetworkSpec, reference_network, transmit

MODES = ("coherent", "noncoherent")

DEFAULT_PARAMS = {"p": 257, "z": 1, "R1": 1, "R2": 2, "k": 1}

CSV_COLUMNS = ("trial", "seed", "success", "failure_stage", "rank_E",
               "elapsed_ms")


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    network: NetworkSpec
    p: int
    z: int
    R1: int
    R2: int
    k: int
    mode: str
    adversary: AdversaryPlan
    trials: int
    base_seed: int
    output: str | None


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e


def _build_network(spec, p: int) -> NetworkSpec:
    if spec is None or spec == "reference":
        return reference_network(p)
    if isinstance(spec, str):
        obj = _load_json(spec)
    elif isinstance(spec, dict):
        obj = spec
    else:
        raise ConfigError(f"bad network entry: {spec!r}")
    net = NetworkSpec.from_obj(obj)
    if net.p != p:
        raise ConfigError(f"network field p={net.p} != params p={p}")
    return net


def _build_adversary(obj, z: int) -> AdversaryPlan:
    if obj is None:
        strategy = "random-edges" if z > 0 else "none"
        return AdversaryPlan(z=z, strategy=strategy)
    return AdversaryPlan(z=int(obj.get("z", z)),
                         strategy=obj.get("strategy", "random-edges"),
                         edges=tuple(obj.get("edges", ())))


def load_config(args) -> ExperimentConfig:
    """Merge config file, flags, and MANIAC_SEED into one validated config."""
    obj = _load_json(args.config) if getattr(args, "config", None) else {}
    params = {**DEFAULT_PARAMS, **obj.get("params", {})}

    mode = getattr(args, "mode", None) or obj.get("mode", "coherent")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")

    seed = obj.get("base_seed", 0)
    env_seed = os.environ.get("MANIAC_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError as e:
            raise ConfigError(f"MANIAC_SEED must be an integer: {env_seed!r}") from e
    if getattr(args, "seed", None) is not None:
        seed = args.seed

    trials = getattr(args, "trials", None) or obj.get("trials", 1)
    if trials < 1:
        raise ConfigError(f"trials must be at least 1, got {trials}")

    network_arg = getattr(args, "network", None) or obj.get("network")
    try:
        network = _build_network(network_arg, params["p"])
        adversary = _build_adversary(obj.get("adversary"), params["z"])
    except (ManiacError, ValueError) as e:
        raise ConfigError(str(e)) from e

    output = getattr(args, "out", None) or obj.get("output")
    return ExperimentConfig(network=network, p=params["p"], z=params["z"],
                            R1=params["R1"], R2=params["R2"], k=params["k"],
                            mode=mode, adversary=adversary, trials=trials,
                            base_seed=seed, output=output)


def build_params(cfg: ExperimentConfig) -> ManiacParams:
    return derive_params(cfg.p, cfg.z, cfg.R1, cfg.R2, cfg.k,
                         cfg.network.cuts())


def _stage_label(exc: Exception) -> str:
    return re.sub(r"(?<!^)(?=[A-Z])", "_", type(exc).__name__).lower()


def run_trial(cfg: ExperimentConfig, pr: ManiacParams, trial: int) -> dict:
    """One seeded transmit-and-decode; deterministic given (base_seed, trial)."""
    ss = np.random.SeedSequence([cfg.base_seed, trial])
    s_payload, s_channel = (int(v) for v in ss.generate_state(2))
    rng = np.random.default_rng(s_payload)
    x1 = Mat.random(pr.tower.fq, pr.R1, pr.k * pr.N, rng)
    x2 = Mat.random(pr.tower.fQ, pr.R2, pr.k, rng)
    m1, m2 = s1_encode(pr, x1), s2_encode(pr, x2)

    if cfg.mode == "coherent":
        tx = transmit(cfg.network, m1, m2, cfg.adversary, s_channel)
    else:
        h1, h2 = lift_headers(pr, m1, m2)
        tx = transmit(cfg.network, h1, h2, cfg.adversary, s_channel)

    success = False
    failure = ""
    start = time.perf_counter()
    try:
        if cfg.mode == "coherent":
            got1, got2 = coherent_decode(pr, tx.Y, tx.T1, tx.T2)
        else:
            got1, got2 = noncoherent_decode(pr, tx.Y)
        if got1 == x1 and got2 == x2:
            success = True
        else:
            failure = "wrong_payload"
    except ManiacError as e:
        failure = _stage_label(e)
    elapsed_ms = (time.perf_counter() - start) * 1000.0

    return {"trial": trial, "seed": s_channel, "success": success,
            "failure_stage": failure, "rank_E": rank(tx.E),
            "elapsed_ms": elapsed_ms}


def _csv_line(row: dict) -> str:
    return "{trial},{seed},{success},{failure_stage},{rank_E},{elapsed:.3f}".format(
        trial=row["trial"], seed=row["seed"],
        success=1 if row["success"] else 0,
        failure_stage=row["failure_stage"], rank_E=row["rank_E"],
        elapsed=row["elapsed_ms"])


def summarize(cfg: ExperimentConfig, pr: ManiacParams, rows: list[dict]) -> dict:
    successes = sum(1 for r in rows if r["success"])
    by_stage: dict[str, int] = {}
    for r in rows:
        if not r["success"]:
            by_stage[r["failure_stage"]] = by_stage.get(r["failure_stage"], 0) + 1
    bound = success_lower_bound(pr, len(cfg.network.edges))
    return {
        "trials": len(rows),
        "successes": successes,
        "success_rate": successes / len(rows),
        "bound": bound,
        "margin": binomial_margin(bound, len(rows)),
        "failures_by_stage": dict(sorted(by_stage.items())),
    }


# --- worker plumbing for --jobs -------------------------------------------------

_WORKER: dict = {}


def _init_worker(cfg: ExperimentConfig, pr: ManiacParams):
    _WORKER["cfg"] = cfg
    _WORKER["pr"] = pr


def _worker_trial(trial: int) -> dict:
    return run_trial(_WORKER["cfg"], _WORKER["pr"], trial)


# --- subcommands -----------------------------------------------------------------

def cmd_mincut(args) -> int:
    p = args.p
    if args.network and args.network != "reference":
        obj = _load_json(args.network)
        net = NetworkSpec.from_obj(obj)
    else:
        net = reference_network(p)
    cuts = net.cuts()
    print(json.dumps({"C1": cuts.C1, "C2": cuts.C2, "C": cuts.C}))
    return 0


def cmd_roundtrip(args) -> int:
    cfg = load_config(args)
    pr = build_params(cfg)
    row = run_trial(cfg, pr, trial=0)
    out = {"success": row["success"],
           "stage_failures": [row["failure_stage"]] if row["failure_stage"] else [],
           "seed": row["seed"],
           "rank_E": row["rank_E"]}
    print(json.dumps(out, sort_keys=True))
    return 0 if row["success"] else 1


def cmd_campaign(args) -> int:
    cfg = load_config(args)
    pr = build_params(cfg)
    if not cfg.output:
        raise ConfigError("campaign needs an output path (--out or config output)")
    jobs = args.jobs or os.cpu_count() or 1
    jobs = min(jobs, cfg.trials)

    rows: list[dict] = []
    with open(cfg.output, "w") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        try:
            if jobs == 1:
                for trial in range(cfg.trials):
                    row = run_trial(cfg, pr, trial)
                    rows.append(row)
                    fh.write(_csv_line(row) + "\n")
                    fh.flush()
            else:
                ctx = get_context()
                with ctx.Pool(jobs, _init_worker, (cfg, pr)) as pool:
                    for row in pool.imap(_worker_trial, range(cfg.trials)):
                        rows.append(row)
                        fh.write(_csv_line(row) + "\n")
                        fh.flush()
        except KeyboardInterrupt:
            sys.stderr.write(
                f"interrupted after {len(rows)}/{cfg.trials} trials; "
                "partial results kept\n")
    if not rows:
        return 1
    print(json.dumps(summarize(cfg, pr, rows), sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="maniac",
        description="Two-source rank-metric coding experiments")
    sub = ap.add_subparsers(dest="command", required=True)

    mc = sub.add_parser("mincut", help="print the network cut profile")
    mc.add_argument("--network", help="network JSON path (default: bundled)")
    mc.add_argument("--p", type=int, default=257, help="field for the bundled network")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment config JSON")
    common.add_argument("--mode", choices=MODES, help="decoder mode")
    common.add_argument("--seed", type=int, help="base seed (beats MANIAC_SEED)")
    common.add_argument("--network", help="network JSON path or 'reference'")

    sub.add_parser("roundtrip", parents=[common],
                   help="one encode-transmit-decode cycle")

    cp = sub.add_parser("campaign", parents=[common],
                        help="seeded Monte-Carlo campaign")
    cp.add_argument("--trials", type=int, help="number of trials")
    cp.add_argument("--out", help="CSV output path")
    cp.add_argument("--jobs", type=int, help="worker processes (default: cores)")

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"mincut": cmd_mincut, "roundtrip": cmd_roundtrip,
                "campaign": cmd_campaign}
    try:
        return handlers[args.command](args)
    except (ConfigError, ManiacError, ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
