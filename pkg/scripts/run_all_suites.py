"""Run every verification suite and print one status line each.

    python3 scripts/run_all_suites.py --trials 5 --threads 4
"""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass

from cumulantkit.verify import SUITES, run_suite


@dataclass
class SweepConfig:
    r: int = 2
    seed: int = 42
    trials: int = 3
    n: int = 8
    threads: int = 1
    suites: tuple[str, ...] = SUITES


def sweep(cfg: SweepConfig) -> list[dict]:
    rows = []
    for suite in cfg.suites:
        rep = run_suite(suite, r=cfg.r, seed=cfg.seed, trials=cfg.trials, n=cfg.n, threads=cfg.threads)
        rows.append({
            "suite": suite, "status": rep.status, "checks": len(rep.checks),
            "seconds": round(rep.wall_time, 2), "counterexample": rep.counterexample,
        })
        print(f"{suite:<18} {rep.status:<5} {len(rep.checks):>4} checks  {rep.wall_time:7.2f}s")
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    cfg = SweepConfig()
    for name, value in asdict(cfg).items():
        if name != "suites":
            ap.add_argument(f"--{name}", type=int, default=value)
    ap.add_argument("--suites", nargs="+", choices=SUITES, default=list(SUITES))
    ap.add_argument("--json", help="also write the rows to this file")
    args = ap.parse_args()
    cfg = SweepConfig(args.r, args.seed, args.trials, args.n, args.threads, tuple(args.suites))
    rows = sweep(cfg)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=1)
    raise SystemExit(0 if all(r["status"] == "pass" for r in rows) else 1)


if __name__ == "__main__":
    main()
