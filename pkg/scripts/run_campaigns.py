"""Run every campaign config in a directory through the CLI and collect one summary table.

    python scripts/run_campaigns.py scripts/configs --out-dir results/
"""
import argparse
import json
import pathlib

from qcorr.cli import main as qcorr_main


def run(config_dir: pathlib.Path, out_dir: pathlib.Path) -> list[dict]:
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for cfg in sorted(config_dir.glob("*.json")):
        out = out_dir / f"{cfg.stem}.report.json"
        code = qcorr_main(["campaign", "--config", str(cfg), "--out", str(out)])
        report = json.loads(out.read_text())
        rows.append({
            "config": cfg.name,
            "mode": report["mode"],
            "trials": report["trials_run"],
            "violations": report["violation_count"],
            "max_excess": report["max_excess"],
            "seconds": report["runtime_ms"] / 1e3,
            "exit": code,
        })
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("config_dir", type=pathlib.Path)
    parser.add_argument("--out-dir", type=pathlib.Path, default=pathlib.Path("results"))
    args = parser.parse_args()
    rows = run(args.config_dir, args.out_dir)
    print(f"\n{'config':32s} {'mode':10s} {'trials':>7s} {'viol':>5s} {'max excess':>12s} {'s':>7s}")
    for r in rows:
        print(f"{r['config']:32s} {r['mode']:10s} {r['trials']:7d} {r['violations']:5d} "
              f"{r['max_excess']:12.3e} {r['seconds']:7.1f}")
    (args.out_dir / "summary.json").write_text(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()
