"""Free curve plus partial-measurement curves for n = 1, 2, 4, 8, 16, 64 in the sqrt(15) model."""
import argparse
from pathlib import Path

from zenolab.cli import format_summary
from zenolab.experiment import ExperimentConfig, run_experiment
from zenolab.output import emit_outputs


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="out/survival", help="output directory")
    p.add_argument("--projector", default="partial", choices=("partial", "full"))
    args = p.parse_args()
    out = Path(args.out)
    report = run_experiment(ExperimentConfig(projector=args.projector))
    for path in emit_outputs(report, out / "csv", out / "survival.svg", out / "report.json"):
        print("wrote", path)
    print(format_summary(report))


if __name__ == "__main__":
    main()
