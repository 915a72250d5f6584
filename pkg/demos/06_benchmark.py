"""A small benchmark grid written to CSV with per-family SVG plots.

Run: python3 demos/06_benchmark.py [outdir]   (a few minutes)
The same grid is available from the command line with
    vertexplace bench --config suite.json --out results.csv --plots plots/
"""

import sys
from pathlib import Path

from vertexplace import bench

out = Path(sys.argv[1] if len(sys.argv) > 1 else "bench_demo")
out.mkdir(parents=True, exist_ok=True)

cfg = bench.SuiteConfig(
    families={"er": [{"p": 0.2}], "ba": [{"m": 1}]},
    sizes=[32, 64],
    repetitions=3,
    ga={"population": 50, "generations": 60},
    gnosis_train={"episodes": 300},
)
(out / "suite.json").write_text(cfg.to_json())

training: list[dict] = []
records = bench.run_suite(cfg, training)
for entry in training:
    print(f"trained {entry['family']}:{entry['n']} in {entry['train_s']:.1f}s")

(out / "results.csv").write_text(bench.emit_csv(records))
plots = bench.write_plots(records, out / "plots")

for metric in ("vcs", "cf"):
    print(f"\nmedian {metric}:")
    for (family, n, param, algo), v in bench.medians(records, metric).items():
        print(f"  {family} n={n:3d} {algo:8s} {v:8.1f}")
print(f"\nwrote {out / 'results.csv'} and {len(plots)} plots under {out / 'plots'}")
