"""A small ablation run: three feature modes x two classifiers.

Regenerates the synthetic corpus per seed from its spec so sampling noise is
averaged out, then writes results.jsonl and the accuracy grid. The shipped
specs/*.json files carry each ecosystem's label and intention conditionals;
the full five-classifier, ten-seed experiment is what the acceptance suite
runs (see tests/test_acceptance.py).
"""

from pathlib import Path

from bugtriage.evaluation import format_table, render_report, run_ablation
from bugtriage.synth import load_synth_spec

REPO = Path(__file__).resolve().parents[1]
spec = load_synth_spec(REPO / "specs" / "apache.json")

result = run_ablation(
    {"apache": spec},
    seeds=[1, 2, 3],
    classifiers=[("knn", {}), ("rf", {"n_trees": 50})],
    k=5,
)
print(format_table(result))

out = Path(__file__).parent / "ablation-out"
paths = render_report(result, out)
print("report files:")
for p in paths:
    print(f"  {p}")

for kind in ("knn", "rf"):
    tf = result.table[("apache", "text+freq", kind)]
    tfi = result.table[("apache", "text+freq+intention", kind)]
    print(f"{kind}: adding the intention feature moves mean accuracy "
          f"{100 * tf:.1f}% -> {100 * tfi:.1f}% ({100 * (tfi - tf):+.1f}pp)")
