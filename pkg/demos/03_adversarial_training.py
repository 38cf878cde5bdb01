"""Naive vs adversarially trained baselines under camouflage attack.

Trains three models on the bundled corpus, evaluates each across the full
31-test suite, and prints performance-reduction tables in the usual
row-per-model layout. Takes a minute or two single-threaded.

Run:  python demos/03_adversarial_training.py
"""

from wordcamo import bundled_corpus, run_trend_experiment

train, test = bundled_corpus()
print(f"corpus: {len(train)} train / {len(test)} test")

reports = run_trend_experiment(train, test, master_seed=42)

columns = ["1.1", "1.2", "2.1", "2.2", "3.1", "3.2", "Avg"]
print()
print(f"{'model':<12} {'F1':>7}  " + "  ".join(f"{c:>5}" for c in columns))
for name, report in reports.items():
    cells = "  ".join(f"{report.table_view[c]:>4.1f}%" for c in columns)
    print(f"{name:<12} {report.original_f1:>7.4f}  {cells}")

print()
print("reduction vs share of camouflaged instances (naive model):")
for key, curve in reports["naive"].figure_view.items():
    points = "  ".join(f"{p}%:{r:.1f}" for p, r in curve)
    print(f"  {key}: {points}")

naive = reports["naive"].averages["overall"]
dynamic = reports["dynamic75"].averages["overall"]
static = reports["static100"].averages["overall"]
print()
print(f"average reduction: naive {naive}%, static(100) {static}%, dynamic(75) {dynamic}%")
print("adversarial training reduces the attack's impact:",
      dynamic < naive and static < naive)
