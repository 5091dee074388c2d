"""
Full pipeline on the bundled fixture corpus
===========================================

Train all six baselines on both label schemas, print the comparison tables,
then score a prediction file produced outside the package.
"""

# %%
import tempfile
from pathlib import Path

from banglahate import fixture_dir
from banglahate.corpus import LabelSchema
from banglahate.harness import emit_comparison, entries_from_records, load_config, run_experiment, score_predictions
from banglahate.metrics import classwise_markdown

out = Path(tempfile.mkdtemp(prefix="banglahate-"))
kinds = ("majority", "random", "svm", "logreg", "forest", "tree")

# %%
for task in ("1A", "1B"):
    base = load_config(fixture_dir() / f"fixture_{task}.cfg")
    records = [run_experiment(base.with_overrides({"model.kind": kind}), out / task) for kind in kinds]
    print(f"## Subtask {task}\n")
    print(emit_comparison(entries_from_records(records, "test"), classwise=False))

# %%
# Scoring an external prediction file: here, copy the gold labels of the
# first ten test rows and call everything else "None".
gold = fixture_dir() / "1A" / "test.tsv"
rows = [line.split("\t") for line in gold.read_text(encoding="utf-8").splitlines()]
pred = out / "external.tsv"
pred.write_text("".join(f"{i}\t{lab if n < 10 else 'None'}\n" for n, (i, _, lab) in enumerate(rows)), encoding="utf-8")
report = score_predictions(pred, gold, LabelSchema.default("1A"))
print(classwise_markdown(report, "External"))
