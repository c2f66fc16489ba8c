# The whole toolkit through the command line. Writes a synthetic
# model (vocab.json + matrix.npy) into a scratch directory, then drives
# every subcommand the way a shell user would. Each output lands next
# to a manifest recording input digests, parameters, and seeds.

import json
import tempfile
from pathlib import Path

import numpy as np

from embedgeo import save_matrix
from embedgeo.cli import run

tmp = Path(tempfile.mkdtemp(prefix="embedgeo-demo-"))
print(f"working in {tmp}\n")

# --- synthesize a model: three scripts, one cluster each ----------------
rng = np.random.default_rng(42)
tokens = (
    ["▁the", "▁dog", "▁cat", "walk", "talk", "sing", "read", "rest"]
    + ["▁мир", "▁да", "нет", "кто", "что", "где", "мы", "ты"]
    + ["123", "456", "789", "012", "345", "678", "901", "234"]
)
matrix = np.zeros((24, 12), dtype=np.float32)
for c in range(3):
    rows = slice(8 * c, 8 * (c + 1))
    matrix[rows, 4 * c] = 1.0
    matrix[rows, 4 * c : 4 * c + 4] += 0.1 * rng.random((8, 4), dtype=np.float32)

vocab = tmp / "vocab.json"
vocab.write_text(json.dumps(tokens, ensure_ascii=False), encoding="utf-8")
npy = tmp / "matrix.npy"
save_matrix(npy, matrix)
corpus = tmp / "corpus.txt"
bare = [t.lstrip("▁") for t in tokens]
corpus.write_text(
    "\n".join(
        " ".join(bare[i] for i in rng.choice(24, size=10)) for _ in range(30)
    ),
    encoding="utf-8",
)


def sh(*argv):
    print(f"$ embedgeo {' '.join(argv)}")
    code = run(list(argv))
    assert code == 0, f"exit {code}"
    print()


sh("categorize", str(vocab), "--out", str(tmp / "categories.csv"))
sh("overlap", "--vocab-a", str(vocab), "--vocab-b", str(vocab),
   "--by-category", "--out", str(tmp / "overlap.json"))
sh("knn", "--matrix", str(npy), "--vocab", str(vocab), "--token", "▁dog", "-k", "5")
sh("diversity", "--matrix", str(npy), "--vocab", str(vocab),
   "-k", "5", "--seed", "17", "--out", str(tmp / "diversity.csv"))
sh("breakdown", "--matrix", str(npy), "--vocab", str(vocab),
   "-k", "5", "--out", str(tmp / "breakdown.json"))
sh("overlap-nn", "--a", str(npy), "--b", str(npy),
   "--vocab-a", str(vocab), "--vocab-b", str(vocab),
   "-k", "5", "--out", str(tmp / "overlap_nn.json"))
sh("angles", "--a", str(npy), "--b", str(npy),
   "--full-spectrum", "--out", str(tmp / "angles.json"))
sh("freq", "--corpus", str(corpus), "--vocab", str(vocab),
   "--out", str(tmp / "freq.json"))
sh("freq-div", "--freq", str(tmp / "freq.json"),
   "--diversity", str(tmp / "diversity.csv"),
   "--bands", "4", "--seed", "17", "--out", str(tmp / "freq_div.json"))
sh("export-graph", "--matrix", str(npy), "-k", "3",
   "--queries", "0,8,16", "--out", str(tmp / "graph.csv"))

print("artifacts:")
for p in sorted(tmp.iterdir()):
    print(f"  {p.name}")

angles = json.loads((tmp / "angles.json").read_text())
print()
print("angles.json carries its manifest:")
print(json.dumps(angles["manifest"], indent=2, sort_keys=True)[:400], "...")
