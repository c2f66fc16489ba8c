# How much vocabulary do two models share? Tokens are normalized into a
# common convention first (byte-level BPE entries like "Gthe" become
# "▁the"), then joined by exact string match. Overlap percentages are
# reported under three denominators because the choice matters.

import json
import tempfile
from pathlib import Path

from embedgeo import align, load_vocab, normalize_token, overlap_stats

print("normalization examples")
print("----------------------")
for raw in ["Ġthe", "Ġ", "the", "Ã©"]:
    print(f"  byte_bpe {raw!r:8} -> {normalize_token(raw, 'byte_bpe')!r}")

# two small vocabularies with different tokenizer conventions
sp_tokens = ["▁the", "▁dog", "▁кот", "▁犬", "run", "ning", "▁123"]
bpe_tokens = ["Ġthe", "Ġdog", "Ġcat", "run", "ning", "Ġ456"]

tmp = Path(tempfile.mkdtemp())
(tmp / "sp.json").write_text(json.dumps(sp_tokens, ensure_ascii=False))
(tmp / "bpe.json").write_text(json.dumps(bpe_tokens, ensure_ascii=False))

vocab_sp = load_vocab(tmp / "sp.json", scheme="sentencepiece")
vocab_bpe = load_vocab(tmp / "bpe.json", scheme="byte_bpe")

shared = align(vocab_sp, vocab_bpe)
print()
print(f"shared tokens ({len(shared)}):")
for tok, row_a, row_b in shared.entries:
    print(f"  {tok!r:10} row {row_a} in A, row {row_b} in B")

stats = overlap_stats(vocab_sp, vocab_bpe)
print()
print("overlap percentages (three denominators)")
print("-----------------------------------------")
for section in ("total", "latin", "non_latin"):
    block = stats[section]
    print(
        f"  {section:10} shared={block['shared']:2d}  "
        f"min-based={block['pct_min']:5.1f}%  "
        f"of A={block['pct_of_a']:5.1f}%  of B={block['pct_of_b']:5.1f}%"
    )
