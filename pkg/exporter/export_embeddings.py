#!/usr/bin/env python3
"""Slice the input-embedding matrix out of a published checkpoint.

Writes three files into the output directory, in the interchange
formats the analysis toolkit loads (npy float32 C-order + vocab JSON):

    matrix.npy     V x d float32, row i = embedding of token id i
    vocab.json     ordered token array, position = token id
    manifest.json  model id, revision, shapes, scheme, output checksums

The exporter never analyzes anything; data flows one way, into the
toolkit.

    python3 export_embeddings.py --model google/mt5-small --out exports/mt5-small
"""

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

EXPORTER_VERSION = "0.1.0"

# Attribute paths searched when the generic accessor comes back empty,
# named in the error so failures on exotic architectures are actionable.
EMBEDDING_PATHS = (
    "get_input_embeddings()",
    "shared",
    "embed_tokens",
    "transformer.wte",
    "embeddings.word_embeddings",
)


class ExportError(RuntimeError):
    pass


def extract_embedding_matrix(model) -> np.ndarray:
    """Input-embedding weights as float32, or ExportError naming the search."""
    embedding = model.get_input_embeddings()
    weight = getattr(embedding, "weight", None) if embedding is not None else None
    if weight is None:
        raise ExportError(
            "model exposes no standalone input-embedding tensor; "
            f"searched: {', '.join(EMBEDDING_PATHS)}"
        )
    return weight.detach().cpu().to(dtype=__import__("torch").float32).numpy()


def ordered_tokens(tokenizer, n_rows: int) -> list[str]:
    """Token strings by id, dense 0..V-1, V <= n_rows.

    Rows past the largest tokenizer id are padding and are dropped; id
    gaps (rare) are filled with unique placeholders so row alignment
    survives.
    """
    vocab = tokenizer.get_vocab()
    max_id = max(vocab.values())
    if max_id >= n_rows:
        raise ExportError(
            f"tokenizer id {max_id} exceeds the {n_rows} embedding rows"
        )
    by_id: dict[int, str] = {}
    for tok, i in vocab.items():
        if i in by_id:
            raise ExportError(f"tokenizer assigns id {i} twice")
        by_id[i] = tok
    return [by_id.get(i, f"<unused_{i}>") for i in range(max_id + 1)]


def detect_scheme(tokens: list[str]) -> str:
    """sentencepiece vs byte-level BPE, judged by the space-marker style."""
    has_sp = any(t.startswith("▁") for t in tokens)
    has_bpe = any(t.startswith("Ġ") for t in tokens)
    if has_sp and not has_bpe:
        return "sentencepiece"
    if has_bpe and not has_sp:
        return "byte_bpe"
    return "sentencepiece"


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def export(model_id: str, out_dir, revision=None) -> dict:
    """Fetch checkpoint + tokenizer, write matrix/vocab/manifest, return manifest."""
    from transformers import AutoModel, AutoTokenizer

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    tokenizer = AutoTokenizer.from_pretrained(model_id, revision=revision)
    model = AutoModel.from_pretrained(model_id, revision=revision)
    model.eval()

    matrix = extract_embedding_matrix(model)
    if matrix.ndim != 2:
        raise ExportError(f"embedding tensor has rank {matrix.ndim}, expected 2")
    tokens = ordered_tokens(tokenizer, matrix.shape[0])
    matrix = np.ascontiguousarray(matrix[: len(tokens)], dtype=np.float32)

    matrix_path = out / "matrix.npy"
    np.save(matrix_path, matrix)
    vocab_path = out / "vocab.json"
    with open(vocab_path, "w", encoding="utf-8") as fh:
        json.dump(tokens, fh, ensure_ascii=False)

    resolved = getattr(model.config, "_commit_hash", None) or revision
    manifest = {
        "model": model_id,
        "revision": resolved,
        "matrix_shape": list(matrix.shape),
        "vocab_size": len(tokens),
        "scheme": detect_scheme(tokens),
        "files": {
            "matrix.npy": sha256_file(matrix_path),
            "vocab.json": sha256_file(vocab_path),
        },
        "exporter_version": EXPORTER_VERSION,
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--model", required=True, help="checkpoint id or local path")
    parser.add_argument("--revision", default=None, help="branch, tag, or commit")
    parser.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)
    try:
        manifest = export(args.model, args.out, revision=args.revision)
    except ExportError as exc:
        print(f"export failed: {exc}", file=sys.stderr)
        return 2
    print(
        f"exported {manifest['model']}: {manifest['matrix_shape'][0]} x "
        f"{manifest['matrix_shape'][1]} ({manifest['scheme']})"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
