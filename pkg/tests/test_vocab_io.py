import json

import numpy as np
import pytest

from embedgeo import (
    EmptyAlignment,
    ParseError,
    SchemaError,
    ShapeError,
    align,
    load_vocab,
    normalize_token,
    overlap_stats,
    submatrix,
)
from embedgeo.vocab_io import Vocabulary


def write_vocab(path, payload):
    path.write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")
    return path


class TestNormalizeToken:
    def test_sentencepiece_identity(self):
        assert normalize_token("the", "sentencepiece") == "the"
        assert normalize_token("▁the", "sentencepiece") == "▁the"

    def test_byte_bpe_space_marker(self):
        assert normalize_token("Ġthe", "byte_bpe") == "▁the"
        assert normalize_token("Ġ", "byte_bpe") == "▁"

    def test_byte_bpe_plain_word(self):
        assert normalize_token("the", "byte_bpe") == "the"

    def test_byte_bpe_multibyte_utf8(self):
        # 'é' is 0xC3 0xA9; its byte stand-ins are 'Ã©'
        assert normalize_token("Ã©", "byte_bpe") == "é"

    def test_byte_bpe_undecodable_kept_escaped(self):
        # a lone continuation byte cannot decode
        token = "".join(
            ch for ch, b in _char_map_items() if b == 0xA9
        )
        out = normalize_token(token, "byte_bpe")
        assert out == "<0xA9>"

    def test_unknown_scheme(self):
        with pytest.raises(ValueError):
            normalize_token("x", "wordpiece")


def _char_map_items():
    from embedgeo.vocab_io import _CHAR_TO_BYTE

    return _CHAR_TO_BYTE.items()


class TestLoadVocab:
    def test_mapping_form(self, tmp_path):
        path = write_vocab(tmp_path / "v.json", {"a": 0, "b": 1})
        vocab = load_vocab(path)
        assert len(vocab) == 2
        assert vocab.tokens == ["a", "b"]
        assert vocab.index == {"a": 0, "b": 1}

    def test_array_form(self, tmp_path):
        path = write_vocab(tmp_path / "v.json", ["x", "y", "z"])
        assert load_vocab(path).tokens == ["x", "y", "z"]

    def test_duplicates_kept_with_suffix(self, tmp_path):
        path = write_vocab(tmp_path / "v.json", ["a", "a"])
        vocab = load_vocab(path)
        assert len(vocab) == 2
        assert vocab.tokens[0] == "a"
        assert vocab.tokens[1] != "a"
        assert vocab.report.n_collisions == 1

    def test_collision_after_normalization(self, tmp_path):
        # Ġx and ▁x collide once byte-BPE is normalized
        path = write_vocab(tmp_path / "v.json", ["Ġx", "▁x"])
        vocab = load_vocab(path, scheme="byte_bpe")
        assert len(vocab) == 2
        assert vocab.report.n_collisions == 1

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ParseError):
            load_vocab(path)

    def test_non_dense_ids(self, tmp_path):
        path = write_vocab(tmp_path / "v.json", {"a": 0, "b": 2})
        with pytest.raises(SchemaError):
            load_vocab(path)

    def test_wrong_payload_type(self, tmp_path):
        path = write_vocab(tmp_path / "v.json", 42)
        with pytest.raises(SchemaError):
            load_vocab(path)


class TestAlign:
    def test_identical_vocabularies(self):
        v = Vocabulary(["a", "b", "c"], model_name="m")
        alignment = align(v, Vocabulary(["a", "b", "c"], model_name="n"))
        assert len(alignment) == 3

    def test_disjoint_raises(self):
        with pytest.raises(EmptyAlignment):
            align(Vocabulary(["a"]), Vocabulary(["b"]))

    def test_sorted_by_token_bytes(self):
        a = Vocabulary(["z", "é", "a"])
        b = Vocabulary(["é", "a", "z"])
        alignment = align(a, b)
        toks = alignment.tokens
        assert toks == sorted(toks, key=lambda t: t.encode("utf-8"))

    def test_row_maps_valid(self):
        a = Vocabulary(["p", "q", "r"])
        b = Vocabulary(["r", "p"])
        alignment = align(a, b)
        for tok, ra, rb in alignment.entries:
            assert a.tokens[ra] == tok
            assert b.tokens[rb] == tok

    def test_symmetry(self):
        a = Vocabulary(["a", "b", "x"], model_name="a")
        b = Vocabulary(["b", "x", "q"], model_name="b")
        assert align(a, b).tokens == align(b, a).tokens


class TestOverlapStats:
    def test_identical(self):
        v = Vocabulary(["a", "b"])
        stats = overlap_stats(v, Vocabulary(["a", "b"]))
        assert stats["total"]["pct_min"] == 100.0

    def test_containment(self):
        small = Vocabulary(["a", "b"])
        big = Vocabulary(["a", "b", "c", "d"])
        stats = overlap_stats(small, big)
        assert stats["total"]["pct_min"] == 100.0
        assert stats["total"]["pct_of_b"] == 50.0
        assert stats["total"]["pct_of_a"] == 100.0

    def test_latin_split(self):
        a = Vocabulary(["ab", "да", "12"])
        b = Vocabulary(["ab", "да", "34"])
        stats = overlap_stats(a, b)
        assert stats["latin"]["shared"] == 1
        assert stats["non_latin"]["shared"] == 1
        assert stats["total"]["shared"] == 2

    def test_by_category(self):
        a = Vocabulary(["ab", "да", "12"])
        b = Vocabulary(["ab", "да", "34"])
        stats = overlap_stats(a, b, by_category=True)
        assert stats["by_category"]["LATIN"]["shared"] == 1
        assert stats["by_category"]["CYRILLIC"]["shared"] == 1
        assert stats["by_category"]["N"]["shared"] == 0


class TestSubmatrix:
    def test_full_selection_identity(self):
        m = np.arange(12, dtype=np.float32).reshape(4, 3)
        assert np.array_equal(submatrix(m, range(4)), m)

    def test_permutation(self):
        m = np.arange(9, dtype=np.float32).reshape(3, 3)
        out = submatrix(m, [2, 0])
        assert np.array_equal(out[0], m[2])
        assert np.array_equal(out[1], m[0])

    def test_rowwise_equality_property(self):
        rng = np.random.default_rng(5)
        m = rng.standard_normal((10, 4)).astype(np.float32)
        rows = rng.integers(0, 10, size=7)
        out = submatrix(m, rows)
        for i, r in enumerate(rows):
            assert np.array_equal(out[i], m[r])

    def test_empty_selection(self):
        with pytest.raises(ShapeError):
            submatrix(np.ones((2, 2), dtype=np.float32), [])

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            submatrix(np.ones((2, 2), dtype=np.float32), [0, 5])

    def test_returns_copy(self):
        m = np.zeros((2, 2), dtype=np.float32)
        out = submatrix(m, [0])
        out[0, 0] = 7
        assert m[0, 0] == 0
