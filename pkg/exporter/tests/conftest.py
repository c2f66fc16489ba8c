import json

import pytest


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory):
    """A small multilingual-flavored checkpoint saved to disk.

    Exercises the same load/slice/write path as a hub download without
    needing network access.
    """
    from tokenizers import Tokenizer
    from tokenizers.models import WordLevel
    from tokenizers.pre_tokenizers import Whitespace
    from transformers import PreTrainedTokenizerFast, T5Config, T5Model

    tokens = (
        ["<pad>", "</s>", "<unk>"]
        + ["▁the", "▁dog", "▁говорит", "▁мир", "▁犬", "▁猫", "▁123", "▁!"]
        + [f"▁tok{i}" for i in range(21)]
    )
    vocab = {t: i for i, t in enumerate(tokens)}

    directory = tmp_path_factory.mktemp("tiny-model")
    tok = Tokenizer(WordLevel(vocab, unk_token="<unk>"))
    tok.pre_tokenizer = Whitespace()
    fast = PreTrainedTokenizerFast(
        tokenizer_object=tok,
        unk_token="<unk>",
        pad_token="<pad>",
        eos_token="</s>",
    )
    fast.save_pretrained(directory)

    config = T5Config(
        vocab_size=len(tokens),
        d_model=16,
        d_ff=32,
        d_kv=8,
        num_layers=1,
        num_heads=2,
        num_decoder_layers=1,
    )
    T5Model(config).save_pretrained(directory)

    (directory / "expected_tokens.json").write_text(
        json.dumps(tokens, ensure_ascii=False), encoding="utf-8"
    )
    return directory
