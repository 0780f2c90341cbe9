import sys

import pytest

TINY_WORDS = [
    "the", "woman", "sees", "her", "parents", "once", "a", "week", "sky", "is",
    "blue", "man", "thinks", "answer", "statement", "about", "item", "room",
    "clerk", "stacks", "boxes", "topic", "passage", "plain", "words", "level",
    "water", "rises", "daily", "often", "because", "harbor", "bright", "city",
]


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory) -> str:
    """A word-level seq2seq checkpoint with random weights, built locally.

    The vocabulary contains no "?" so generations are statement-shaped by
    construction; weights are seeded for reproducibility.
    """
    import torch
    from tokenizers import Tokenizer
    from tokenizers.models import WordLevel
    from tokenizers.pre_tokenizers import Whitespace
    from transformers import BartConfig, BartForConditionalGeneration, PreTrainedTokenizerFast

    target = tmp_path_factory.mktemp("tiny_ckpt")
    vocab = {"<pad>": 0, "<s>": 1, "</s>": 2, "<unk>": 3}
    for word in TINY_WORDS:
        vocab[word] = len(vocab)
    tokenizer = Tokenizer(WordLevel(vocab, unk_token="<unk>"))
    tokenizer.pre_tokenizer = Whitespace()
    fast = PreTrainedTokenizerFast(
        tokenizer_object=tokenizer,
        bos_token="<s>",
        eos_token="</s>",
        pad_token="<pad>",
        unk_token="<unk>",
    )
    config = BartConfig(
        vocab_size=len(vocab),
        d_model=32,
        encoder_layers=1,
        decoder_layers=1,
        encoder_attention_heads=2,
        decoder_attention_heads=2,
        encoder_ffn_dim=64,
        decoder_ffn_dim=64,
        max_position_embeddings=256,
        pad_token_id=0,
        bos_token_id=1,
        eos_token_id=2,
        decoder_start_token_id=2,
        forced_bos_token_id=None,
    )
    torch.manual_seed(7)
    model = BartForConditionalGeneration(config)
    model.save_pretrained(target)
    fast.save_pretrained(target)
    return str(target)


@pytest.fixture(scope="session")
def backend_argv(tiny_checkpoint):
    return [sys.executable, "-m", "nlibackend", "--model", tiny_checkpoint]
