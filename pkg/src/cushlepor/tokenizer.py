"""Word tokenization for metric scoring.

The default tokenizer case-folds the text, splits on whitespace, and then
detaches leading/trailing punctuation characters (Unicode category P*) from
each chunk, so "Hello, world." becomes [hello, ",", world, "."]. Punctuation
inside a word (don't, well-known) is left alone. Pre-tokenized input can
bypass this via :func:`split_pretokenized`.

Positions are 1-based wherever this package reports them.
"""

from __future__ import annotations

import unicodedata


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[str]:
    """Tokenize raw text into case-folded word and punctuation tokens.

    Deterministic; an empty or all-whitespace string yields [].
    """
    tokens: list[str] = []
    for chunk in text.casefold().split():
        lead: list[str] = []
        while chunk and _is_punct(chunk[0]):
            lead.append(chunk[0])
            chunk = chunk[1:]
        trail: list[str] = []
        while chunk and _is_punct(chunk[-1]):
            trail.append(chunk[-1])
            chunk = chunk[:-1]
        trail.reverse()
        tokens.extend(lead)
        if chunk:
            tokens.append(chunk)
        tokens.extend(trail)
    return tokens


def split_pretokenized(text: str) -> list[str]:
    """Whitespace-only split for input that is already tokenized.

    Still case-folds so that matching stays case-insensitive.
    """
    return text.casefold().split()
