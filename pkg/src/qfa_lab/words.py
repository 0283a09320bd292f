"""Words over finite alphabets and length-lexicographic enumeration."""

from __future__ import annotations

from itertools import product
from typing import Iterator, Sequence

Word = tuple[str, ...]

EMPTY_MARKERS = ("", "ε", "eps")


def as_word(word: str | Sequence[str], alphabet: Sequence[str]) -> Word:
    """Normalise ``word`` to a tuple of letters and check it against ``alphabet``.

    A plain string is split into characters when every letter is a single
    character; otherwise it must be comma separated (``"a1,a2"``).
    """
    if isinstance(word, str):
        if word in EMPTY_MARKERS:
            letters: Word = ()
        elif all(len(a) == 1 for a in alphabet) and "," not in word:
            letters = tuple(word)
        else:
            letters = tuple(x.strip() for x in word.split(",") if x.strip())
    else:
        letters = tuple(word)
    bad = [x for x in letters if x not in alphabet]
    if bad:
        raise ValueError(f"letters {bad} not in alphabet {list(alphabet)}")
    return letters


def show(word: Sequence[str]) -> str:
    if not word:
        return "ε"
    if all(len(x) == 1 for x in word):
        return "".join(word)
    return ",".join(word)


def iter_words(alphabet: Sequence[str], max_len: int) -> Iterator[Word]:
    """All words of length <= max_len, shortest first, then in alphabet order."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)


def corpus_size(alphabet: Sequence[str], max_len: int) -> int:
    k = len(alphabet)
    return sum(k ** n for n in range(max_len + 1))
