"""Words in the three-strand braid group.

Text grammar: whitespace-separated tokens ``1``, ``2``, ``1'``, ``2'``; the
apostrophe marks an inverse generator. Blank text is the identity word.
Words are kept exactly as written; ``free_reduce`` cancels adjacent inverse
pairs but no braid-relation rewriting is ever done here.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

STRANDS = 3


class BraidSyntaxError(ValueError):
    """Raised for text that is not a braid word."""

    def __init__(self, token: str, position: int, reason: str):
        self.token = token
        self.position = position
        super().__init__(f"bad braid token {token!r} at position {position}: {reason}")


@dataclass(frozen=True, slots=True)
class BraidGenerator:
    index: int  # 1 or 2
    sign: int = 1  # +1 for sigma_i, -1 for its inverse

    def __post_init__(self):
        if self.index not in (1, 2):
            raise ValueError(f"B3 has generators 1 and 2, got {self.index}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def inverse(self) -> BraidGenerator:
        return BraidGenerator(self.index, -self.sign)

    def __str__(self):
        return f"{self.index}'" if self.sign < 0 else str(self.index)


@dataclass(frozen=True, slots=True)
class BraidWord:
    letters: tuple[BraidGenerator, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> BraidWord:
        return cls(tuple(BraidGenerator(i, s) for i, s in pairs))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: BraidWord) -> BraidWord:
        return concat(self, other)

    def __str__(self):
        return serialize(self)

    def is_identity(self) -> bool:
        return not self.letters

    def is_reduced(self) -> bool:
        return all(a != b.inverse for a, b in zip(self.letters, self.letters[1:]))


IDENTITY = BraidWord()
SIGMA1 = BraidWord((BraidGenerator(1),))
SIGMA2 = BraidWord((BraidGenerator(2),))


def parse_braid_word(text: str) -> BraidWord:
    """Parse the token grammar into a word, without reducing it.

    >>> str(parse_braid_word("1 2' 1"))
    "1 2' 1"
    """
    letters = []
    for pos, token in enumerate(text.split()):
        body, sign = token, 1
        if token.endswith("'"):
            body, sign = token[:-1], -1
        if body not in ("1", "2"):
            if body.isdigit():
                reason = "generator index must be 1 or 2"
            elif "'" in body:
                reason = "malformed inverse suffix"
            else:
                reason = "unexpected characters"
            raise BraidSyntaxError(token, pos, reason)
        letters.append(BraidGenerator(int(body), sign))
    return BraidWord(tuple(letters))


def serialize(w: BraidWord) -> str:
    return " ".join(str(g) for g in w.letters)


def free_reduce(w: BraidWord) -> BraidWord:
    stack: list[BraidGenerator] = []
    for g in w.letters:
        if stack and stack[-1] == g.inverse:
            stack.pop()
        else:
            stack.append(g)
    return BraidWord(tuple(stack))


def concat(u: BraidWord, v: BraidWord) -> BraidWord:
    return BraidWord(u.letters + v.letters)


def invert(w: BraidWord) -> BraidWord:
    return BraidWord(tuple(g.inverse for g in reversed(w.letters)))


def exponent_sum(w: BraidWord) -> int:
    return sum(g.sign for g in w.letters)


def random_word(length: int, rng: random.Random | None = None) -> BraidWord:
    rng = rng or random.Random()
    return BraidWord.from_pairs((rng.choice((1, 2)), rng.choice((1, -1))) for _ in range(length))


def as_word(w: BraidWord | str | Sequence[int]) -> BraidWord:
    """Accept a word, grammar text, or a list of signed indices like ``[1, -2]``."""
    if isinstance(w, BraidWord):
        return w
    if isinstance(w, str):
        return parse_braid_word(w)
    return BraidWord.from_pairs((abs(i), 1 if i > 0 else -1) for i in w)
