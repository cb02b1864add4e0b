"""Freely reduced words in a free group on named generators.

Text form: whitespace-separated generators with optional integer exponents,
e.g. "x1 x2 x1^-1 x2^-1" or "a^3 b^-2".  The canonical form compresses runs
of equal letters into one exponent and never contains adjacent inverse
pairs.  The empty string (or "1") is the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

_GEN_RE = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


class WordError(ValueError):
    """Domain error for free-group words."""


def _reduce(letters: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    stack: list[tuple[str, int]] = []
    for gen, exp in letters:
        if exp not in (1, -1):
            raise WordError(f"letters must carry exponent ±1, got {exp}")
        if stack and stack[-1][0] == gen and stack[-1][1] == -exp:
            stack.pop()
        else:
            stack.append((gen, exp))
    return tuple(stack)


@dataclass(frozen=True, slots=True)
class Word:
    """A freely reduced word; letters are (generator, ±1) pairs."""

    letters: tuple[tuple[str, int], ...] = ()

    @staticmethod
    def identity() -> "Word":
        return Word(())

    @staticmethod
    def generator(name: str, exponent: int = 1) -> "Word":
        if not _GEN_RE.match(name):
            raise WordError(f"bad generator name {name!r}")
        if exponent == 0:
            return Word(())
        sign = 1 if exponent > 0 else -1
        return Word(tuple((name, sign) for _ in range(abs(exponent))))

    @staticmethod
    def from_letters(letters: Iterable[tuple[str, int]]) -> "Word":
        return Word(_reduce(letters))

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __mul__(self, other: "Word") -> "Word":
        return Word(_reduce(self.letters + other.letters))

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def commutator(self, other: "Word") -> "Word":
        return self * other * self.inverse() * other.inverse()

    def generators(self) -> set[str]:
        return {g for g, _ in self.letters}

    def exponent_sum(self, name: str) -> int:
        return sum(e for g, e in self.letters if g == name)

    def __str__(self) -> str:
        if not self.letters:
            return ""
        chunks: list[str] = []
        run_gen, run_exp = self.letters[0]
        run_len = run_exp
        for gen, exp in self.letters[1:]:
            if gen == run_gen and (exp > 0) == (run_len > 0):
                run_len += exp
            else:
                chunks.append(run_gen if run_len == 1 else f"{run_gen}^{run_len}")
                run_gen, run_len = gen, exp
        chunks.append(run_gen if run_len == 1 else f"{run_gen}^{run_len}")
        return " ".join(chunks)


def parse_word(text: str) -> Word:
    """Parse the word grammar; '' and '1' mean the identity."""
    text = text.strip()
    if text in ("", "1"):
        return Word.identity()
    letters: list[tuple[str, int]] = []
    for token in text.split():
        name, caret, exp_s = token.partition("^")
        if not _GEN_RE.match(name):
            raise WordError(f"bad generator name {name!r}")
        if caret:
            try:
                exp = int(exp_s)
            except ValueError as exc:
                raise WordError(f"bad exponent {exp_s!r} on {name!r}") from exc
        else:
            exp = 1
        sign = 1 if exp > 0 else -1
        letters.extend((name, sign) for _ in range(abs(exp)))
    return Word(_reduce(letters))
