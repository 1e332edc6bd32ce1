"""Letters, words, free and cyclic reduction, and symmetrized relator sets.

A letter is a nonzero int: ``+(g+1)`` is generator ``g``, ``-(g+1)`` its
formal inverse.  Generator names are a parse-time concern and never appear
here.  Words are immutable tuples of letters, so they hash and compare fast
and are safe to share across workers.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple

from .errors import EmptyRelator


class Letter(NamedTuple):
    """A signed generator: index into the owning generator list plus a sign."""

    gen: int
    sign: int

    def encode(self) -> int:
        return (self.gen + 1) * self.sign

    @staticmethod
    def decode(x: int) -> "Letter":
        if x == 0:
            raise ValueError("letter encoding must be a nonzero int")
        return Letter(abs(x) - 1, 1 if x > 0 else -1)


class Word(tuple):
    """An immutable sequence of letters (signed ints)."""

    __slots__ = ()

    def __new__(cls, letters: Iterable[int] = ()) -> "Word":
        w = super().__new__(cls, letters)
        for x in w:
            if not isinstance(x, int) or x == 0:
                raise ValueError(f"bad letter {x!r}: letters are nonzero ints")
        return w

    def inverse(self) -> "Word":
        return Word(-x for x in reversed(self))

    def is_freely_reduced(self) -> bool:
        return all(self[i] != -self[i + 1] for i in range(len(self) - 1))

    def is_cyclically_reduced(self) -> bool:
        if not self.is_freely_reduced():
            return False
        return len(self) < 2 or self[0] != -self[-1]

    def cyclic_shift(self, k: int) -> "Word":
        if not self:
            return self
        k %= len(self)
        return Word(self[k:] + self[:k])

    def cyclic_shifts(self) -> Iterator["Word"]:
        for k in range(len(self)):
            yield self.cyclic_shift(k)

    def primitive_period(self) -> int:
        """Smallest p dividing len(self) with self equal to its shift by p."""
        n = len(self)
        for p in range(1, n + 1):
            if n % p == 0 and self.cyclic_shift(p) == self:
                return p
        return n

    def max_generator(self) -> int:
        return max((abs(x) - 1 for x in self), default=-1)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Word({tuple(self)!r})"


EPSILON = Word()


def concat(*ws: Word) -> Word:
    out: list[int] = []
    for w in ws:
        out.extend(w)
    return Word(out)


def free_reduce(w: Word) -> Word:
    """The unique freely reduced word equal to w in the free group."""
    stack: list[int] = []
    for x in w:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return Word(stack)


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split w as conjugator * core * conjugator^-1 with core cyclically reduced.

    The core is empty iff w freely reduces to the empty word.
    """
    core = free_reduce(w)
    prefix: list[int] = []
    while len(core) >= 2 and core[0] == -core[-1]:
        prefix.append(core[0])
        core = Word(core[1:-1])
    return core, Word(prefix)


def symmetrize(relators: Iterable[Word]) -> frozenset[Word]:
    """All distinct cyclic shifts of the relators and of their inverses.

    Set semantics: shifts of a proper power coincide and collapse, so a
    relator u^k contributes 2*|u| words, not 2*|u^k|.
    """
    out: set[Word] = set()
    for r in relators:
        if len(r) == 0:
            raise EmptyRelator("empty relator in symmetrized set")
        for v in (r, r.inverse()):
            out.update(v.cyclic_shifts())
    return frozenset(out)


def cyclic_word_key(w: Word) -> Word:
    """Canonical representative of w's class under shift and inversion."""
    best = min(w.cyclic_shifts(), default=w)
    inv = w.inverse()
    best_inv = min(inv.cyclic_shifts(), default=inv)
    return min(best, best_inv)


def render(w: Word, names: list[str] | tuple[str, ...]) -> str:
    """Human-readable form of w over the given generator names."""
    if not w:
        return "1"
    parts: list[str] = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = names[abs(w[i]) - 1]
        exp = (j - i) * (1 if w[i] > 0 else -1)
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    # Spaces keep multi-character names unambiguous on re-parse.
    sep = "" if all(len(n) == 1 for n in names) else " "
    return sep.join(parts)
