"""Word problem for metric small-cancellation presentations.

Dehn's procedure: repeatedly freely reduce and replace any subword that
covers strictly more than half of a symmetrized relator by the inverse of
the remainder.  For presentations passing the 1/6 condition this decides
triviality; the replacement strategy is leftmost-longest so results are
deterministic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .errors import BudgetExceeded, NotSmallCancellation
from .presentation import Presentation, check_small_cancellation
from .words import Word, free_reduce, symmetrize

DEFAULT_NODE_BUDGET = 10**6


def _env_budget(default: int) -> int:
    raw = os.environ.get("WALLKIT_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return default


@dataclass
class _TrieNode:
    children: dict[int, "_TrieNode"] = field(default_factory=dict)
    # (relator length, replacement word) when this prefix covers > half of a
    # symmetrized relator; the canonically least relator wins on ties.
    rewrite: tuple[int, Word] | None = None
    rewrite_key: tuple | None = None


class DehnMachine:
    """Immutable rewrite engine for one presentation."""

    def __init__(self, presentation: Presentation, *, node_budget: int | None = None, verify: bool = True):
        self.presentation = presentation
        self.node_budget = _env_budget(node_budget if node_budget is not None else DEFAULT_NODE_BUDGET)
        index_size = sum(2 * r.primitive_period() * len(r) for r in presentation.relators)
        if index_size > max(self.node_budget, DEFAULT_NODE_BUDGET):
            raise BudgetExceeded(
                f"symmetrized index needs ~{index_size} nodes; raise the node budget to allow it"
            )
        self.symmetrized = tuple(sorted(symmetrize(presentation.relators))) if presentation.relators else ()
        self.half_lengths = {r: -(-len(r) // 2) for r in self.symmetrized}
        self.small_cancellation_ok = True
        if verify and presentation.relators:
            report = check_small_cancellation(presentation, Fraction(1, 6))
            self.small_cancellation_ok = report.passed
        self._root = _TrieNode()
        for r in self.symmetrized:
            node = self._root
            for depth, letter in enumerate(r, start=1):
                node = node.children.setdefault(letter, _TrieNode())
                if 2 * depth > len(r):
                    repl = Word(r[depth:]).inverse()
                    cand = (len(r), repl)
                    if node.rewrite is None or (len(r), tuple(r)) < node.rewrite_key:
                        node.rewrite = cand
                        node.rewrite_key = (len(r), tuple(r))

    def _require_ok(self):
        if not self.small_cancellation_ok:
            raise NotSmallCancellation(
                "presentation did not pass the strict 1/6 piece condition"
            )

    def longest_rewrite_at(self, w: Word, pos: int) -> tuple[int, Word] | None:
        """(matched length, replacement) for the longest >half match at pos."""
        node = self._root
        best: tuple[int, Word] | None = None
        depth = 0
        for i in range(pos, len(w)):
            node = node.children.get(w[i])
            if node is None:
                break
            depth += 1
            if node.rewrite is not None:
                best = (depth, node.rewrite[1])
        return best

    def prefix_matches(self, w: Word, pos: int) -> list[tuple[int, int]]:
        """All (length, relator length) relator-prefix matches at pos.

        Exposed for validation against naive search.
        """
        out = []
        for r in self.symmetrized:
            n = 0
            while pos + n < len(w) and n < len(r) and w[pos + n] == r[n]:
                n += 1
            if n:
                out.append((n, len(r)))
        return out


def dehn_reduce(w: Word, m: DehnMachine) -> Word:
    """Leftmost-longest Dehn reduction; the result has no >half relator subword."""
    m._require_ok()
    cur = free_reduce(w)
    while True:
        hit = None
        for pos in range(len(cur)):
            found = m.longest_rewrite_at(cur, pos)
            if found is not None:
                hit = (pos, found)
                break
        if hit is None:
            return cur
        pos, (length, repl) = hit
        cur = free_reduce(Word(cur[:pos] + tuple(repl) + cur[pos + length:]))


def is_trivial(w: Word, m: DehnMachine) -> bool:
    return len(dehn_reduce(w, m)) == 0


def is_equal(w1: Word, w2: Word, m: DehnMachine) -> bool:
    return is_trivial(Word(tuple(w1) + tuple(w2.inverse())), m)


def letter_rank(x: int) -> int:
    """Order a < a^-1 < b < b^-1 < ..."""
    return 2 * (abs(x) - 1) + (0 if x > 0 else 1)


def shortlex_key(w: Word) -> tuple:
    return (len(w), tuple(letter_rank(x) for x in w))


def iter_reduced_words(num_gens: int, max_len: int) -> Iterator[Word]:
    """Freely reduced words in shortlex order."""
    letters = sorted((s * (g + 1) for g in range(num_gens) for s in (1, -1)), key=letter_rank)
    level: list[tuple[int, ...]] = [()]
    yield Word()
    for _ in range(max_len):
        nxt: list[tuple[int, ...]] = []
        for w in level:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nw = w + (x,)
                nxt.append(nw)
                yield Word(nw)
        level = nxt


def shortlex_normal_form(w: Word, m: DehnMachine) -> Word:
    """Shortlex-least word equal to w, by breadth-first search with the
    triviality oracle.  Raises BudgetExceeded past the node budget."""
    m._require_ok()
    reduced = dehn_reduce(w, m)
    if len(reduced) == 0:
        return reduced
    if not m.presentation.relators:
        return reduced
    target_inv = reduced.inverse()
    count = 0
    for cand in iter_reduced_words(len(m.presentation.generators), len(reduced)):
        count += 1
        if count > m.node_budget:
            raise BudgetExceeded(f"shortlex search frontier exceeded {m.node_budget} words")
        if is_trivial(Word(tuple(cand) + tuple(target_inv)), m):
            return cand
    return reduced
