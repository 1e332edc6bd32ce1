"""Presentation data model, piece computation, and metric-condition checks.

Pieces are computed on cyclic words: a piece is a common subword of two
symmetrized relator occurrences that are not identified by a rotation of a
relator onto itself (which only happens for proper powers).  Occurrences in
the inverse cycle are searched as well.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import BadParams, EmptyRelator, ParseError, UnknownGenerator
from .words import Word, cyclic_reduce, cyclic_word_key, free_reduce, render

DEFAULT_LAMBDA = Fraction(1, 6)


@dataclass(frozen=True)
class Presentation:
    """Generators plus cyclically reduced, deduplicated relators."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    lam_target: Fraction = DEFAULT_LAMBDA
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if not (0 < self.lam_target <= Fraction(1, 6)):
            raise BadParams(f"lambda target {self.lam_target} outside (0, 1/6]")
        seen: dict[Word, int] = {}
        kept: list[Word] = []
        for r in self.relators:
            if len(r) == 0:
                raise EmptyRelator("relators must be nonempty")
            if not r.is_cyclically_reduced():
                raise BadParams(f"relator {tuple(r)} is not cyclically reduced")
            if r.max_generator() >= len(self.generators):
                raise UnknownGenerator(f"relator {tuple(r)} uses an unknown generator")
            key = cyclic_word_key(r)
            if key not in seen:
                seen[key] = len(kept)
                kept.append(r)
        object.__setattr__(self, "relators", tuple(kept))

    def word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def show(self, w: Word) -> str:
        return render(w, self.generators)


# ---------------------------------------------------------------------------
# Parsing


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_SUP_INV = "⁻¹"  # superscript "-1"


def _segment_names(run: str, names: Sequence[str], pos: int) -> list[str]:
    """Split a juxtaposed name run into generator names (with backtracking)."""
    by_len = sorted(set(names), key=len, reverse=True)
    memo: dict[int, list[str] | None] = {}

    def go(i: int) -> list[str] | None:
        if i == len(run):
            return []
        if i in memo:
            return memo[i]
        for name in by_len:
            if run.startswith(name, i):
                rest = go(i + len(name))
                if rest is not None:
                    memo[i] = [name] + rest
                    return memo[i]
        memo[i] = None
        return None

    out = go(0)
    if out is None:
        raise UnknownGenerator(f"cannot read {run!r} at column {pos} over generators {list(names)}")
    return out


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse juxtaposed generator names with ^n powers and (...)^n groups."""
    index = {n: i for i, n in enumerate(names)}
    src = text.replace(_SUP_INV, "^-1")
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(src) and src[pos].isspace():
            pos += 1

    def parse_power() -> int:
        nonlocal pos
        skip_ws()
        if pos < len(src) and src[pos] == "^":
            pos += 1
            skip_ws()
            m = re.match(r"-?\d+", src[pos:])
            if not m:
                raise ParseError(f"expected integer exponent at column {pos} in {text!r}")
            pos += m.end()
            return int(m.group())
        return 1

    def parse_seq(depth: int) -> list[int]:
        nonlocal pos
        out: list[int] = []
        while True:
            skip_ws()
            if pos >= len(src):
                if depth:
                    raise ParseError(f"unbalanced '(' in {text!r}")
                return out
            ch = src[pos]
            if ch == ")":
                if not depth:
                    raise ParseError(f"unbalanced ')' in {text!r}")
                return out
            if ch == "(":
                pos += 1
                inner = parse_seq(depth + 1)
                if pos >= len(src) or src[pos] != ")":
                    raise ParseError(f"unbalanced '(' in {text!r}")
                pos += 1
                out.extend(_power(inner, parse_power()))
                continue
            m = _NAME_RE.match(src, pos)
            if not m:
                raise ParseError(f"unexpected character {ch!r} at column {pos} in {text!r}")
            run = m.group()
            pos = m.end()
            exp = parse_power()
            parts = _segment_names(run, names, pos)
            letters = [index[p] + 1 for p in parts]
            if exp != 1 and len(parts) > 1:
                # power applies to the whole run, e.g. "ab^7" reads as (ab)^7
                # only when parenthesised; here it binds to the last name.
                head, last = letters[:-1], letters[-1:]
                out.extend(head)
                out.extend(_power(last, exp))
            else:
                out.extend(_power(letters, exp))
        return out

    def _power(seq: list[int], exp: int) -> list[int]:
        if exp >= 0:
            return seq * exp
        return [-x for x in reversed(seq)] * (-exp)

    letters = parse_seq(0)
    return Word(letters)


def parse_presentation(text: str) -> Presentation:
    """Read the line-oriented presentation format.

    Lines: ``gens: a b``, then ``rel: <word>`` lines, optional
    ``lambda: p/q``; ``#`` starts a comment.
    """
    gens: tuple[str, ...] | None = None
    relators: list[Word] = []
    lam = DEFAULT_LAMBDA
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"line {lineno}: expected 'key: value', got {raw!r}")
        key, _, value = line.partition(":")
        key = key.strip().lower()
        value = value.strip()
        if key == "gens":
            if gens is not None:
                raise ParseError(f"line {lineno}: duplicate gens line")
            gens = tuple(value.split())
            if not gens:
                raise ParseError(f"line {lineno}: empty generator list")
            for g in gens:
                if not _NAME_RE.fullmatch(g):
                    raise ParseError(f"line {lineno}: bad generator name {g!r}")
        elif key == "rel":
            if gens is None:
                raise ParseError(f"line {lineno}: rel before gens")
            w = parse_word(value, gens)
            core, _ = cyclic_reduce(w)
            if len(core) == 0:
                raise EmptyRelator(f"line {lineno}: relator {value!r} reduces to the empty word")
            relators.append(core)
        elif key == "lambda":
            try:
                lam = Fraction(value)
            except (ValueError, ZeroDivisionError) as e:
                raise ParseError(f"line {lineno}: bad lambda {value!r}") from e
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
    if gens is None:
        raise ParseError("missing gens line")
    return Presentation(gens, tuple(relators), lam)


def render_presentation(p: Presentation) -> str:
    lines = ["gens: " + " ".join(p.generators)]
    if p.lam_target != DEFAULT_LAMBDA:
        lines.append(f"lambda: {p.lam_target}")
    for r in p.relators:
        lines.append("rel: " + p.show(r))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Pieces

Occurrence = tuple[int, int, int]  # (relator id, orientation +1/-1, start mod period)


@dataclass(frozen=True)
class Piece:
    word: Word
    witnesses: tuple[Occurrence, Occurrence]

    @property
    def length(self) -> int:
        return len(self.word)


@dataclass
class PieceIndex:
    pieces: tuple[Piece, ...]
    max_by_relator: dict[int, int]
    ratio_by_relator: dict[int, Fraction]
    worst_by_relator: dict[int, Piece | None]


def _diagonal_runs(v1: Word, v2: Word, d: int, cap: int) -> list[tuple[int, int]]:
    """Maximal cyclic runs of agreement between v1[t] and v2[t+d].

    Returns (start t, length) pairs with length capped at cap; a full-cycle
    agreement is reported as the single run (0, cap).
    """
    n1, n2 = len(v1), len(v2)
    L = math.lcm(n1, n2)
    match = [v1[t % n1] == v2[(t + d) % n2] for t in range(L)]
    if all(match):
        return [(0, cap)]
    if not any(match):
        return []
    shift = match.index(False)
    rot = match[shift + 1:] + match[: shift + 1]  # starts right after a False
    runs: list[tuple[int, int]] = []
    i = 0
    while i < L:
        if rot[i]:
            j = i
            while j < L and rot[j]:
                j += 1
            runs.append(((shift + 1 + i) % L, min(j - i, cap)))
            i = j
        else:
            i += 1
    return runs


def compute_pieces(p: Presentation) -> PieceIndex:
    """All maximal pieces with witnesses, excluding isomorphic occurrence pairs.

    Occurrence pairs within one relator and orientation are distinct only
    modulo the relator's rotational symmetry (shift by its primitive period).
    Pieces are reported in one orientation (their inverses occur in the
    mirrored witnesses); lengths are capped at the shorter witness relator.
    """
    found: dict[tuple, Piece] = {}

    def record(word: Word, occ1: Occurrence, occ2: Occurrence):
        pair = tuple(sorted((occ1, occ2)))
        key = (word, pair)
        if key not in found:
            found[key] = Piece(word, pair)  # type: ignore[arg-type]

    def scan(rid1: int, v1: Word, per1: int, o1: int, rid2: int, v2: Word, per2: int, o2: int):
        same_stream = rid1 == rid2 and o1 == o2
        cap = min(len(v1), len(v2))
        n_diag = per1 if same_stream or rid1 == rid2 else math.gcd(per1, per2)
        for d in range(n_diag):
            if same_stream and d == 0:
                continue  # rotation of the relator onto itself
            for t, length in _diagonal_runs(v1, v2, d, cap):
                word = Word(v1[(t + k) % len(v1)] for k in range(length))
                occ1 = (rid1, o1, t % per1)
                occ2 = (rid2, o2, (t + d) % per2)
                record(word, occ1, occ2)

    rels = [(rid, r, r.primitive_period()) for rid, r in enumerate(p.relators)]
    for i, (rid1, r1, per1) in enumerate(rels):
        scan(rid1, r1, per1, 1, rid1, r1, per1, 1)
        scan(rid1, r1, per1, 1, rid1, r1.inverse(), per1, -1)
        for rid2, r2, per2 in rels[i + 1:]:
            scan(rid1, r1, per1, 1, rid2, r2, per2, 1)
            scan(rid1, r1, per1, 1, rid2, r2.inverse(), per2, -1)

    pieces = tuple(sorted(found.values(), key=lambda pc: (-pc.length, pc.word, pc.witnesses)))
    max_by: dict[int, int] = {rid: 0 for rid in range(len(p.relators))}
    worst: dict[int, Piece | None] = {rid: None for rid in range(len(p.relators))}
    for pc in pieces:
        for rid, _, _ in pc.witnesses:
            if pc.length > max_by[rid]:
                max_by[rid] = pc.length
                worst[rid] = pc
    ratio = {
        rid: Fraction(max_by[rid], len(p.relators[rid])) for rid in max_by
    }
    return PieceIndex(pieces, max_by, ratio, worst)


# ---------------------------------------------------------------------------
# Metric condition


@dataclass
class RelatorVerdict:
    rid: int
    relator_length: int
    max_piece: int
    ratio: Fraction
    passed: bool
    worst: Piece | None


@dataclass
class MetricReport:
    lam: Fraction
    entries: list[RelatorVerdict]
    passed: bool
    index: PieceIndex = field(repr=False)


def check_small_cancellation(p: Presentation, lam: Fraction | None = None) -> MetricReport:
    """Strict metric condition: every piece through r has length < lam*|r|."""
    lam = Fraction(lam) if lam is not None else p.lam_target
    if not (0 < lam < 1):
        raise BadParams(f"lambda {lam} outside (0, 1)")
    index = compute_pieces(p)
    entries = []
    for rid, r in enumerate(p.relators):
        ok = Fraction(index.max_by_relator[rid]) < lam * len(r)
        entries.append(
            RelatorVerdict(rid, len(r), index.max_by_relator[rid], index.ratio_by_relator[rid], ok, index.worst_by_relator[rid])
        )
    return MetricReport(lam, entries, all(e.passed for e in entries), index)


# ---------------------------------------------------------------------------
# Example families


def _tv_relator(n: int, k: int) -> Word:
    block = [1] * n + [2] * n
    return Word(block * k)


def gen_example(family: str, **params) -> Presentation:
    """Built-in presentation families: tv, pride, rips, free."""
    family = family.lower()
    if family in ("free", "none"):
        gens = tuple(params.get("generators", ("a", "b")))
        return Presentation(gens, ())
    if family == "tv":
        I = sorted(set(params["I"]))
        k = int(params["k"])
        if not I or min(I) < 1:
            raise BadParams("tv: I must be nonempty positive integers")
        if k < 1:
            raise BadParams("tv: k must be >= 1")
        notes = ()
        if k < 7:
            msg = f"tv family with k={k} < 7 is not expected to satisfy the 1/6 metric condition"
            warnings.warn(msg)
            notes = (msg,)
        return Presentation(("a", "b"), tuple(_tv_relator(n, k) for n in I), notes=notes)
    if family == "pride":
        n_max = int(params["n_max"])
        if n_max < 1:
            raise BadParams("pride: n_max must be >= 1")
        rels: list[Word] = []
        for n in range(1, n_max + 1):
            u = Word(([1] * n + [2] * n) * 10)
            v = Word(([1] * n + [2] * (2 * n)) * 10)
            rels.append(Word((1,) + tuple(u)))  # a * u_n
            rels.append(Word((2,) + tuple(v)))  # b * v_n
        return Presentation(("a", "b"), tuple(rels))
    if family == "rips":
        q_gens = tuple(params.get("q_generators", ("a1",)))
        q_rels: tuple = tuple(params.get("q_relators", ()))
        j_max = int(params["j_max"])
        scale = int(params.get("scale", 80))
        if j_max < 1 or scale < 1:
            raise BadParams("rips: j_max and scale must be >= 1")
        gens = q_gens + ("x", "y")
        m = len(q_gens)
        x, y = m + 1, m + 2  # letter encodings

        def conj(i: int, mid: int, s: int) -> Word:
            return Word((s * (i + 1), mid, -s * (i + 1)))

        base_words: list[Word] = []
        for i in range(m):
            base_words.append(conj(i, x, 1))
            base_words.append(conj(i, x, -1))
        for i in range(m):
            base_words.append(conj(i, y, 1))
            base_words.append(conj(i, y, -1))
        for r in q_rels:
            w = r if isinstance(r, Word) else parse_word(str(r), q_gens)
            base_words.append(w)
        if j_max > len(base_words):
            raise BadParams(
                f"rips: j_max={j_max} exceeds the {len(base_words)} available base words"
            )
        rels = []
        for j in range(1, j_max + 1):
            pad: list[int] = []
            for i in range(scale * j + 1, scale * (j + 1) + 1):
                pad.extend([x, y] * i)
                pad.extend([x, y, y])
            w = free_reduce(Word(tuple(base_words[j - 1]) + tuple(pad)))
            core, _ = cyclic_reduce(w)
            if len(core) == 0:
                raise EmptyRelator("rips relator collapsed")
            rels.append(core)
        return Presentation(gens, tuple(rels))
    raise BadParams(f"unknown family {family!r}")
