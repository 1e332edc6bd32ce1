"""Piece analysis and the metric small-cancellation condition.

A piece is a word occurring in two relators (or twice in one relator) in
essentially distinct ways; the C'(lambda) condition demands every piece
through a relator r be strictly shorter than lambda*|r|.
"""

from fractions import Fraction

from wallkit import check_small_cancellation, compute_pieces, gen_example, parse_presentation

# Parse a presentation from text.
p = parse_presentation(
    """
    # two relators sharing short alternating blocks
    gens: a b
    rel: (ab)^7
    rel: (aabb)^7
    """
)
print("generators:", p.generators)
print("relator lengths:", [len(r) for r in p.relators])

idx = compute_pieces(p)
print("\nmaximal pieces (word, length, witnesses):")
for pc in idx.pieces:
    print(" ", p.show(pc.word), pc.length, pc.witnesses)
print("per-relator max piece:", idx.max_by_relator)

report = check_small_cancellation(p, Fraction(1, 6))
for e in report.entries:
    print(
        f"relator {e.rid}: |r|={e.relator_length} max piece={e.max_piece} "
        f"ratio={e.ratio} -> {'ok' if e.passed else 'FAIL'}"
    )
print("C'(1/6):", "pass" if report.passed else "fail")

# The same family at power 6 sits exactly on the boundary and fails the
# strict inequality: a piece of length 2 against |r|/6 = 2.
import warnings

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    p6 = gen_example("tv", I={1, 2}, k=6)
print("\npower-6 variant passes:", check_small_cancellation(p6, Fraction(1, 6)).passed)

# Built-in families: the conjugation-padding family needs a large enough
# scale constant before the condition kicks in.
for scale in (14, 16):
    rips = gen_example("rips", q_generators=("a1",), q_relators=(), j_max=1, scale=scale)
    rep = check_small_cancellation(rips, Fraction(1, 6))
    r = rep.entries[0]
    print(f"padding scale {scale}: |r|={r.relator_length} max piece={r.max_piece} -> {r.passed}")
