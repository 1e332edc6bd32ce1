"""The word problem via the half-relator rewriting procedure.

Any subword covering strictly more than half of a relator cycle is replaced
by the inverse of the remainder; under the strict 1/6 condition a word is
trivial iff this terminates at the empty word.
"""

from wallkit import DehnMachine, dehn_reduce, gen_example, is_trivial, shortlex_normal_form

p = gen_example("tv", I={1}, k=7)
m = DehnMachine(p)

for text in ["(ab)^7", "(ab)^4", "b^-1 (ab)^7 b", "a", "abab^-1"]:
    w = p.word(text)
    reduced = dehn_reduce(w, m)
    nf = shortlex_normal_form(w, m)
    print(
        f"{text:16} -> reduced {p.show(reduced):22} "
        f"normal form {p.show(nf):22} {'trivial' if is_trivial(w, m) else 'non-trivial'}"
    )

# Normal forms are canonical: every word equal to (ab)^4 in the group maps
# to the same shortlex-least representative.
w1 = p.word("(ab)^4")
w2 = p.word("(b^-1 a^-1)^3")
print("\nsame class:", shortlex_normal_form(w1, m) == shortlex_normal_form(w2, m))

# In the free group the procedure degenerates to free reduction.
free = gen_example("free")
mf = DehnMachine(free)
w = free.word("a b b^-1 a")
print("free group normal form of a b b^-1 a:", free.show(shortlex_normal_form(w, mf)))
