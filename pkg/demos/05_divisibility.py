"""Uncountably many homology classes and divisible elements.

Tail-inequivalent monotone index functions give pairwise distinct infinite
commutator products.  The recursive limit word is divisible by every n:
deleting its small atoms exhibits it as an n-th power, and the deletions are
replayable pure-subword moves.
"""

from math import factorial

from wildwords import (MonotoneFunction, check_power_relation,
                       commutator_word, distinctness_in_h1,
                       divisibility_witness, functions_equivalent,
                       griffiths_h1, griffiths_pi1, identity_function,
                       print_word, repeating_unit, standard_limit_word,
                       truncate, verify_certificate)
from wildwords.words import word_str

f = identity_function()
g = MonotoneFunction((), 2, 0)
print("f = n, g = 2n, equivalent tails?", functions_equivalent(f, g).kind)
print("word for f:", print_word(commutator_word(f, "y")))
print("word for g:", print_word(commutator_word(g, "y")))
print("distinct in H1(Griffiths):", distinctness_in_h1(f, g, "y").is_no)
print("distinct in H1(Hawaiian): ", distinctness_in_h1(f, g, "z").is_no)

W = standard_limit_word()
print("\nthe limit word:", print_word(W))
for depth in (1, 2, 3):
    print(f"  truncated to depth {depth}:", word_str(truncate(W, depth)))

print("\natom counts per depth are factorials:")
for n in (2, 3, 4, 5):
    letters = truncate(W, n)
    count = sum(1 for x in letters if x.name.index == n and x.sign == -1) // 2
    print(f"  depth {n}: {count} = {n}!")

for n in (2, 3, 4):
    root, cert = divisibility_witness(W, n)
    print(f"\nW is an n-th power for n={n}: root {print_word(root)[:60]}")
    print(f"  certificate: {len(cert.moves)} pure deletions "
          f"(4 * sum(j!) = {4 * sum(factorial(j) for j in range(1, n))})")
    print("  verifies:", verify_certificate(cert, griffiths_h1()))

print("\nthe chain of units presents the rationals: unit(i) = unit(i+1)^(i+1)")
for depth in (1, 2, 3):
    out = check_power_relation(W, depth)
    print(f"  depth {depth}: {out.kind}, certificate verifies:",
          verify_certificate(out.witness, griffiths_pi1()))
