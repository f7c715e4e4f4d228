"""Symbolic countable words: products over all indices, projections, and the
group multiplication by reduce-after-concatenate.

Infinite words are affine-indexed templates.  Any finite set of letter names
touches only finitely many template blocks, so projections are computed by
solving the index equations exactly.
"""

from wildwords import (group_product, inverse, parse_word, print_word,
                       project, truncate, word_equal)
from wildwords.words import Name, word_str

u = parse_word("prod i=1..{ [p[i],q[i]] }")
print("u  =", print_word(u))
print("truncation to i<=2:", word_str(truncate(u, 2)))
print("projection on p3:  ", word_str(project(u, [Name("p", 3)])))

# literal equality of countable words is decided by projections and by
# structural alignment; here the same word is written two ways
v = parse_word("[p[1],q[1]] prod i=2..{ [p[i],q[i]] }")
print("\nu written differently:", print_word(v))
print("word_equal(u, v):", word_equal(u, v))

# the group product cancels across the boundary of the two factors;
# mutually inverse infinite tails disappear in one step
w = group_product(u, inverse(v))
print("\nu * v^-1 =", print_word(w) or "(empty)")

shifted = parse_word("prod i=3..{ [p[i],q[i]] }")
print("u * (tail from 3)^-1 =", print_word(group_product(u, inverse(shifted))))

# a word and its inverse always cancel completely
print("u * u^-1 =", print_word(group_product(u, inverse(u))) or "(empty)")
