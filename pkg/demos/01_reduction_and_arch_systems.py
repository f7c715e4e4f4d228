"""Finite words, free reduction and arch systems.

An arch system is a non-crossing, nesting-closed matching of mutually inverse
letters.  Deleting the endpoints of a maximal system is exactly free-group
reduction, and every maximal system gives the same answer.
"""

from wildwords import (enumerate_maximal_arch_systems, is_complete, parse_word,
                       reduced_form_via, validate_arch_system)
from wildwords.words import as_finite, free_reduce, word_str

word = as_finite(parse_word("p[1] p[2] p[2]^-1 p[1]^-1 p[1]"))
print("word:         ", word_str(word))
print("free reduction:", word_str(free_reduce(word)))

result = enumerate_maximal_arch_systems(word)
print(f"\n{len(result.systems)} maximal arch systems:")
for system in result.systems:
    arches = ", ".join(f"({a.start},{a.end})" for a in system.sorted_arches())
    print(f"  arches [{arches}]  ->  {word_str(reduced_form_via(system)) or '(empty)'}")

# a word that cancels completely admits a complete system
square = as_finite(parse_word("[p[1],q[1]] [q[1],p[1]]"))
systems = enumerate_maximal_arch_systems(square).systems
print(f"\n{word_str(square)}")
print("complete system exists:", any(is_complete(s) for s in systems))

# the defining rules are checkable one by one
from wildwords import Arch, ArchSystem

bad = ArchSystem(as_finite(parse_word("p[1] p[2] p[2]^-1 p[1]^-1")),
                 frozenset({Arch(0, 3)}))
print("\nrule violations of a lone outer arch:")
for problem in validate_arch_system(bad):
    print("  -", problem)
