"""Band systems: the geometry behind the word-problem criteria.

A word equal to w1 modulo conjugates and commutators is the reduced form of a
concatenation with two factorizations.  The band system over that host word
traces leaves through arcs and lines; finitely many parallelity classes of
leaves exist, bounded by the topology of a filled surface.
"""

from wildwords import (Commutator, Conjugate, build_band_system,
                       class_count_bound, classify_class, extract_certificate,
                       griffiths_h1, render_svg, spec_from_factors,
                       verify_certificate)
from wildwords.serialize import certificate_to_json
from wildwords.words import as_finite, word_str
from wildwords import parse_word

fw = lambda text: as_finite(parse_word(text))

spec = spec_from_factors(fw("q[1]"), [Conjugate(fw("p[2]"), fw("q[3]"), "q")],
                         [Commutator(fw("p[1]"), fw("q[1]"))])
system = build_band_system(spec)
print("host word:", word_str(system.host))
print("numerator t parts:", [word_str(t) or "(empty)" for t in spec.t_parts])

leaves = system.leaves()
print(f"\n{len(leaves)} leaves:")
for leaf in leaves:
    kind = "closed" if leaf.closed else "open"
    print(f"  {kind:6} through positions {leaf.positions}")

classes = system.parallelity_classes().classes
inv = system.surface_invariants()
print(f"\nparallelity classes: {len(classes)}")
for ci in range(len(classes)):
    print(f"  class {ci}: case ({classify_class(system, ci)})")
print(f"surface: genus {inv.genus}, {inv.boundary_components} boundary "
      f"components, chi = {inv.euler_characteristic}")
print("class bound from the surface:", class_count_bound(inv))

cert = extract_certificate(spec, griffiths_h1())
print(f"\nextracted certificate with {len(cert.moves)} moves:")
for move in cert.moves:
    print("  -", type(move).__name__, "on", move.side)
print("verifies:", verify_certificate(cert, griffiths_h1()))

with open("band_system.svg", "w") as fh:
    fh.write(render_svg(system))
print("\nwrote band_system.svg")
print("certificate JSON:")
import json

print(json.dumps(certificate_to_json(cert, griffiths_h1()), indent=1)[:400], "...")
