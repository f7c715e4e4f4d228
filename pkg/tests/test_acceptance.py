"""Acceptance suite: one test per criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report.  All tolerances are exact; the random sampling is seeded.
"""

import contextlib
import io
import itertools
import json
import random
import time
import xml.dom.minidom
from math import factorial

import pytest

from conftest import (W, fw, nm, random_band_spec, random_finite_word,
                      random_reduced_word, random_word_expr)
from wildwords import (EMPTY, Certificate, DeleteInversePair, DeletePure,
                       MonotoneFunction, NotRestricted, Reduce, Swap,
                       build_band_system, check_power_relation,
                       check_restricted, class_count_bound, classify_class,
                       commutator_word, distinctness_in_h1,
                       divisibility_witness, enumerate_maximal_arch_systems,
                       extract_certificate, functions_equivalent,
                       griffiths_h1, griffiths_pi1, hawaiian_h1, inverse,
                       is_complete, letter, lit, normalize_concatenation,
                       parse_word, print_word, remove_parallelity_class,
                       render_svg, repeating_unit, delete_small_atoms,
                       spec_from_factors, standard_limit_word, trivial_h1,
                       trivial_pi1_griffiths, truncate, verify_certificate,
                       word_equal)
from wildwords.cli import main as cli_main
from wildwords.words import as_finite, free_reduce, invert_finite, power, project

THREE_P = [letter("p", f, s) for f in (1, 2, 3) for s in (1, -1)]
MIXED_PQ = ([letter("p", f, s) for f in (1, 2) for s in (1, -1)] +
            [letter("q", 1, s) for s in (1, -1)])


def report(criterion, text):
    print(f"ACCEPTANCE {criterion}: PASS - {text}")


def _canonical(word_ints):
    fam_map = {}
    flip = {}
    out = []
    nxt = 0
    for k in word_ints:
        f, s = k >> 1, k & 1
        if f not in fam_map:
            fam_map[f] = nxt
            nxt += 1
            flip[f] = s
        out.append((fam_map[f] << 1) | (s ^ flip[f]))
    return bytes(out)


def _check_unique_reduced_form(word):
    expected = free_reduce(word)
    res = enumerate_maximal_arch_systems(word, cap=200_000)
    assert not res.truncated
    assert res.systems
    for system in res.systems:
        from wildwords import reduced_form_via

        assert reduced_form_via(system) == expected


def test_criterion_1_reduced_form_uniqueness():
    """Every maximal arch system yields the free reduction, exhaustively to
    length 8 over three families and on 1000 random words of length <= 14."""
    t0 = time.time()
    seen: set = set()
    count = 0
    for length in range(0, 9):
        for ints in itertools.product(range(6), repeat=length):
            count += 1
            key = _canonical(ints)
            if key in seen:
                continue
            seen.add(key)
            _check_unique_reduced_form(tuple(THREE_P[b] for b in key))
    assert count == sum(6 ** L for L in range(9))

    rng = random.Random(1001)
    for _ in range(1000):
        word = random_finite_word(rng, rng.randint(0, 14), ("p",), 3)
        _check_unique_reduced_form(word)
    took = time.time() - t0
    assert took < 60
    report(1, f"uniqueness on {count} exhaustive ({len(seen)} up to relabeling) "
              f"+ 1000 random words in {took:.1f}s")


def test_criterion_2_projection_and_completeness():
    """Reduce-then-project equals project-then-reduce for every letter set
    over three names; a complete arch system exists exactly when the free
    reduction is empty."""
    t0 = time.time()
    rng = random.Random(1002)
    names = [nm("p", i) for i in (1, 2, 3)]
    subsets = [frozenset(c) for r in range(len(names) + 1)
               for c in itertools.combinations(names, r)]
    for _ in range(500):
        word = random_finite_word(rng, rng.randint(0, 12), ("p",), 3)
        reduced = free_reduce(word)
        for sub in subsets:
            left = free_reduce(tuple(x for x in reduced if x.name in sub))
            right = free_reduce(tuple(x for x in word if x.name in sub))
            assert left == right
        res = enumerate_maximal_arch_systems(word, cap=200_000)
        assert not res.truncated
        assert any(is_complete(s) for s in res.systems) == (reduced == ())
    took = time.time() - t0
    assert took < 30
    report(2, f"projection coherence and completeness on 500 words in {took:.1f}s")


def test_criterion_3_concatenation_normalizer():
    """The residue of the cancellation process is the free reduction of the
    concatenation, for 500 random factor lists of reduced words."""
    rng = random.Random(1003)
    from wildwords import replay_decomposition

    for _ in range(500):
        factors = [lit(random_reduced_word(rng, rng.randint(0, 8)))
                   for _ in range(rng.randint(0, 5))]
        dec = normalize_concatenation(factors)
        got = as_finite(dec.reduced_word())
        want = free_reduce(sum((as_finite(f) for f in factors), ()))
        assert got == want
        assert replay_decomposition(dec)
    report(3, "500 random factor lists normalize to the free reduction")


def test_criterion_4_band_systems():
    """200 generated systems: every letter on exactly one leaf, leaves
    finite, class count within the surface bound, chi = 2 - 2g - b, and every
    single-class removal preserves the two-factorization invariants."""
    t0 = time.time()
    rng = random.Random(1004)
    contexts = ["h1y", "h1y", "pi1y", "h1z"]
    removals = 0
    for k in range(200):
        spec = random_band_spec(rng, ctx=contexts[k % len(contexts)],
                                max_len=6, max_m=3, max_n=3, max_k=3)
        system = build_band_system(spec)
        leaves = system.leaves()
        covered = sorted(p for leaf in leaves for p in leaf.positions)
        assert covered == list(range(len(system.host)))
        assert all(len(leaf.elements) < 10_000 for leaf in leaves)
        inv = system.surface_invariants()
        assert inv.euler_characteristic == \
            2 - 2 * inv.genus - inv.boundary_components
        classes = system.parallelity_classes().classes
        assert len(classes) <= class_count_bound(inv)
        for ci in range(len(classes)):
            outcome = remove_parallelity_class(system, ci)
            # the rebuild re-validates pairings, mutual inverses and the
            # letterwise numerator = denominator identity
            assert outcome.spec.numerator_word() == outcome.spec.host()
            removals += 1
    took = time.time() - t0
    assert took < 120
    report(4, f"200 systems, {removals} removals validated in {took:.1f}s")


def test_criterion_5_certificate_pipeline():
    """Extracted certificates verify; homology certificates use the stages
    pure-deletion, inverse-pair deletion, swap, in that order."""
    rng = random.Random(1005)
    stage_of = {DeletePure: 0, DeleteInversePair: 1, Swap: 2}
    for k in range(200):
        kind = ["h1y", "pi1y", "h1z"][k % 3]
        ctx = {"h1y": griffiths_h1(), "pi1y": griffiths_pi1(),
               "h1z": hawaiian_h1()}[kind]
        spec = random_band_spec(rng, ctx=kind, max_len=5, max_m=2, max_n=2)
        cert = extract_certificate(spec, ctx)
        assert verify_certificate(cert, ctx)
        if kind != "pi1y":
            stages = [stage_of[type(m)] for m in cert.moves]
            assert stages == sorted(stages)
    report(5, "200 extracted certificates verified, homology stages ordered")


def test_criterion_6_griffiths_fundamental_group():
    """All finite words are trivial; the alternating loop and the limit word
    are not; the power relations of the divisible chain verify."""
    t0 = time.time()
    rng = random.Random(1006)
    for _ in range(10_000):
        word = lit(tuple(rng.choice(MIXED_PQ) for _ in range(rng.randint(0, 12))))
        out = trivial_pi1_griffiths(word)
        assert out.is_yes
    assert trivial_pi1_griffiths(W("prod i=1..{ p[i] q[i] }")).is_no
    limit = standard_limit_word()
    assert trivial_pi1_griffiths(limit).is_no
    for depth in range(1, 6):
        out = check_power_relation(limit, depth)
        assert out.is_yes
        assert verify_certificate(out.witness, griffiths_pi1())
    took = time.time() - t0
    assert took < 60
    report(6, f"10000 finite words trivial, two infinite words nontrivial, "
              f"5 power relations verified in {took:.1f}s")


def test_criterion_7_homology_deciders():
    """Finite homology decisions match the exponent-sum oracle (Hawaiian) and
    the always-trivial oracle (Griffiths) exhaustively to length 8; 100
    pairwise-inequivalent tail functions give pairwise distinct classes."""
    t0 = time.time()
    ctx_z = hawaiian_h1()
    for length in range(0, 9):
        for word in itertools.product(THREE_P, repeat=length):
            sums: dict = {}
            for x in word:
                sums[x.name] = sums.get(x.name, 0) + x.sign
            expected = all(v == 0 for v in sums.values())
            assert trivial_h1(lit(word), "z", ctx_z).is_yes == expected

    ctx_y = griffiths_h1()
    for length in range(0, 9):
        for word in itertools.product(MIXED_PQ[:6], repeat=length):
            assert trivial_h1(lit(word), "y", ctx_y).is_yes

    # tail classes are (slope, offset mod slope); prefixes never matter
    functions = []
    for coeff in range(1, 15):
        for off in range(coeff):
            prefix = (1,) if (coeff + off) % 3 == 0 else ()
            functions.append(MonotoneFunction(prefix, coeff, off))
            if len(functions) == 100:
                break
        if len(functions) == 100:
            break
    assert len(functions) == 100
    for i, f in enumerate(functions):
        for g in functions[i + 1:]:
            assert functions_equivalent(f, g).is_no
    pair_count = 0
    for i, f in enumerate(functions):
        for g in functions[i + 1:]:
            for space in ("z", "y"):
                out = distinctness_in_h1(f, g, space)
                assert out.is_no, (f, g, space, out)
                assert not out.is_unknown
                pair_count += 1
    took = time.time() - t0
    assert took < 120
    report(7, f"exhaustive finite oracles + {pair_count} distinctness checks "
              f"in {took:.1f}s")


def test_criterion_8_limit_word_reproductions():
    """Truncations match the insertion table; atom counts are factorials; the
    deleted word is the unit power; divisibility certificates have exactly
    4 * sum(j!) moves and verify."""
    t0 = time.time()
    single = parse_word("limit i=1..{ a[i] self^(i+1) }")
    assert truncate(single, 1) == fw("a[1]")
    assert truncate(single, 2) == fw("a[1] a[2] a[2]")
    assert truncate(single, 3) == fw("a[1] a[2] a[3] a[3] a[3] a[2] a[3] a[3] a[3]")

    word = standard_limit_word()
    for n in range(1, 7):
        letters = truncate(word, n)
        occurrences = sum(1 for x in letters
                          if x.name == nm("p", n) and x.sign == -1)
        assert occurrences == factorial(n)

    for i in range(1, 5):
        unit = repeating_unit(word, i)
        deleted = delete_small_atoms(word, i)
        for depth in range(i, 7):
            assert word_equal(lit(truncate(deleted, depth)),
                              lit(truncate(power(unit, factorial(i)), depth))).is_yes

    for n in range(1, 7):
        x, cert = divisibility_witness(word, n)
        assert len(cert.moves) == 4 * sum(factorial(j) for j in range(1, n))
        assert verify_certificate(cert, griffiths_h1())
        assert word_equal(power(x, n),
                          delete_small_atoms(word, n)).is_yes or n == 1
    took = time.time() - t0
    assert took < 60
    report(8, f"insertion table, factorial counts, unit powers and 6 "
              f"divisibility certificates in {took:.1f}s")


def test_criterion_9_restrictedness_gate():
    """The classical pathological words are rejected with the offending
    letter named."""
    from wildwords.words import IndexExpr, omega_prod, template

    alternating = omega_prod("i", 1, template(("x", IndexExpr(0, 1), 1),
                                              ("x", IndexExpr(0, 1), -1)))
    out = check_restricted(alternating)
    assert out.is_no and out.witness == nm("x", 1)

    constant = omega_prod("i", 1, template(("x", IndexExpr(0, 1), 1)))
    out2 = check_restricted(constant)
    assert out2.is_no and out2.witness == nm("x", 1)
    with pytest.raises(NotRestricted) as err:
        normalize_concatenation([constant, inverse(constant)])
    assert err.value.witness == nm("x", 1)
    report(9, "pathological words rejected with the offending letter named")


def _run_cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = cli_main(list(argv))
    return code, buf.getvalue().strip()


def test_criterion_10_cli_contract():
    """DSL round-trip on 1000 random expressions, well-formed SVG output, and
    the exit-code contract over a scripted matrix of invocations."""
    rng = random.Random(1010)
    for _ in range(1000):
        expr = random_word_expr(rng)
        assert parse_word(print_word(expr)) == expr

    spec = random_band_spec(random.Random(7), ctx="h1y", max_len=4)
    system = build_band_system(spec)
    xml.dom.minidom.parseString(render_svg(system))

    import tempfile

    from wildwords.serialize import bandspec_to_json, certificate_to_json

    with tempfile.TemporaryDirectory() as tmp:
        spec_path = f"{tmp}/spec.json"
        with open(spec_path, "w") as fh:
            json.dump(bandspec_to_json(spec), fh)
        svg_path = f"{tmp}/out.svg"
        cert = extract_certificate(spec, griffiths_h1())
        cert_path = f"{tmp}/cert.json"
        with open(cert_path, "w") as fh:
            json.dump(certificate_to_json(cert, griffiths_h1()), fh)
        bad_cert = certificate_to_json(cert, griffiths_h1())
        bad_cert["target"] = "p[7]"
        bad_path = f"{tmp}/bad.json"
        with open(bad_path, "w") as fh:
            json.dump(bad_cert, fh)

        matrix = [
            (("reduce", "p[1] p[2] p[2]^-1"), 0),
            (("reduce", ""), 0),
            (("reduce", "prod i=1..{ p[1] p[1]^-1 }"), 66),
            (("reduce", "p["), 65),
            (("project", "-F", "p2", "prod i=1..{ [p[i],q[i]] }"), 0),
            (("project", "-F", "p[3]", "prod i=1..{ p[i] }"), 0),
            (("truncate", "-N", "3", "prod i=1..{ p[i] }"), 0),
            (("truncate", "-N", "2", "limit i=1..{ a[i] self^(i+1) }"), 0),
            (("eq", "--group", "wp", "p[1] p[2] p[2]^-1", "p[1]"), 0),
            (("eq", "--group", "wp", "prod i=1..{ p[i] }", ""), 1),
            (("eq", "--group", "pi1y", "p[1] q[1]", ""), 0),
            (("eq", "--group", "pi1y", "prod i=1..{ p[i] q[i] }", ""), 1),
            (("eq", "--group", "pi1y",
              "prod i=1..{ [p[i],q[i]] }", "prod i=2..{ [p[i],q[i]] }"), 0),
            (("eq", "--group", "h1z", "p[1] p[2]", "p[2] p[1]"), 0),
            (("eq", "--group", "h1z", "p[1]", ""), 1),
            (("eq", "--group", "h1z",
              "prod i=1..{ [p[2*i-1],p[2*i]] }", ""), 1),
            (("eq", "--group", "h1y", "[p[1],q[1]]", ""), 0),
            (("eq", "--group", "h1y", "prod i=1..{ [p[i],q[i]] }", ""), 1),
            (("eq", "--group", "h1y", "q[", ""), 65),
            (("eq", "--group", "nope", "p[1]", "p[2]"), 64),
            (("legal", "--mode", "pq", "prod i=1..{ p[i] q[i] }"), 0),
            (("legal", "--mode", "pq", "prod i=1..{ p[i] }"), 1),
            (("legal", "--mode", "p", "prod i=1..{ p[i] }"), 0),
            (("legal", "--mode", "pq",
              "prod i=1..{ p[i] q[i] } p[1] inv(prod i=1..{ p[i] q[i] })"), 1),
            (("bands", "--spec", spec_path, "--svg", svg_path), 0),
            (("bands", "--spec", f"{tmp}/missing.json"), 65),
            (("cert", "verify", cert_path), 0),
            (("cert", "verify", bad_path), 1),
            (("construct", "commutators", "--space", "y"), 0),
            (("construct", "witness", "-n", "2"), 0),
        ]
        assert len(matrix) == 30
        for argv, expected in matrix:
            code, _out = _run_cli(*argv)
            assert code == expected, (argv, code, expected)
        xml.dom.minidom.parseString(open(svg_path).read())

        verdict_cmds = [m for m in matrix if m[0][0] in ("eq", "legal")]
        for argv, expected in verdict_cmds:
            if expected >= 64:
                continue
            code, out = _run_cli(*argv)
            payload = json.loads(out)
            assert {"yes": 0, "no": 1, "unknown": 2}[payload["verdict"]] == code
    report(10, "1000 round-trips, well-formed SVG, 30-invocation exit matrix")
