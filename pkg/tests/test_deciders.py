"""Word-problem deciders, legality, certificates and their verification."""

import itertools

import pytest

from conftest import W, fw, nm, random_finite_word
from wildwords import (EMPTY, Certificate, DeleteInversePair, DeletePure,
                       NotRestricted, Reduce, Swap, check_legal,
                       eq_h1, eq_in_word_group, eq_pi1_griffiths,
                       griffiths_h1, griffiths_pi1, hawaiian_h1,
                       hawaiian_word_group, inverse, lit, trivial_h1,
                       trivial_pi1_griffiths, verify_certificate,
                       verify_certificate_detailed, word_equal)
from wildwords.positions import Cut, SubwordLocator, delete_range, positions_of
from wildwords.words import exponent_sum, free_reduce, letter, mentioned_names


class TestEqInWordGroup:
    def test_cancelling_suffix(self):
        assert eq_in_word_group(W("p[1] p[2] p[2]^-1"), W("p[1]")).is_yes

    def test_infinite_vs_empty(self):
        out = eq_in_word_group(W("prod i=1..{ p[i] }"), EMPTY)
        assert out.is_no
        # the witness projection does not reduce to the empty word
        from wildwords import project

        u = W("prod i=1..{ p[i] }")
        assert free_reduce(project(u, out.witness)) != ()

    def test_same_infinite_word(self):
        u = W("prod i=1..{ [p[i],q[i]] }")
        assert eq_in_word_group(u, u).is_yes

    def test_agrees_with_free_reduction_on_finite_words(self, rng):
        for _ in range(50):
            u = lit(random_finite_word(rng, rng.randint(0, 6), ("p",), 2))
            v = lit(random_finite_word(rng, rng.randint(0, 6), ("p",), 2))
            expected = free_reduce(fw_of(u) + tuple(x.inverse() for x in reversed(fw_of(v)))) == ()
            assert eq_in_word_group(u, v).is_yes == expected


def fw_of(x):
    from wildwords import as_finite

    return as_finite(x)


class TestTrivialPi1Griffiths:
    def test_finite_commutator(self):
        out = trivial_pi1_griffiths(W("p[1] q[1] p[1]^-1 q[1]^-1"))
        assert out.is_yes
        assert verify_certificate(out.witness, griffiths_pi1())

    def test_alternating_loop_is_nontrivial(self):
        assert trivial_pi1_griffiths(W("prod i=1..{ p[i] q[i] }")).is_no

    def test_limit_word_is_nontrivial(self):
        assert trivial_pi1_griffiths(W("limit i=1..{ [p[i],q[i]] self^(i+1) }")).is_no

    def test_pure_infinite_word_is_trivial(self):
        out = trivial_pi1_griffiths(W("prod i=1..{ p[i] }"))
        assert out.is_yes
        assert verify_certificate(out.witness, griffiths_pi1())

    def test_every_finite_word_is_trivial(self, rng):
        for _ in range(60):
            w = lit(random_finite_word(rng, rng.randint(0, 8)))
            out = trivial_pi1_griffiths(w)
            assert out.is_yes
            assert verify_certificate(out.witness, griffiths_pi1())

    def test_pure_blocker_unlocked_by_deletion(self):
        u = W("prod i=1..{ p[i] q[i] }")
        w = lit(fw("q[9]"))
        blocked = W("prod i=1..{ p[i] q[i] } q[9] inv(prod i=1..{ p[i] q[i] })")
        out = trivial_pi1_griffiths(blocked)
        assert out.is_yes
        assert verify_certificate(out.witness, griffiths_pi1())


class TestEqPi1Griffiths:
    def test_shifted_commutator_products(self):
        u = W("prod i=1..{ [p[i],q[i]] }")
        v = W("prod i=2..{ [p[i],q[i]] }")
        assert eq_pi1_griffiths(u, v).is_yes

    def test_finite_words_all_equal(self):
        assert eq_pi1_griffiths(W("p[1]"), EMPTY).is_yes

    def test_alternating_loop_not_equal_to_identity(self):
        assert eq_pi1_griffiths(W("prod i=1..{ p[i] q[i] }"), EMPTY).is_no


class TestCheckLegal:
    def test_alternating_loop_legal(self):
        rep = check_legal(W("prod i=1..{ p[i] q[i] }"), "pq")
        assert rep.verdict.is_yes

    def test_pure_infinite_subword(self):
        rep = check_legal(W("prod i=1..{ p[i] }"), "pq")
        assert rep.verdict.is_no
        assert rep.verdict.witness[0] == "infinite pure subword"

    def test_explicit_inverse_pair(self):
        w = W("prod i=1..{ p[i] q[i] } p[1] inv(prod i=1..{ p[i] q[i] })")
        rep = check_legal(w, "pq")
        assert rep.verdict.is_no
        assert rep.verdict.witness[0] == "infinite inverse pair"

    def test_pure_mode_ignores_pure_blocks(self):
        rep = check_legal(W("prod i=1..{ p[i] }"), "p")
        assert rep.verdict.is_yes

    def test_limit_words_with_distinct_tails(self):
        u = W("limit i=1..{ [p[i],q[i]] self^(i+1) }")
        v = W("limit i=1..{ [p[2*i],q[2*i]] self^(i+1) }")
        from wildwords import concat

        rep = check_legal(concat(inverse(u), v), "pq")
        assert rep.verdict.is_yes
        rep2 = check_legal(concat(inverse(u), u.unit(3)), "pq")
        assert rep2.verdict.is_no

    def test_not_restricted_raises(self):
        from wildwords.words import IndexExpr, omega_prod, template

        w = omega_prod("i", 1, template(("p", IndexExpr(0, 1), 1)))
        with pytest.raises(NotRestricted):
            check_legal(w, "pq")


class TestTrivialH1:
    def test_finite_z_nonzero_exponent(self):
        out = trivial_h1(W("p[1] p[2] p[1]^-1"), "z")
        assert out.is_no and out.witness[1] == nm("p", 2)

    def test_finite_y_always_trivial(self):
        assert trivial_h1(W("[p[1],q[1]]"), "y").is_yes

    def test_commutator_family_z(self):
        w = W("prod i=1..{ [p[2*i-1],p[2*i]] }")
        assert trivial_h1(w, "z").is_no

    def test_commutator_family_y(self):
        assert trivial_h1(W("prod i=1..{ [p[i],q[i]] }"), "y").is_no

    def test_z_matches_exponent_sum_oracle(self, rng):
        for _ in range(80):
            w = lit(random_finite_word(rng, rng.randint(0, 8), ("p",), 3))
            expected = all(exponent_sum(w, x) == 0
                           for x in mentioned_names(w, 10))
            assert trivial_h1(w, "z").is_yes == expected

    def test_y_finite_exhaustive_small(self):
        alphabet = [letter("p", 1, s) for s in (1, -1)] + \
                   [letter("q", 1, s) for s in (1, -1)]
        for n in range(4):
            for combo in itertools.product(alphabet, repeat=n):
                assert trivial_h1(lit(combo), "y").is_yes


class TestEqH1:
    def test_swap_equality_z(self):
        assert eq_h1(W("p[1] p[2]"), W("p[2] p[1]"), "z").is_yes

    def test_tail_shifted_families_differ(self):
        u = W("prod i=1..{ [p[2*i-1],p[2*i]] }")
        v = W("prod i=1..{ [p[2*i+1],p[2*i+2]] }")
        # same tails shifted by one block: equal in homology
        assert eq_h1(u, v, "z").is_yes

    def test_different_tails_differ(self):
        u = W("prod i=1..{ [p[2*i-1],p[2*i]] }")
        v = W("prod i=1..{ [p[4*i-2],p[4*i]] }")
        assert eq_h1(u, v, "z").is_no

    def test_odd_shift_repairs_differently(self):
        # shifting the index function by one re-pairs the commutators, and
        # the two products become distinct homology classes
        u = W("prod i=1..{ [p[2*i-1],p[2*i]] }")
        v = W("prod i=1..{ [p[2*i],p[2*i+1]] }")
        assert eq_h1(u, v, "z").is_no

    def test_identical_words_y(self):
        u = W("prod i=1..{ [p[i],q[i]] }")
        assert eq_h1(u, u, "y").is_yes


class TestVerifyCertificate:
    def test_block_deletion_reaches_shifted_product(self):
        source = W("prod i=1..{ [p[i],q[i]] }")
        target = W("prod i=2..{ [p[i],q[i]] }")
        moves = []
        cur = source
        for name in [nm("p", 1), nm("q", 1)]:
            while True:
                hits = positions_of(cur, name)
                if not hits:
                    break
                path, _ = hits[0]
                loc = SubwordLocator.single(path)
                kind = name.family
                moves.append(DeletePure(loc, kind))
                cur = delete_range(cur, loc)
        assert len(moves) == 4
        cert = Certificate(source, tuple(moves), target)
        assert verify_certificate(cert, griffiths_pi1())

    def test_swap(self):
        cert = Certificate(
            W("p[1] p[2]"),
            (Swap(SubwordLocator.single((("w", 0),)),
                  SubwordLocator.single((("w", 1),))),),
            W("p[2] p[1]"))
        assert verify_certificate(cert, hawaiian_h1())

    def test_non_inverse_pair_rejected(self):
        cert = Certificate(
            W("p[1] q[1] p[2]"),
            (DeleteInversePair(SubwordLocator.single((("w", 0),)),
                               SubwordLocator.single((("w", 2),))),),
            W("q[1]"))
        ok, why = verify_certificate_detailed(cert, hawaiian_h1())
        assert not ok and "inverse" in why

    def test_admissibility_by_group(self):
        pure = DeletePure(SubwordLocator.single((("w", 0),)), "p")
        cert = Certificate(W("p[1]"), (pure,), EMPTY)
        assert verify_certificate(cert, griffiths_pi1())
        assert not verify_certificate(cert, hawaiian_h1())
        assert not verify_certificate(cert, hawaiian_word_group())

    def test_reduce_move(self):
        cert = Certificate(W("p[1] p[2] p[2]^-1"), (Reduce(),), W("p[1]"))
        assert verify_certificate(cert, hawaiian_word_group())
        assert not verify_certificate(cert, griffiths_h1())

    def test_target_side_moves(self):
        cert = Certificate(
            W("p[1]"),
            (DeletePure(SubwordLocator.single((("w", 0),)), "p"),
             DeletePure(SubwordLocator.single((("w", 0),)), "q", side="target")),
            W("q[1]"))
        assert verify_certificate(cert, griffiths_pi1())

    def test_wrong_final_word(self):
        cert = Certificate(W("p[1] p[2]"), (), W("p[2] p[1]"))
        ok, why = verify_certificate_detailed(cert, hawaiian_h1())
        assert not ok


class TestLegalityClosure:
    def test_legal_preserved_by_valid_moves(self):
        # deleting a pure block or an inverse pair keeps the word legal
        w = W("p[3] prod i=1..{ p[i] q[i] }")
        assert check_legal(w, "pq").verdict.is_yes
        after = delete_range(w, SubwordLocator.single((("c", 0), ("w", 0))))
        assert check_legal(after, "pq").verdict.is_yes

        u = W("p[7]^-1 prod i=1..{ p[i] q[i] } p[7]")
        assert check_legal(u, "pq").verdict.is_yes
        from wildwords import concat

        parts = [SubwordLocator.single((("c", 0), ("w", 0))),
                 SubwordLocator.single((("c", 2), ("w", 0)))]
        from wildwords.positions import split_at_cuts

        pieces = split_at_cuts(u, [parts[0].lo, parts[0].hi, parts[1].lo, parts[1].hi])
        after2 = concat(pieces[0], pieces[2], pieces[4])
        assert check_legal(after2, "pq").verdict.is_yes
