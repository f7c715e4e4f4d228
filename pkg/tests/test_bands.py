"""Band systems: construction, leaves, classes, surfaces, removals,
certificate extraction, rendering."""

import xml.dom.minidom

import pytest

from conftest import fw
from wildwords import (BadPairing, BandSystemSpec, CancellationPattern,
                       Commutator, Conjugate, DeleteInversePair, DeletePure,
                       Reduce, SpecMismatch, Swap, build_band_system,
                       class_count_bound, classify_class, extract_certificate,
                       griffiths_h1, griffiths_pi1, hawaiian_h1,
                       remove_parallelity_class, render_svg, spec_from_factors,
                       verify_certificate)
from wildwords.bands import SurfaceInvariants
from wildwords.words import free_reduce, invert_finite


def commutator_spec():
    """Host q1 [p1,q1]: one line band below and above, two lower arch bands."""
    return spec_from_factors(fw("q[1]"), [], [Commutator(fw("p[1]"), fw("q[1]"))])


from conftest import random_band_spec as random_spec


class TestBuild:
    def test_commutator_example_bands(self):
        system = build_band_system(commutator_spec())
        kinds = sorted((b.side, b.kind) for b in system.bands)
        assert kinds == [("lower", "arch"), ("lower", "arch"),
                         ("lower", "line"), ("upper", "line")]

    def test_empty_spec(self):
        spec = spec_from_factors((), [], [])
        system = build_band_system(spec)
        assert system.host == ()
        assert system.bands == ()
        assert system.leaves() == ()

    def test_mismatched_numerator(self):
        spec = BandSystemSpec(fw("p[1]"), (), (), (fw("q[1]"),), ())
        with pytest.raises(SpecMismatch):
            build_band_system(spec)

    def test_bad_pairing(self):
        spec = BandSystemSpec(
            fw("p[1] p[1]"), (), (),
            (fw(""), fw("")),
            (CancellationPattern((fw("p[1]"), fw("p[1]")), ((0, 1),)),))
        with pytest.raises(BadPairing):
            build_band_system(spec)


class TestLeaves:
    def test_commutator_example(self):
        system = build_band_system(commutator_spec())
        leaves = system.leaves()
        assert len(system.host) == 5
        assert len(leaves) == 3
        covered = sorted(p for leaf in leaves for p in leaf.positions)
        assert covered == list(range(5))

    def test_line_bands_only(self):
        spec = spec_from_factors(fw("p[1] q[1] p[2]"), [], [])
        leaves = build_band_system(spec).leaves()
        assert len(leaves) == 3
        assert all(len(leaf.positions) == 1 and not leaf.closed for leaf in leaves)

    def test_closed_leaf_from_conjugator(self):
        spec = spec_from_factors((), [Conjugate(fw("p[1]"), (), "q")], [])
        leaves = build_band_system(spec).leaves()
        assert [leaf.closed for leaf in leaves] == [True]

    def test_coverage_is_a_partition(self, rng):
        for _ in range(25):
            system = build_band_system(random_spec(rng))
            seen = {}
            for li, leaf in enumerate(system.leaves()):
                for p in leaf.positions:
                    assert p not in seen
                    seen[p] = li
            assert sorted(seen) == list(range(len(system.host)))

    def test_leaf_arcs_bounded_by_occurrences(self, rng):
        for _ in range(15):
            system = build_band_system(random_spec(rng))
            for leaf in system.leaves():
                arcs = [e for e in leaf.elements if e[0] == "arc"]
                name = system.host[leaf.positions[0]].name
                occurrences = sum(1 for x in system.host if x.name == name)
                assert len(arcs) <= occurrences


class TestParallelity:
    def test_nested_arcs_one_class(self):
        spec = spec_from_factors((), [Conjugate(fw("p[1] p[2]"), fw("q[1]"), "q")], [])
        system = build_band_system(spec)
        classes = system.parallelity_classes().classes
        sizes = sorted(len(c) for c in classes)
        assert sizes == [1, 2]  # eta leaf alone, two parallel conjugator leaves

    def test_commutator_example_singletons(self):
        system = build_band_system(commutator_spec())
        assert all(len(c) == 1 for c in system.parallelity_classes().classes)

    def test_empty_system(self):
        system = build_band_system(spec_from_factors((), [], []))
        assert system.parallelity_classes().classes == ()

    def test_parallel_leaves_share_length(self, rng):
        for _ in range(20):
            system = build_band_system(random_spec(rng))
            leaves = system.leaves()
            for members in system.parallelity_classes().classes:
                lengths = {len(leaves[m].elements) for m in members}
                assert len(lengths) == 1


class TestSurface:
    def test_line_bands_only_disk(self):
        spec = spec_from_factors(fw("p[1] q[1]"), [], [])
        inv = build_band_system(spec).surface_invariants()
        assert (inv.genus, inv.boundary_components) == (0, 1)
        assert inv.euler_characteristic == 1

    def test_adjacent_arch_feet(self):
        spec = spec_from_factors((), [Conjugate(fw("p[1]"), (), "q")], [])
        inv = build_band_system(spec).surface_invariants()
        assert inv.euler_characteristic == 2 - 2 * inv.genus - inv.boundary_components
        assert (inv.genus, inv.boundary_components) == (0, 3)

    def test_commutator_gives_genus(self):
        inv = build_band_system(commutator_spec()).surface_invariants()
        assert (inv.genus, inv.boundary_components) == (1, 1)
        assert inv.euler_characteristic == -1

    def test_chi_equals_one_minus_arch_bands(self, rng):
        # independent count: each arch band removes one from the disk's chi
        for _ in range(25):
            system = build_band_system(random_spec(rng))
            inv = system.surface_invariants()
            arch_bands = sum(1 for b in system.bands if b.kind == "arch")
            assert inv.euler_characteristic == 1 - arch_bands
            assert inv.euler_characteristic == \
                2 - 2 * inv.genus - inv.boundary_components


class TestClassBound:
    def test_disk_base_value(self):
        assert class_count_bound(SurfaceInvariants(0, 1, 0, 1)) == 2

    def test_monotone_in_boundary(self):
        for g in range(3):
            for b in range(1, 4):
                for t in range(3):
                    assert class_count_bound(SurfaceInvariants(g, b, t, 0)) <= \
                        class_count_bound(SurfaceInvariants(g, b + 1, t, 0))

    def test_observed_classes_within_bound(self, rng):
        for _ in range(30):
            system = build_band_system(random_spec(rng))
            classes = system.parallelity_classes().classes
            bound = class_count_bound(system.surface_invariants())
            assert len(classes) <= bound


class TestRemoval:
    def test_eta_to_t_case(self):
        spec = spec_from_factors(fw("p[2]"), [Conjugate(fw("p[1]"), fw("q[1] q[2]"), "q")], [])
        system = build_band_system(spec)
        cases = {classify_class(system, ci): ci
                 for ci in range(len(system.parallelity_classes().classes))}
        assert "3" in cases
        out = remove_parallelity_class(system, cases["3"])
        assert out.case_label == "3"
        # w1 unchanged, some t factor lost the pure subword
        assert out.spec.w1 == spec.w1
        assert sum(map(len, out.spec.t_parts)) < sum(map(len, spec.t_parts))

    def test_closed_case_keeps_both_words(self):
        spec = spec_from_factors((), [Conjugate(fw("p[1]"), (), "q")], [])
        system = build_band_system(spec)
        out = remove_parallelity_class(system, 0)
        assert out.case_label == "1"
        assert out.spec.w1 == spec.w1
        assert out.spec.t_parts == tuple(() for _ in spec.t_parts)

    def test_w1_pair_case(self):
        # w1 = p1 q1 p1^-1 with commutator (p1^-1, q1): its p letters pair up
        spec = spec_from_factors(fw("p[1] q[1] p[1]^-1"),
                                 [], [Commutator(fw("p[1]^-1"), fw("q[1]"))])
        system = build_band_system(spec)
        cases = {classify_class(system, ci)
                 for ci in range(len(system.parallelity_classes().classes))}
        assert "7" in cases
        ci = next(ci for ci in range(len(system.parallelity_classes().classes))
                  if classify_class(system, ci) == "7")
        out = remove_parallelity_class(system, ci)
        assert out.spec.t_parts == spec.t_parts
        assert free_reduce(out.spec.w1) == out.spec.w1
        assert out.spec.w1 == fw("q[1]")

    def test_removal_preserves_invariants(self, rng):
        checked = 0
        for _ in range(25):
            spec = random_spec(rng, max_len=4, max_m=2, max_n=2)
            system = build_band_system(spec)
            for ci in range(len(system.parallelity_classes().classes)):
                out = remove_parallelity_class(system, ci)
                # the rebuild validates pairings and letterwise equality; the
                # case split constrains which factors may change
                if out.case_label in ("1", "6"):
                    assert out.spec.w1 == spec.w1
                    assert out.spec.t_parts == spec.t_parts
                if out.case_label in ("2", "2'", "3"):
                    assert out.spec.w1 == spec.w1
                if out.case_label in ("5", "7"):
                    assert out.spec.t_parts == spec.t_parts
                for j, c in enumerate(out.spec.conjugates):
                    assert invert_finite(c.theta) == \
                        invert_finite(spec.conjugates[j].theta[:0]) + invert_finite(c.theta)
                checked += 1
        assert checked > 10


class TestExtraction:
    def test_commutator_example_uses_pair_moves(self):
        cert = extract_certificate(commutator_spec(), griffiths_h1())
        kinds = {type(m) for m in cert.moves}
        assert kinds <= {DeleteInversePair, Swap}
        assert verify_certificate(cert, griffiths_h1())

    def test_conjugate_only_uses_pure_moves(self):
        spec = spec_from_factors(fw("p[2]"), [Conjugate(fw("p[1]"), fw("q[1]"), "q")], [])
        cert = extract_certificate(spec, griffiths_pi1())
        assert {type(m) for m in cert.moves} <= {DeletePure, Reduce}
        assert verify_certificate(cert, griffiths_pi1())

    def test_trivial_spec_empty_certificate(self):
        cert = extract_certificate(spec_from_factors((), [], []), griffiths_h1())
        assert cert.moves == ()
        assert verify_certificate(cert, griffiths_h1())

    def test_staged_order_for_homology(self, rng):
        stage_of = {DeletePure: 0, DeleteInversePair: 1, Swap: 2}
        for _ in range(15):
            spec = random_spec(rng, max_len=4, max_m=2, max_n=2)
            cert = extract_certificate(spec, griffiths_h1())
            stages = [stage_of[type(m)] for m in cert.moves]
            assert stages == sorted(stages)
            assert verify_certificate(cert, griffiths_h1())

    def test_hawaiian_homology_pipeline(self, rng):
        for _ in range(10):
            spec = random_spec(rng, ctx="h1z", max_len=4, max_n=2)
            cert = extract_certificate(spec, hawaiian_h1())
            assert verify_certificate(cert, hawaiian_h1())


class TestRender:
    def test_empty_system_axis_only(self):
        svg = render_svg(build_band_system(spec_from_factors((), [], [])))
        xml.dom.minidom.parseString(svg)
        assert "<line" in svg

    def test_commutator_colors(self):
        svg = render_svg(build_band_system(commutator_spec()))
        xml.dom.minidom.parseString(svg)
        colors = {part.split('"')[0] for part in svg.split('stroke="hsl(')[1:]}
        assert len(colors) == 3

    def test_random_systems_well_formed(self, rng):
        for _ in range(5):
            svg = render_svg(build_band_system(random_spec(rng)))
            xml.dom.minidom.parseString(svg)
