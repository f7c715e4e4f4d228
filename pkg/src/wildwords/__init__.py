"""Symbolic computation with countable words over indexed alphabets.

Core layers: finite and symbolic countable words (``words``), positions and
subword extraction (``positions``), template unification and literal equality
(``unify``), arch systems and the group product (``arches``), band systems
over two-way factorizations (``bands``), word-problem deciders with move
certificates (``deciders``), explicit constructions of commutator families
and divisible elements (``constructions``), and a small text DSL with a
command line (``dsl``, ``cli``).
"""

from .words import (DEFAULT_BOUND, EMPTY, BlockTemplate, Concat, FiniteWord,
                    IndexExpr, Inverse, Letter, LimitRec, Lit, Name,
                    OmegaProd, Power, TriVerdict, WordExpr, as_finite, atoms,
                    check_restricted, concat, const_index, exponent_sum,
                    free_reduce, invert_finite, inverse, is_finite_expr,
                    letter, lit, limit_rec, mentioned_names, no,
                    occurrence_count, omega_prod, power, project, template,
                    truncate, unknown, var_index, word_str, yes)
from .positions import (Cut, NEG_INF, POS_INF, SubwordLocator, compare_cuts,
                        compare_positions, delete_range, letter_at, locate,
                        positions_of, split3, split_at_cuts)
from .unify import align_words, boundary_cancel, word_equal
from .arches import (Arch, ArchSystem, Decomposition, EnumerationResult,
                     enumerate_maximal_arch_systems, group_product,
                     is_complete, is_reduced, normalize_concatenation,
                     parallel_arches, reduced_form, reduced_form_via,
                     replay_decomposition, validate_arch_system)
from .deciders import (Certificate, DeleteInversePair, DeletePure,
                       GroupContext, LegalityReport, Reduce, Swap,
                       check_legal, context_for_space, eq_h1,
                       eq_in_word_group, eq_pi1_griffiths, griffiths_h1,
                       griffiths_pi1, hawaiian_h1, hawaiian_word_group,
                       trivial_h1, trivial_pi1_griffiths, verify_certificate,
                       verify_certificate_detailed)
from .bands import (ArchLineBandSystem, Band, BandSystemSpec,
                    CancellationPattern, Commutator, Conjugate, Leaf,
                    ParallelityClassification, RemovalOutcome,
                    SurfaceInvariants, build_band_system, class_count_bound,
                    classify_class, extract_certificate,
                    remove_parallelity_class, render_svg, spec_from_factors)
from .constructions import (LimitWordSpec, MonotoneFunction,
                            check_power_relation, commutator_word,
                            delete_small_atoms, distinctness_in_h1,
                            divisibility_witness, functions_equivalent,
                            identity_function, limit_word, repeating_unit,
                            standard_limit_word)
from .dsl import parse_word, print_word
from .errors import (ArchNotInSystem, AtomsNotCommutators, BadPairing,
                     ClassNotFound, InvalidLocator, InvalidSystem,
                     LimitExceeded, NotMonotone, NotRestricted, ParseError,
                     PipelineStuck, SpecMismatch, UnificationInconclusive,
                     WildWordsError)

__version__ = "0.1.0"
