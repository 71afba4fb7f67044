"""Verification engine for sheaf representations of finite monoidal categories.

Given a finite, explicitly tabulated strict monoidal category, the engine
computes its central idempotents and their lattice, builds the prime spectrum
and the restriction categories over its basic opens, realizes the stalks, and
checks stiffness, universal joins, the sheaf condition, locality of stalks,
the global-sections equivalence, the product embedding, and the free
completion under universal joins.
"""

from .catcore import (CategoryTable, FunctorTable, ValidationReport,
                      is_epi, is_iso, is_mono, validate_category,
                      validate_functor)
from .moncat import (MonoidalFunctorTable, MonoidalTable, from_monoid,
                     from_quantale, from_semilattice, from_topology,
                     validate_monoidal, validate_monoidal_functor)
from .zi import (CentralIdempotentRecord, Verdict, ZILattice,
                 cartesian_subterminal_check, central_idempotents,
                 check_local_properties, find_half_braidings,
                 find_left_idempotents, has_universal_finite_joins,
                 has_universal_joins, is_bilinear, is_stiff, is_subunit,
                 to_lattice_model, zi_map_of_functor)
# the spectrum(L) operation itself is reached via the submodule,
# tensortopo.spectrum.spectrum, to keep the submodule name unshadowed
from .spectrum import (FilterSet, LatticeModel, SpectrumSpace,
                       check_basis_compact, enumerate_completely_prime_filters,
                       enumerate_prime_filters, germ_congruence, is_spatial,
                       random_lattice, random_lattices)
from .sheaf import (RestrictionCategory, SheafReport, StalkCategory,
                    check_sheaf_equalizer, check_stalk_inherits,
                    check_zero_section, check_zi_of_restriction,
                    check_zi_of_stalk, embed_into_product_of_stalks,
                    is_bigvee_local, is_vee_local, left_adjoint_functor,
                    represent, restrict, restriction_functor, stalk,
                    verify_stalk_colimit)
from .completion import (build_completion, check_completion_joins,
                         check_embedding, check_zi_completion,
                         downset_lattice, embed, extend_functor, restricts_to)

__version__ = "0.1.0"
