"""Exact (co)homology with local coefficients over finite fields.

Group rings and finite EI-categories, the Eilenberg spectral sequences,
the Burnside category with Mackey and Green functors, and generator-level
RO(C_p)-graded bookkeeping.
"""

from .errors import *  # noqa: F401,F403
from .fieldlin import FieldMatrix, Subquotient, Subspace, kernel_basis, image_basis, rank, row_reduce, solve
from .chains import (Bicomplex, SpectralPage, VectorComplex, check_convergence, e_infinity, homology,
                     spectral_sequence, total_complex)
from .groupring import (FiniteGroup, FreeModuleComplex, GroupRingModule, coinvariants, ext_over_ring,
                        fixed_points, hom_over_ring, injective_resolution, periodic_resolution,
                        projective_resolution, tensor_over_ring, tor_over_ring)
from .eicat import (EICategory, FunctorComplex, FunctorModule, NaturalTransformation, constant,
                    decompose_into_representables, ext_over_cat, fixed_subfunctor_dim,
                    functor_injective_resolution, functor_projective_resolution, hom_over_cat,
                    representable, tensor_over_cat, tor_over_cat)
from .eilenberg import (EquivariantSpace, GroupSpace, bo2_pipeline, eilenberg_cohomology,
                        eilenberg_homology, eq_eilenberg, serre_e2_page)
from .burnside import (BurnsideCategory, FiniteGSet, MackeyFunctor, Span, SpanHom, box_product,
                       burnside_green, burnside_hom_basis, burnside_ring_product, green_check,
                       span_canonical_form, span_compose)
from .rograding import (GeneratorLabel, VirtualRep, all_labels, fixed_basis, generator_decomposition_check,
                        omega, omega_closed_form, regular_real)

__version__ = "0.1.0"
