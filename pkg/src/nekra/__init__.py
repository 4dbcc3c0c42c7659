"""Exact-arithmetic toolkit for self-similar groups, Rover-Nekrashevych
element arithmetic, and constructive embeddings into finitely presented
simple groups, plus self-similar actions of matrix groups over Z[1/m]."""

from .abelian import (AbClass, FinAbPresentation, abelianize_group,
                      abelianize_V, duplicate, find_even_m, snf)
from .embed import (FiniteGroupTable, KKContext, PipelineResult, WreathElem,
                    bh_pipeline, embed_generator, finite_prefix_action,
                    into_cone, kk_context, kk_embed, wreath_embed, wreath_mul)
from .groupfile import load_fixture, load_group
from .rovernek import (VElement, in_commutator, make_velement, v_ab_class,
                       v_apply, v_compose, v_equal_bounded, v_expand,
                       v_identity, v_invert, v_reduce)
from .ssgroup import (Budget, Portrait, SSPresentation, Word, WreathRecursion,
                      act, equal_bounded, is_trivial_bounded, portrait,
                      word_recursion)
from .tree import (check_complete_antichain, common_refinement,
                   cone_complement)
from .virtend import (AffineElem, Ring, RingElem, VirtEndSpec, affine_act,
                      affine_state, crosscheck_symbolic, faithfulness_search,
                      properness_valuation, relator_verify)

__version__ = "0.1.0"
