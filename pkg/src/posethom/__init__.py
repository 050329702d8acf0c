"""Homology of finite posets with coefficients in functors to abelian groups."""

from .abelian import (AbHom, FpAbGroup, HomologyGroup, SmithForm, classify,
                      fp_homology_at, induced_map, is_isomorphism, parse_group,
                      render_group, smith_normal_form, validate_hom)
from .cube import (cube_complex, edge_sign, generator_gA, quasicellular_complex)
from .errors import ParseError, PosetHomError, PreconditionError, ValidationError
from .functor import (CoeffFunctor, NatTransform, constant_functor, glue_functor,
                      nat_chain_map, pullback, pushforward_hq, relation_map,
                      restrict, validate_functor)
from .homology import (ChainComplex, ChainMap, LongExactSequence,
                       antichain_decompose, chain_complex, homology,
                       induced_on_homology, local_shortcut, pair_les, reduce,
                       relative_chain_complex, relative_homology, triple_les)
from .khovanov import (LinkDiagram, khovanov_functor, khovanov_homology,
                       parse_pd, skein_les)
from .poset import (MonotoneMap, Poset, beat_points, boolean_lattice,
                    build_poset, chains, cone_sets, core, hocolim, is_antichain,
                    mapping_cylinder, opposite)
from .spectral import (SpectralPage, collapse_report, cover_to_map,
                       cylinder_compare, cylinder_les, e2_page, hocolim_e2)

__version__ = "0.1.0"

__all__ = [
    "AbHom", "antichain_decompose", "beat_points", "boolean_lattice", "build_poset",
    "chain_complex", "ChainComplex", "ChainMap", "chains", "classify", "CoeffFunctor",
    "collapse_report", "cone_sets", "constant_functor", "core", "cover_to_map",
    "cube_complex", "cylinder_compare", "cylinder_les", "e2_page", "edge_sign",
    "fp_homology_at", "FpAbGroup", "generator_gA", "glue_functor", "hocolim",
    "hocolim_e2", "homology", "HomologyGroup", "induced_map", "induced_on_homology",
    "is_antichain", "is_isomorphism", "khovanov_functor", "khovanov_homology",
    "LinkDiagram", "local_shortcut", "LongExactSequence", "mapping_cylinder",
    "MonotoneMap", "nat_chain_map", "NatTransform", "opposite", "pair_les",
    "parse_group", "parse_pd", "ParseError", "Poset", "PosetHomError",
    "PreconditionError", "pullback", "pushforward_hq", "quasicellular_complex",
    "reduce", "relation_map", "relative_chain_complex", "relative_homology",
    "render_group", "restrict", "skein_les", "smith_normal_form", "SmithForm",
    "SpectralPage", "triple_les", "validate_functor", "validate_hom",
    "ValidationError",
]
