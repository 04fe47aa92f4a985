"""charpforms: exact differential forms and mod-p symbol decompositions
over rational function fields of small positive characteristic."""

from .decompose import (
    DecompositionContext,
    ExtensionCertificate,
    SymbolDecomposition,
    cartier_preimage,
    decompose_top_nu,
    decompose_wedge_nu,
    kernel_decompose,
    normalize_line_form,
    power_annihilator,
    subspace_transporter,
)
from .errors import CharpError
from .forms import (
    DifferentialForm,
    FramedExtension,
    PureSymbol,
    artin_schreier,
    change_pbasis,
    component_project,
    differential,
    dlog_element,
    dlog_symbol,
    inverse_cartier,
    is_exact,
    nu_member,
    restrict_constant_ext,
    standard_frame,
    top_class_coordinate,
    transfer_constant_ext,
)
from .gf import GaloisField
from .hypersurface import (
    HypersurfaceAnalysis,
    HypersurfacePoly,
    QuotientField,
    analyze_hypersurface,
    build_function_field,
    kernel_verify_instance,
    restrict_form_to_FX,
    symbol_in_kernel_predicate,
)
from .parser import (
    format_element,
    parse_element,
    parse_form,
    parse_hypersurface,
    parse_symbol,
)
from .pbasis import (
    extend_to_pbasis,
    in_p_subfield,
    p_independent,
    reduce_to_p_independent,
)
from .rational import FieldContext, FieldElement, Polynomial

__version__ = "0.1.0"
