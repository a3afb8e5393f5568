"""Large Fourier spectra of subsets of Z/NZ: additive energies, Gowers norms,
dissociated bases and Bohr sets, with exact verification sweeps."""

__version__ = "0.1.0"

from ._validation import BudgetError, InputError, PrecisionError, SqrtFraction
from .bohr import (
    bohr_set,
    bourgain_size_check,
    two_a_minus_two_a,
    verify_bohr_containment,
    verify_full_proposition,
)
from .core import (
    CyclicGroup,
    ResidueSet,
    SetSpec,
    density,
    make_set,
    negate_set,
    parse_set_spec,
)
from .dissociated import (
    ChangDecomposition,
    ImprovedDecomposition,
    SpanRepresentation,
    chang_decomposition,
    empirical_rudin_constant,
    improved_decomposition,
    is_dissociated,
    is_lambda_family,
    maximal_dissociated_subset,
    rudin_identity_check,
    span,
    statement_bound_check,
)
from .energy import (
    EnergyReport,
    energy_tk,
    energy_tk_bruteforce,
    tk_lower_bound,
    verify_level_lemma,
    verify_main_theorem,
)
from .fourier import (
    DFTTransformer,
    char_function_identity_check,
    convolution,
    cross_correlation_identity_check,
    dft,
    inverse_dft,
    parseval_check,
)
from .spectrum import LargeSpectrum, dyadic_levels, spectrum_size_bound_check, spectrum_threshold
from .systems import (
    build_matrix,
    count_solutions,
    gowers_monotonicity_check,
    gowers_norm,
    verify_matrix_theorem,
)
