"""Beatty zeta functions, their theta-Mellin continuation, and the pole at s = 1."""

from .beatty import (PulseWave, beatty_count, beatty_terms, fourier_coeff, indicator,
                     indicator_array, pulse_wave_eval, truncated_indicator)
from .continuation import (ContinuationConfig, ResidueReport, ZSharpResult, grid_scan,
                           residue_at_one, scan_to_csv, z_direct, z_fluctuation,
                           z_fluctuation_residue, z_sharp)
from .diophantine import (DiscrepancyReport, HighPrecision, IrrationalNumber, NearHit, Quadratic,
                          cf_expand, convergents, estimate_type, golden, kronecker_points,
                          lattice_decompose, near_hits, parse_alpha, sqrt2, star_discrepancy)
from .errors import (AmbiguousDecomposition, BeattyZetaError, BudgetExceeded, DomainError,
                     PoleError, PrecisionError, RegionUnsupported, UnsupportedInput)
from .special import (EvalResult, complex_gamma, hurwitz_zeta, lerch_direct, riemann_zeta,
                      zeta_sharp)
from .theta import PhiContext, phi_direct, phi_transformed, psi, psi_alpha, theta

__version__ = "0.1.0"
