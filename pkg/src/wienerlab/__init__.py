"""Recovering the atoms of a measure from averages of its Fourier transform.

Groups are the torus T^d, Euclidean space R^d and finite abelian groups.
"""

from .finite import exact_wiener, oracle_cross_check
from .folner import FolnerSet, folner_average, folner_defect, wiener_recover
from .fourier import TabulatedSpectrum, cantor_hat, finite_dft, mu_hat, parseval_measure_check
from .groups import GroupContext, char_eval, haar_normalizers
from .harness import ConfigError, atom_scan, load_config, parse_config, rate_fit, run_scenario
from .measures import AcComponent, CantorComponent, Measure, dirac, make_measure, translate, true_atom
from .quadrature import QuadratureError
from .records import RunRecord
from .special import bessel_j, gamma_fn
from .torus_br import (abel_identity_check, beta, beta_exact, br_kernel_torus, dirichlet_spherical,
                       growth_diagnostic, wiener_br_torus)
from .weighted import WeightKernel, br_mean_rd, m_alpha, m_alpha_hat, scaled_weight_mean

__all__ = [
    "AcComponent", "CantorComponent", "ConfigError", "FolnerSet", "GroupContext", "Measure",
    "QuadratureError", "RunRecord", "TabulatedSpectrum", "WeightKernel",
    "abel_identity_check", "atom_scan", "bessel_j", "beta", "beta_exact", "br_kernel_torus",
    "br_mean_rd", "cantor_hat", "char_eval", "dirac", "dirichlet_spherical", "exact_wiener",
    "finite_dft", "folner_average", "folner_defect", "gamma_fn", "growth_diagnostic",
    "haar_normalizers", "load_config", "m_alpha", "m_alpha_hat", "make_measure", "mu_hat",
    "oracle_cross_check", "parse_config", "parseval_measure_check", "rate_fit", "run_scenario",
    "scaled_weight_mean", "translate", "true_atom", "wiener_br_torus", "wiener_recover",
]
__version__ = "0.1.0"
