"""Critical parameters and bound states of quantum wells from
Hankel-determinant conditions on Riccati series (the Riccati-Pade method
and its modified threshold-adapted variant)."""

from .hankel import (HankelProblem, hankel_eval, hankel_eval_exact,
                     hankel_series)
from .perturbation import (OrderDeficiencyError, PerturbationSeries,
                           perturb_at_threshold, perturb_stable,
                           slope_sign_check)
from .potentials import (PotentialSpec, QCoeffs, gaussian_1d, gaussian_radial,
                         parse_potential, poschl_teller, q_coeffs,
                         rational_well, yukawa)
from .rings import (BigReal, Dual, Rational, XiSeries, digits_for_dimension)
from .series import (AnsatzCoeffs, GeometrySpec, SingularAnsatzError,
                     ansatz_coeffs, f_central, f_parity, g_central, g_parity,
                     needed_jmax)
from .solver import (EigenBracket, RootLostError, RootSequence,
                     critical_parameters, eigenvalue_bracket,
                     merged_parity_criticals, refine_root, scan_sign_changes,
                     spurious_scan, track_sequence)

__version__ = "0.1.0"

__all__ = [
    "AnsatzCoeffs", "BigReal", "Dual", "EigenBracket", "GeometrySpec",
    "HankelProblem", "OrderDeficiencyError", "PerturbationSeries",
    "PotentialSpec", "QCoeffs", "Rational", "RootLostError", "RootSequence",
    "SingularAnsatzError", "XiSeries", "ansatz_coeffs", "critical_parameters",
    "digits_for_dimension", "eigenvalue_bracket", "f_central", "f_parity",
    "g_central", "g_parity", "gaussian_1d", "gaussian_radial", "hankel_eval",
    "hankel_eval_exact", "hankel_series", "merged_parity_criticals",
    "needed_jmax", "parse_potential", "perturb_at_threshold", "perturb_stable",
    "poschl_teller", "q_coeffs", "rational_well", "refine_root",
    "scan_sign_changes", "slope_sign_check", "spurious_scan", "track_sequence",
    "yukawa",
]
