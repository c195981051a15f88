"""Z-eigenpairs of orthogonally diagonalizable symmetric tensors."""

from .constants import TOL, Tolerances
from .enumeration import (Eigenpair, EnumerationReport, IndexSelection, assemble_eigenpair,
                          coefficients_for, count_complex_classes, enumerate_real,
                          real_class_count, theoretical_bound)
from .errors import (ConvergenceError, IntegrityError, InvalidDecompositionError,
                     RankDeficiencyError, ZeroUpdateError)
from .linalg import (SymEigResult, gram_schmidt, orthonormal_complement,
                     projector_complement, sym_eig)
from .odt import OrthoDiagDecomp, materialize, random_decomp, validate
from .oracle import discover, fd_gradient_check, fd_hessian_check, shifted_power_iterate
from .stability import (LOCAL_MAX, LOCAL_MIN, SADDLE, StabilityReport, classify,
                        hessian, predicted_spectrum, projected_hessian, verify_tangent_equivalence)
from .symtensor import (SymTensor, contract_full, contract_grad, contract_hess,
                        from_rank_one_sum, symmetry_check)

__version__ = "0.1.0"
