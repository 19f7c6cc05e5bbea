"""Deciding and certifying quantum state conversions through work extraction."""
from .config import Config, Tolerances
from .conversion import (ConversionVerdict, nielsen_locc_check, theorem1_sampling_check,
                         unital_convertible)
from .errors import (ConsistencyError, DecompositionError, InconclusiveError, NotConvertibleError,
                     NumericalError, TheoremViolationError, ValidationError, WorkConvError)
from .kernels import BACKEND
from .linalg import eigh, herm_func, sample_haar_unitary, sample_hs_state
from .majorisation import (ConversionCertificate, MajorisationReport, birkhoff_decompose,
                           build_mixed_unitary_certificate, majorises, t_transform_chain)
from .states import (DensityMatrix, FreeSet, Hamiltonian, PureBipartiteState, reduced_state,
                     reorder_descending, two_level_hamiltonian)
from .thermo import (WorkReport, delta, delta_mu_assisted, delta_omin_assisted, relative_entropy,
                     thermal_state, work, work_inf)
from .witness import (SamplingPlan, WitnessResult, free_set_max_delta, measure_m, measure_report,
                      witness_search)

__version__ = "0.1.0"
