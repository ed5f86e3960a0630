"""Numerics for bosonic cat and pair-cat quantum error-correcting codes."""

__version__ = "0.1.0"

from .fock import (DensityOperator, Ket, ModeSpace, MultiModeSpace, Operator,
                   TruncationError, annihilation_op, creation_op, difference_op,
                   identity_op, number_op, sector_projector, space, swap_op,
                   total_number_op)
from .states import (cat_code_state, cat_state, coherent, diff_code_norm, diff_norm,
                     multimode_code_state, pair_cat_state, pair_coherent,
                     parity_code_norm, parity_norm, two_mode_squeezed)
from .codes import (CodeSpace, KLCoefficients, KLReport, build_code, dephasing_projection,
                    dephasing_sweet_spot, kl_decompose, kl_report, stabilizer_check)
from .channels import (KrausChannel, analytic_loss_probability, dephasing_kraus,
                       loss_kraus, loss_probability, mean_total_photons,
                       mean_total_photons_closed, param_for_mean_photons)
from .dynamics import (LindbladGenerator, dephasing_rate_spectrum, dissipator_apply,
                       evolve, recovery_jump, zeno_projected_hamiltonian)
from .gates import (ProjectedGate, holonomic_z, junction_z, kerr_cz, kerr_z_rotation,
                    x_and_xx_generators)
from .mmqec import (DecodedError, SyndromeLattice, certify_correctability, decode_loss,
                    decode_single_mode_loss_gain, syndrome_of)
from .quasiprob import DistributionGrid, q_function, w_function
from .recovery import (RecoverySpec, entanglement_fidelity, figure5_sweep,
                       transpose_recovery)
from .reservoir import (EffectiveParams, ReservoirParams, autonomous_correction_demo,
                        effective_params, readout_displacement, validate_elimination)
