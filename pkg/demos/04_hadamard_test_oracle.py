# %% [markdown]
# # The generic Hadamard test as an independent check
#
# Ancilla H, controlled-U, phase gate, H, measure. Then
# p0 = (1 + Re(e^{i phase} Tr(U rho)))/2. With U = SWAP on |phi>|psi> and no
# phase this is the usual SWAP test. Its outcome probabilities should equal
# the optical protocol's conditional P+ and P-.

# %%
import numpy as np

from overlap_sim.hadamard_test import Ensemble, estimate_trace, hadamard_test_probs, swap_test_probs
from overlap_sim.protocol import run_exact
from overlap_sim.states import H, V, PolarizationState
from overlap_sim.statevec import SWAP, basis_state

rng = np.random.default_rng(1)
for _ in range(5):
    phi, psi = PolarizationState.random(rng), PolarizationState.random(rng)
    d = run_exact(phi, psi)
    print("hadamard:", np.round(swap_test_probs(phi, psi), 12), " protocol:", np.round((d.p_plus_given_accept, d.p_minus_given_accept), 12))

# %% [markdown]
# Mixed inputs are weighted ensembles. The two phase settings 0 and -pi/2
# give the real and imaginary parts of the trace.

# %%
rho = Ensemble(((0.5, basis_state("HV", ["1", "2"])), (0.5, basis_state("VH", ["1", "2"]))))
print("Tr(SWAP rho) for the HV/VH mixture:", estimate_trace(SWAP, rho))
for phase in (0.0, np.pi / 2, np.pi):
    print(f"phase={phase:.3f}", hadamard_test_probs(SWAP, Ensemble.product(H, PolarizationState(0.8, 0.6j)), phase))
