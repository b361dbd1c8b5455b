# %% [markdown]
# # Exact protocol statistics
#
# Keep only the (Psi+,Psi+) and (Psi-,Psi-) records. Each has probability
# 1/16, so a run succeeds with probability 1/8. The control photon, measured
# in the +/- basis, then gives P+ - P- = |<phi|psi>|^2.

# %%
import numpy as np

from overlap_sim.protocol import (
    ChiBranch,
    branch_state,
    ideal_cswap_output,
    measure_control,
    overlap_from_distribution,
    run_exact,
    z_correction,
)
from overlap_sim.states import PolarizationState

rng = np.random.default_rng(0)
for _ in range(5):
    phi, psi = PolarizationState.random(rng), PolarizationState.random(rng)
    d = run_exact(phi, psi)
    print(
        f"p_accept={d.p_accept:.6f}  P+={d.p_plus_given_accept:.6f}  "
        f"recovered={overlap_from_distribution(d):.6f}  true={d.overlap_true:.6f}"
    )

# %% [markdown]
# After the (Psi+,Psi+) record, modes (3,4,C) hold exactly what an ideal
# controlled-SWAP makes of |phi>|psi>|+>. The (Psi-,Psi-) record differs by Z
# on each output photon. That Z changes nothing about the control statistics,
# so the correction can be skipped.

# %%
phi, psi = PolarizationState(0.6, 0.8j), PolarizationState.from_angles(0.7, 2.0)
_, chi_pp = branch_state(phi, psi, ChiBranch.PLUS_PLUS)
_, chi_mm = branch_state(phi, psi, ChiBranch.MINUS_MINUS)
print("|chi++ - ideal|        =", np.max(np.abs(chi_pp.amps - ideal_cswap_output(phi, psi).amps)))
print("|Z Z chi-- - chi++|    =", np.max(np.abs(z_correction(chi_mm).amps - chi_pp.amps)))
print("control on chi++:", measure_control(chi_pp))
print("control on chi--:", measure_control(chi_mm))

# %% [markdown]
# The mixed records are rejected. There the Z acts on only one teleported
# photon, which spoils the overlap law.

# %%
_, chi_pm = branch_state(phi, psi, ChiBranch.PLUS_MINUS)
p_plus, p_minus = measure_control(chi_pm)
print("mixed branch P+ - P- =", p_plus - p_minus, " vs overlap", phi.overlap(psi))
