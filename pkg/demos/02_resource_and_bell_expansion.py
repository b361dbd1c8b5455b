# %% [markdown]
# # The |C-SWAP-> resource and the sixteen Bell components
#
# The resource is two |Psi+> teleportation channels. The control photon picks
# their wiring: (3,3')(4,4') when it is H, and (4,3')(3,4') when it is V.
# Joined with the inputs |phi>_1 |psi>_2 this gives a 7-photon, 128-amplitude
# state.

# %%
import numpy as np

from overlap_sim.bellmeas import expand_bell_pairs, reconstruct
from overlap_sim.states import PolarizationState, build_full_state, build_resource

resource = build_resource()
print(resource.modes, resource.dim)
for idx in np.flatnonzero(np.abs(resource.amps) > 1e-12):
    bits = format(idx, "05b").replace("0", "H").replace("1", "V")
    print(" ", dict(zip(resource.modes, bits)), f"{resource.amps[idx].real:+.4f}")

# %% [markdown]
# Express photons (1,3') and (2,4') in the Bell basis. Every one of the
# sixteen joint outcomes turns up with weight 1/16, whatever the inputs.
# Linear optics can only label Psi+ and Psi-.

# %%
phi = PolarizationState.from_angles(1.2, 0.4)
psi = PolarizationState.from_angles(2.5, -1.0)
full = build_full_state(phi, psi)
terms = expand_bell_pairs(full)
for t in terms:
    print(f"{t.kind1.value:9s} {t.kind2.value:9s} weight={t.weight:.6f}")
print("sum of weights:", sum(t.weight for t in terms))
print("reconstruction error:", np.max(np.abs(reconstruct(terms).amps - full.amps)))
