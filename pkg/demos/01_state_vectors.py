# %% [markdown]
# # State vectors over labeled photon modes
#
# Every photon carries one polarization qubit, H -> 0 and V -> 1. A state
# remembers which modes it lives on, and the first mode is the most
# significant bit of the basis index.

# %%
import numpy as np

from overlap_sim.states import BellKind, PolarizationState, bell, pm_state
from overlap_sim.statevec import H_GATE, SWAP, Z, apply, basis_state, inner, project, tensor

hv = tensor(basis_state("H", ["1"]), basis_state("V", ["2"]))
print(hv)

# %% [markdown]
# Gates act on named modes and leave every other mode alone.

# %%
print(apply(H_GATE, ["C"], basis_state("H", ["C"])))  # |+>_C
print(apply(Z, ["1"], basis_state("V", ["1"])))  # -|V>_1
print(apply(SWAP, ["1", "2"], hv))  # |V>_1 |H>_2

# %% [markdown]
# Projective measurement returns the Born probability together with the
# renormalized state of whatever was not measured.

# %%
for kind in BellKind:
    p, _ = project(hv, ["1", "2"], bell(kind, "1", "2"))
    print(f"P({kind.value:9s}) = {p:.3f}")

phi = PolarizationState(0.6, 0.8j)
print("<+|phi> =", inner(pm_state("+", "1"), phi.on("1")))
print("|<+|phi>|^2 =", abs(inner(pm_state("+", "1"), phi.on("1"))) ** 2, "=", 0.5 * abs(0.6 + 0.8j) ** 2)
