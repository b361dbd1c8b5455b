# %% [markdown]
# # Shot-by-shot simulation
#
# Each shot draws the two Bell outcomes and, when the record is accepted,
# the control result. Shot k uses Philox block k of the seed's stream, so
# runs are reproducible and can be split and merged freely.

# %%
from overlap_sim.protocol import run_exact, run_shot
from overlap_sim.rng import RandomStream
from overlap_sim.sampler import estimate, run_trials
from overlap_sim.states import H, PLUS

for k in range(8):
    print(k, run_shot(H, PLUS, RandomStream.for_shot(42, k)))

# %%
counts = run_trials(H, PLUS, 1_000_000, seed=42)
report = estimate(counts)
print(counts)
print(report)
print("exact overlap:", run_exact(H, PLUS).overlap_true)

# %% [markdown]
# Split-and-merge reproduces the single run exactly.

# %%
a = run_trials(H, PLUS, 400_000, seed=42)
b = run_trials(H, PLUS, 600_000, seed=42, start=400_000)
print("merged == whole:", a + b == counts)
