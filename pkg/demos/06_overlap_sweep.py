# %% [markdown]
# # The linear law P+ = (1 + overlap)/2
#
# Hold phi = H and rotate psi = cos(t)H + sin(t)V from t = 0 to pi/2. The
# table matches what `overlap-sim sweep --csv` prints, and the CSV can go
# straight into any plotting tool.

# %%
import io

from overlap_sim import cli

buf = io.StringIO()
cli.main(["sweep", "--steps", "7", "--shots", "200000", "--seed", "3"], out=buf)
print(buf.getvalue())
