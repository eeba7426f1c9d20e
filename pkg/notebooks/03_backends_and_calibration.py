# %% [markdown]
# # Backends and the mixed-dispatch threshold
#
# The naive backend has little overhead per call; the matmul backend
# reshapes operands into matrices and pays off on wide buckets. The
# calibration trial times both per width and picks the crossover.

# %%
from qaoa_tn.engine import MatmulBackend, MixedBackend, NaiveBackend
from qaoa_tn.engine.calibrate import calibrate

cal = calibrate(NaiveBackend(), MatmulBackend(), max_width=20, repeats=3)
print("threshold", cal.threshold, "crossover", cal.crossover)
for w in cal.widths():
    print(f"{w:3d} naive {cal.low_times[w]:.2e}s  matmul {cal.high_times[w]:.2e}s  "
          f"speedup {cal.low_times[w] / cal.high_times[w]:.2f}")

# %% [markdown]
# A mixed backend routes each bucket by width; timing records keep the
# backend actually used.

# %%
from collections import Counter

from qaoa_tn import Angles, random_regular
from qaoa_tn.engine import energy_expectation

mixed = MixedBackend(cal.threshold)
res = energy_expectation(random_regular(20, 3, seed=2), Angles.random(3, seed=1), mixed)
print(res.energy)
print(Counter((r.backend, r.width > cal.threshold) for r in res.records))
