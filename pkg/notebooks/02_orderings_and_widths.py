# %% [markdown]
# # Elimination orders and bucket widths
#
# The cost of bucket elimination is set by the widest bucket. Here we
# compare the deterministic min-degree order with the best of several
# random-tie restarts, and look at the width histogram.

# %%
from collections import Counter

from qaoa_tn import Angles, random_regular
from qaoa_tn.engine import plan
from qaoa_tn.ordering import width_histogram

g = random_regular(30, 3, seed=1)
angles = Angles.random(4, seed=0)

# %%
for ordering in ("greedy", "rgreedy"):
    plans = plan(g, angles, ordering=ordering)
    widest = max(max(width_histogram(s)) for _, _, s in plans)
    print(f"{ordering:8s} widest bucket {widest}")

# %%
hist = Counter()
for _, _, sched in plan(g, angles, ordering="rgreedy"):
    hist.update(width_histogram(sched))
total = sum(hist.values())
for w in sorted(hist):
    print(f"{w:3d} {hist[w]:5d} {'#' * (60 * hist[w] // max(hist.values()))}")
print("share with width <= 6:", round(sum(c for w, c in hist.items() if w <= 6) / total, 3))

# %% [markdown]
# Merging folds a bucket into a later one when its variables are already
# covered there, so fewer, larger contractions run.

# %%
plain = sum(len(s) for _, _, s in plan(g, angles, ordering="rgreedy"))
merged = sum(len(s) for _, _, s in plan(g, angles, ordering="rgreedy", merged=True))
print(plain, "->", merged, "buckets")
