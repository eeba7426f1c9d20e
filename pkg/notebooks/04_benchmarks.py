# %% [markdown]
# # Throughput benchmarks
#
# Three synthetic tiers (matrix multiply, a fixed two-tensor expression,
# random binary expressions) and the per-bucket / per-lightcone / whole
# circuit figures from a real QAOA run.

# %%
from qaoa_tn import Angles, random_regular
from qaoa_tn import bench
from qaoa_tn.engine import MatmulBackend, NaiveBackend

rows = []
for backend in (NaiveBackend(), MatmulBackend()):
    rows += bench.bench_matmul([32, 128, 256], backend=backend)
    rows += bench.bench_tncontract_fixed([4, 8, 12], backend=backend)
    rows += bench.bench_tncontract_random([8, 12, 16], backend=backend)
    rows += bench.bench_from_circuit(random_regular(16, 3, seed=0), Angles.random(2, seed=0),
                                     backend)
print(bench.markdown_summary(rows))

# %%
for r in rows[:6]:
    print(r.kind, r.param, r.ops, f"{r.flops / 1e9:.3f} GFLOP/s")
