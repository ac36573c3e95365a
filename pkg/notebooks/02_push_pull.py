"""
Push, pull and push-pull
========================

Single runs on a random regular multigraph and on the complete graph.
"""

# %%
import math

import numpy as np

from rumornet import CompleteGraph, build_regular, c_d_regular, run_protocol, uniform_pairing

rng = np.random.default_rng(1)
n = 20_000
g = uniform_pairing(build_regular(n, 5), rng)

# %% rounds until everybody knows, for each protocol
for name in ("push", "pull", "push_pull"):
    res = run_protocol(name, g, None, 10_000, rng, eps=(0.01,))
    print(f"{name:9s} T={res.T:3d}  T_0.01={res.t_eps[0.01]:3d}")

# %% push on a 5-regular graph against the regular-graph constant
Ts = [run_protocol("push", g, None, 10_000, rng).T for _ in range(20)]
print("mean T / ln n =", round(np.mean(Ts) / math.log(n), 3), " c_5 =", round(c_d_regular(5), 4))

# %% the complete graph, where T is close to log2 n + ln n
for k in (10, 12, 14):
    kn = CompleteGraph(2 ** k)
    Ts = [run_protocol("push", kn, 0, 1000, rng).T for _ in range(10)]
    print(2 ** k, np.mean(Ts), round(k + math.log(2 ** k), 2))

# %% a trajectory as CSV
print(run_protocol("push", g, 0, 1000, rng).trajectory_csv()[:120])
