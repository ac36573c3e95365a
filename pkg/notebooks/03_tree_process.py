"""
The branching tree process
==========================

Each vertex of the tree has delta stubs, one of which is used by its parent.
Every round each vertex picks one of its stubs; picking a free stub spawns a
child. Free stubs grow by 2(1 - 1/delta) per round.
"""

# %%
import numpy as np

from rumornet.drp import TreeState, tree_step, verify_tree_growth

rng = np.random.default_rng(2)

# %% one run from a single seed vertex
t = TreeState.seeded(3, 1)
for _ in range(12):
    t = tree_step(t, rng)
    print(t.round, t.vertices, t.free, t.newborns)

# %% averaged growth ratios over 20 runs
for delta in (3, 4, 5):
    runs = []
    for s in range(20):
        r = np.random.default_rng([delta, s])
        hist = [TreeState.from_free_stubs(delta, 10_000)]
        for _ in range(30):
            hist.append(tree_step(hist[-1], r))
        runs.append(hist)
    rep = verify_tree_growth(runs)
    print(delta, rep.ok, round(float(np.mean(rep.growth_ratios)), 4), round(rep.growth_target, 4))
