"""
Sampling configuration-model multigraphs
========================================

Build a degree sequence, pair its stubs, and compare the simple fraction with
the asymptotic formula.
"""

# %%
import numpy as np

from rumornet import build_power_law, build_regular, janson_simple_prob, uniform_pairing
from rumornet.confmodel import enumerate_pairings, is_simple, new_stub_space, complete_matching, simple_fraction

rng = np.random.default_rng(0)

# %% a 3-regular sequence and one uniform pairing of its stubs
seq = build_regular(200, 3)
g = uniform_pairing(seq, rng)
print(g.m, "edges, simple:", is_simple(g))

# %% the same law, reached by matching stubs one at a time
g2 = complete_matching(new_stub_space(seq.degrees), rng)
print("loops:", int(np.sum(g2.edges[:, 0] == g2.edges[:, 1])))

# %% [2, 2] has three pairings, two of which give a double edge
pairings = list(enumerate_pairings(4))
print(len(pairings), pairings)

# %% simple fraction against exp(-(sum d^2)^2 / (16 |E|^2) + 1/4)
for d in (3, 4):
    s = build_regular(200, d)
    print(d, round(simple_fraction(s, 20_000, rng), 4), round(janson_simple_prob(s), 4))

# %% a truncated power law with exponent 3.5 and minimum degree 3
pl = build_power_law(10_000, 3.5, 3)
print("max degree", pl.max_degree, "mean", round(pl.mean_degree, 3))
print({k: pl.counts[k] for k in sorted(pl.counts)[:6]})
