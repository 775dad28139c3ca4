"""
ART1 and the vigilance parameter
================================

Higher vigilance demands a closer match before a host joins a cluster, so
the number of clusters grows with rho.
"""

import numpy as np

from art1web import art1
from art1web.art1 import Art1Params
from art1web.quality import rand_index
from art1web.synth import gen_planted

m = gen_planted(n=32, k=4, per_cluster=25, proto_density=0.2, noise=0.0, seed=1)

for rho in np.arange(0.1, 1.0, 0.1):
    model, c = art1.train(m, Art1Params(rho=round(rho, 2)))
    ri = rand_index(c.assignments, m.ground_truth)
    print(f"rho={rho:.1f}  clusters={c.n_clusters:2d}  epochs={model.epochs}  rand={ri:.3f}")

# prototypes at a moderate rho are the AND of their members
model, c = art1.train(m, Art1Params(rho=0.5))
for j in range(model.n_clusters):
    print(j, "".join(map(str, model.top_down[j])), c.sizes()[j])

# a trained model can classify new patterns without learning
p = m.bits[0]
print("row 0 ->", art1.assign(model, p))
