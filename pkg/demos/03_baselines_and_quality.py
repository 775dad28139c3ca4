"""
Comparing ART1 with K-Means and a SOM
=====================================

All three clusterings are scored with the same distance based measures.
"""

from art1web import art1
from art1web.art1 import Art1Params
from art1web.baselines import KMeansParams, SomParams, kmeans_train, som_train
from art1web.bench import som_shape
from art1web.quality import QualityReport, evaluate
from art1web.synth import gen_planted

m = gen_planted(n=64, k=5, per_cluster=40, proto_density=0.25, noise=0.02, seed=0)

_, art = art1.train(m, Art1Params(rho=0.4))
k = art.n_clusters
hist = []
km = kmeans_train(m, KMeansParams(k=k, seed=0), history=hist)
w, h = som_shape(k)
som = som_train(m, SomParams(grid_w=w, grid_h=h, seed=0))

print("k-means objective:", [round(x, 1) for x in hist])
print(",".join(QualityReport.CSV_HEADER))
for c in (art, km, som):
    print(",".join(map(str, evaluate(c, m, sigma=1.0, beta=0.5, truth=m.ground_truth).csv_row())))
