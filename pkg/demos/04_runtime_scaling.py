"""
Runtime as the number of hosts grows
====================================

A reduced benchmark: fewer repetitions so it finishes in a few seconds.
"""

from art1web.bench import BenchConfig, fit_scaling, run_timing, timings_csv

cfg = BenchConfig(host_counts=[100, 200, 400, 800], repetitions=3)
rows = run_timing(cfg)
print(timings_csv(rows))

for algo, (slope, r2) in fit_scaling(rows).items():
    print(f"{algo:7s} log-log slope {slope:.2f} (r^2 {r2:.3f})")
