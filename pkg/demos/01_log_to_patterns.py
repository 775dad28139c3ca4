"""
From an access log to binary pattern vectors
============================================

Generate a small synthetic log, parse it, pick the URLs that enough hosts
visited and turn every host into a 0/1 row.
"""

from art1web.features import binarize, build_base_vector, dumps_matrix
from art1web.logparse import RecordFilter, aggregate, iter_records, ParseStats
from art1web.synth import gen_log

text, planted = gen_log(hosts=12, urls=8, k=3, seed=4)
print(text.splitlines()[0])

# a couple of lines the parser should skip
lines = text.splitlines() + ["garbage", 'h - - [t] "GET /x.gif HTTP/1.0" 500 -']
stats = ParseStats()
records = list(iter_records(lines, stats))
print(stats)

counts = aggregate(records, RecordFilter(ext_blocklist=(".gif",)))
print(counts.total(), "accesses by", len(counts.hosts), "hosts on", len(counts.urls), "urls")

base = build_base_vector(counts, min_url_support=2)
matrix, dropped = binarize(counts, base)
print("dropped hosts:", dropped)
print(dumps_matrix(matrix))
