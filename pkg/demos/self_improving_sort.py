# A sorter that adapts to its input distribution.
#
# Training learns bucket boundaries from pooled samples and, per array
# position, a small search tree biased toward that position's likely buckets.
# When positions are predictable, routing is O(1) comparisons and buckets stay
# tiny, beating an oblivious comparison sort; a comparison budget falls back
# to mergesort on inputs the training never prepared it for.
#
# Run: python3 demos/self_improving_sort.py

import numpy as np

from algoselect.sorter import mergesort_count, sort, train_sorter

rng = np.random.default_rng(3)
n = 256

# Each position concentrates around its own (shuffled) location: individually
# predictable positions, globally unsorted arrays.
centers = ((np.arange(n) + 0.5) / n)[rng.permutation(n)]
draw = lambda count: [np.clip(centers + rng.uniform(-0.3 / n, 0.3 / n, n), 0, 1) for _ in range(count)]

sorter = train_sorter(draw(400))
print(f"trained: {sorter.boundaries.size} boundaries, "
      f"<= {sorter.node_cap} tree nodes per position, "
      f"fallback budget {sorter.fallback_threshold:.0f} comparisons")

ours, merge = [], []
for arr in draw(200):
    out, stats = sort(sorter, arr)
    assert np.array_equal(out, np.sort(arr))
    ours.append(stats.comparisons)
    merge.append(mergesort_count(arr.tolist())[1])
print(f"matched inputs:  mean comparisons {np.mean(ours):7.1f}  (mergesort {np.mean(merge):.1f})")

hostile = np.linspace(0.503, 0.5, n)  # everything in one bucket, reverse order
out, stats = sort(sorter, hostile)
assert np.array_equal(out, np.sort(hostile))
print(f"hostile input:   fallback={stats.fallback}, comparisons {stats.comparisons} "
      f"(routing {stats.routing_comparisons}, insertion {stats.insertion_comparisons}, "
      f"mergesort {stats.merge_comparisons})")

uniform = rng.uniform(0, 1, n)
out, stats = sort(sorter, uniform)
print(f"uniform input:   fallback={stats.fallback}, comparisons {stats.comparisons}, "
      f"hot bucket held {stats.occupancy.max()} keys")
