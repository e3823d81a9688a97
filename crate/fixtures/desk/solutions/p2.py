import sys

data = list(map(int, sys.stdin.read().split()))
a = data[1:1 + data[0]]
ranks = {v: i + 1 for i, v in enumerate(sorted(set(a)))}
tree = [0] * (len(ranks) + 1)
count = 0
for seen, x in enumerate(a):
    i = ranks[x]
    while i > 0:
        count -= tree[i]
        i -= i & -i
    count += seen
    i = ranks[x]
    while i < len(tree):
        tree[i] += 1
        i += i & -i
print(count)
