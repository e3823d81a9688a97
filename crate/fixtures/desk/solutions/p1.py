import sys

data = list(map(int, sys.stdin.read().split()))
n, q = data[0], data[1]
size = 1
while size < n:
    size *= 2
INF = float("inf")
tree = [INF] * (2 * size)
tree[size:size + n] = data[2:2 + n]
for i in range(size - 1, 0, -1):
    tree[i] = min(tree[2 * i], tree[2 * i + 1])
out = []
pos = 2 + n
for _ in range(q):
    kind, x, y = data[pos:pos + 3]
    pos += 3
    if kind == 1:
        i = size + x - 1
        tree[i] = y
        i //= 2
        while i:
            tree[i] = min(tree[2 * i], tree[2 * i + 1])
            i //= 2
    else:
        lo, hi = size + x - 1, size + y
        best = INF
        while lo < hi:
            if lo & 1:
                best = min(best, tree[lo])
                lo += 1
            if hi & 1:
                hi -= 1
                best = min(best, tree[hi])
            lo //= 2
            hi //= 2
        out.append(best)
print("\n".join(map(str, out)))
