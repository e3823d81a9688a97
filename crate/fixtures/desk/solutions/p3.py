import sys

data = list(map(int, sys.stdin.read().split()))
n = data[0]
LOG = max(1, n.bit_length())
up = [[1] * (n + 1) for _ in range(LOG)]
depth = [0] * (n + 1)
for v in range(2, n + 1):
    p = data[v - 1]
    up[0][v] = p
    depth[v] = depth[p] + 1
for k in range(1, LOG):
    prev, cur = up[k - 1], up[k]
    for v in range(1, n + 1):
        cur[v] = prev[prev[v]]
q = data[n]
out = []
for i in range(q):
    u, v = data[n + 1 + 2 * i], data[n + 2 + 2 * i]
    if depth[u] < depth[v]:
        u, v = v, u
    diff = depth[u] - depth[v]
    for k in range(LOG):
        if diff >> k & 1:
            u = up[k][u]
    if u != v:
        for k in range(LOG - 1, -1, -1):
            if up[k][u] != up[k][v]:
                u, v = up[k][u], up[k][v]
        u = up[0][u]
    out.append(u)
print("\n".join(map(str, out)))
