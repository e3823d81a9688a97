import sys

data = list(map(int, sys.stdin.read().split()))
n = data[0]
parent = [0, 0] + data[1:n]


def chain(u):
    seen = [u]
    while u != 1:
        u = parent[u]
        seen.append(u)
    return seen


q = data[n]
out = []
for i in range(q):
    u, v = data[n + 1 + 2 * i], data[n + 2 + 2 * i]
    if u in chain(v):
        out.append(u)
    elif v in chain(u):
        out.append(v)
    else:
        out.append(1)
print("\n".join(map(str, out)))
