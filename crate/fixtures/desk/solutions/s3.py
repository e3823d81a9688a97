import sys
from collections import deque

lines = sys.stdin.read().split("\n")
r, c = map(int, lines[0].split())
g = lines[1:1 + r]
for i in range(r):
    for j in range(c):
        if g[i][j] == "S":
            s = (i, j)
        elif g[i][j] == "T":
            t = (i, j)
dist = {s: 0}
dq = deque([s])
while dq:
    i, j = dq.popleft()
    for ni, nj in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
        if 0 <= ni < r and 0 <= nj < c and g[ni][nj] != "#" and (ni, nj) not in dist:
            dist[(ni, nj)] = dist[(i, j)] + 1
            dq.append((ni, nj))
print(dist.get(t, -1))
