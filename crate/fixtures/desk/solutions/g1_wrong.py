import bisect
import sys

data = list(map(int, sys.stdin.read().split()))
tails = []
for x in data[1:1 + data[0]]:
    k = bisect.bisect_right(tails, x)
    if k == len(tails):
        tails.append(x)
    else:
        tails[k] = x
print(len(tails))
