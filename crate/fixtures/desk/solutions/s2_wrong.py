import bisect
import sys

data = list(map(int, sys.stdin.read().split()))
n, q = data[0], data[1]
a = data[2:2 + n]
print("\n".join(str(bisect.bisect_left(a, x)) for x in data[2 + n:2 + n + q]))
