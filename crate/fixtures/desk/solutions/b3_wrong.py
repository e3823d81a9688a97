line = input()
print(sum(ch in "aeio" for ch in line))
