line = input()
print(sum(ch in "aeiou" for ch in line))
