# Reads a host path from stdin, then tries to read it and to open a socket.
import socket
import sys

path = sys.stdin.read().strip()
try:
    with open(path) as f:
        f.read()
    print("file:leak")
except OSError:
    print("file:blocked")
try:
    socket.create_connection(("1.1.1.1", 53), timeout=1).close()
    print("net:leak")
except OSError:
    print("net:blocked")
try:
    with open("/usr/escape-probe", "w") as f:
        f.write("x")
    print("write:leak")
except OSError:
    print("write:blocked")
