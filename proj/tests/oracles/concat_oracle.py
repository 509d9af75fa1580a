"""Reference values for the block concatenation w = w_1 w_2 ...

w_n = u_n v_n, u_n = the 2^n binary words of length n in ascending order,
each followed by n zeros, v_n = zeros of the same length as u_n.
Prints |w_1..w_12| and factor counts of that prefix for a few lengths.
"""


def block(n):
    u = "".join(format(i, "0{}b".format(n)) + "0" * n for i in range(2 ** n))
    return u + "0" * len(u)


def main():
    w = "".join(block(n) for n in range(1, 13))
    print("length", len(w))
    print("first8", w[:8])
    for n in (1, 2, 8, 12, 13, 16, 24, 32):
        print("p", n, len({w[i:i + n] for i in range(len(w) - n + 1)}))


if __name__ == "__main__":
    main()
