"""50-digit oracle for the structure functions (mpmath).

Closed forms are not used here: g2 and g3 come from nested quadrature of F1,
minima from root finding on numerical derivatives. Values printed here are
frozen in oracle_values.hpp.
"""
from mpmath import mp, mpf, log, findroot, quad, diff

mp.dps = 50


def h3(Q, n, d=1):
    return d * (1 - n * log(Q) / (n + 1) - n / (n + 1) ** 2 * (Q ** (-(n + 1)) - 1))


def g1(Q, n, c):
    return -(Q ** (1 - n) - 1) / (n - 1) - n / c * log(Q)


def main():
    for nn in ("2", "2.25", "2.5", "3"):
        print("Q_star", nn, findroot(lambda q: h3(q, mpf(nn)), mpf("0.55")))

    n, c, d = mpf("2.5"), mpf("1.7"), 3
    Q1 = (c / n) ** (1 / (n - 1))
    print("Q1", Q1, "g1(Q1)", g1(Q1, n, c), "mu1_min", -g1(Q1, n, c) / d)

    def g2(Q):
        return quad(lambda q: g1(q, n, c) * q ** n, [1, Q])

    def mu2(Q):
        return -g2(Q) / (d * (Q ** (n + 1) - 1) / (n + 1))

    Q2 = findroot(lambda q: diff(mu2, q), mpf("0.7"))
    print("Q2", Q2, "mu2_min", mu2(Q2), "mu1(Q2)", -g1(Q2, n, c) / d)

    def g3(Q):
        return g1(Q, n, c) - n * quad(lambda q: g2(q) * q ** (-(n + 2)), [1, Q])

    def mu3(Q):
        return -g3(Q) / h3(Q, n, d)

    mp.dps = 30
    qs = findroot(lambda q: h3(q, n), mpf("0.55"))
    Q3 = findroot(lambda q: diff(mu3, q), mpf("0.75"))
    print("Q3", Q3, "mu3_min", mu3(Q3), "g3(Q_star)", g3(qs))


if __name__ == "__main__":
    main()
