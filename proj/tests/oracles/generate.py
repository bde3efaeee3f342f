"""Independent reference values for the C++ tests.

Series are summed directly with sympy rationals or mpmath at 40 digits; nothing
here shares code with the library. Run: python3 tests/oracles/generate.py
"""
from fractions import Fraction as Q

import mpmath as mp
import sympy as sp

mp.mp.dps = 40


def rising(a, n):
    out = Q(1)
    for i in range(n):
        out *= a + i
    return out


def fact(n):
    return rising(Q(1), n)


def charlier(n, x, c):
    # 2F0(-n, -x; ; -1/c)
    return sum(rising(Q(-n), j) * rising(Q(-x), j) / fact(j) * (Q(-1) / c) ** j for j in range(min(n, x) + 1))


def meixner(n, x, beta, c):
    # 2F1(-n, -x; beta; 1 - 1/c)
    z = 1 - 1 / c
    return sum(rising(Q(-n), j) * rising(Q(-x), j) / (rising(beta, j) * fact(j)) * z ** j for j in range(min(n, x) + 1))


def show(label, v):
    print(f"{label} = {v}")


print("# discrete kernels (bare)")
show("charlier(1,2,1/2)", charlier(1, 2, Q(1, 2)))
show("charlier(3,5,3/4)", charlier(3, 5, Q(3, 4)))
show("charlier(5,3,3/4)", charlier(5, 3, Q(3, 4)))
show("charlier(4,6,1/3)", charlier(4, 6, Q(1, 3)))
show("meixner(1,2,k=1/2,c=1/2)", meixner(1, 2, Q(1), Q(1, 2)))
show("meixner(3,4,k=3/4,c=1/3)", meixner(3, 4, Q(3, 2), Q(1, 3)))
show("meixner(4,3,k=3/4,c=1/3)", meixner(4, 3, Q(3, 2), Q(1, 3)))
show("krawtchouk(2,3,j=4,c=1/3)", meixner(2, 3, Q(-4), Q(1, 3)))
show("krawtchouk(3,2,j=4,c=1/3)", meixner(3, 2, Q(-4), Q(1, 3)))

print("# polynomial kernels")
x = sp.symbols("x")
c = sp.Rational(3, 4)
h4 = sp.expand((2 * c) ** sp.Rational(-4, 2) * sp.hermite(4, x / sp.sqrt(2 * c)))
show("hermite_kernel(4, c=3/4) coefficients x^0..x^4", [h4.coeff(x, i) for i in range(5)])
k = sp.Rational(3, 4)
s = sp.Rational(1, 2)
n = 3
lag = sp.expand(sp.factorial(n) * s ** (-n) / sp.rf(2 * k, n) * sp.assoc_laguerre(n, 2 * k - 1, x))
show("laguerre_kernel(3, k=3/4, s=1/2) coefficients x^0..x^3", [lag.coeff(x, i) for i in range(4)])

print("# Bessel kernel J(x,y;k) = e^{(x+y)/2} (xy)^{1/2-k} J_{2k-1}(sqrt(xy))")
for (xx, yy, kk) in [(1.3, 2.7, 0.75), (0.4, 9.5, 2.0), (6.0, 7.5, 0.5)]:
    X, Y, K = mp.mpf(xx), mp.mpf(yy), mp.mpf(kk)
    v = mp.e ** ((X + Y) / 2) * (X * Y) ** (mp.mpf(1) / 2 - K) * mp.besselj(2 * K - 1, mp.sqrt(X * Y))
    show(f"bessel({xx},{yy},{kk})", mp.nstr(v, 20))

print("# Meixner-Pollaczek P_n^(k)(x; phi) from the 2F1 form")
for (nn, xx, kk) in [(3, 0.7, 0.75), (5, -1.2, 1.5)]:
    phi = mp.pi / 3
    K = mp.mpf(kk)
    v = mp.e ** (1j * nn * phi) * mp.rf(2 * K, nn) / mp.factorial(nn) * mp.hyp2f1(-nn, K + 1j * mp.mpf(xx), 2 * K, 1 - mp.e ** (-2j * phi))
    show(f"mp({nn},{xx},{kk},pi/3)", mp.nstr(v, 20))

print("# DIF pair coordinate u = x1 - x2 is Ornstein-Uhlenbeck: du = -2u dt + sqrt(8c) dW")
show("stationary var(u) at c=1", 2)
