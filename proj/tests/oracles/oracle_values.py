"""Reference values for the unit tests, computed independently with mpmath.

The solution operator is taken from the matrix exponential of the 2x2 companion
system (never from the closed-form root formulas used by the library), and all
integrals are plain adaptive quadrature. Run:  python3 tests/oracles/oracle_values.py
"""
import mpmath as mp

mp.mp.dps = 40


def companion(sigma, delta, lam):
    beta = delta * mp.power(lam, sigma)
    return mp.matrix([[0, 1], [-lam, -2 * beta]])


def propagate(sigma, delta, lam, u0, u1, t):
    E = mp.expm(companion(sigma, delta, lam) * t)
    return E[0, 0] * u0 + E[0, 1] * u1, E[1, 0] * u0 + E[1, 1] * u1


def kernel(sigma, delta, lam, tau, derivative=0):
    E = mp.expm(companion(sigma, delta, lam) * tau)
    return E[0, 1] if derivative == 0 else E[1, 1]


def roots(sigma, delta, lam):
    beta = delta * mp.power(lam, sigma)
    disc = beta**2 - lam
    if disc > 0:
        x1 = beta + mp.sqrt(disc)
        return ("real", x1, lam / x1)
    return ("osc", beta, mp.sqrt(-disc))


def show(name, value):
    print(f"{name} = {mp.nstr(value, 17, min_fixed=-30, max_fixed=30)}")


def main():
    print("# roots")
    for s, d, lam in [(0.75, 1, 1e4), (0.25, 1, 1e4), (2, 0.5, 1e3), (0.5, 2, 100)]:
        kind, a, b = roots(mp.mpf(s), mp.mpf(d), mp.mpf(lam))
        show(f"roots sigma={s} delta={d} lambda={lam} {kind} first", a)
        show(f"roots sigma={s} delta={d} lambda={lam} {kind} second", b)

    print("# homogeneous mode, data (1, 0.5), t = 0.7")
    for s, d, lam in [(0.75, 1, 1e4), (0.25, 1, 1e4), (2, 0.5, 10), (0.5, 2, 100), (0.5, 1, 4)]:
        u, up = propagate(mp.mpf(s), mp.mpf(d), mp.mpf(lam), 1, mp.mpf("0.5"), mp.mpf("0.7"))
        show(f"homog sigma={s} delta={d} lambda={lam} u", u)
        show(f"homog sigma={s} delta={d} lambda={lam} up", up)

    print("# windowed sinusoid cos(3 s + 0.2) on [0.1, 0.9], null data, t = 1.3")
    f = lambda x: mp.cos(3 * x + mp.mpf("0.2"))
    for s, d, lam in [(0.5, 2, 100), (0.25, 1, 400), (2, 1, 3)]:
        t = mp.mpf("1.3")
        for der in (0, 1):
            val = mp.quad(lambda x: kernel(s, d, lam, t - x, der) * f(x), mp.linspace(mp.mpf("0.1"), mp.mpf("0.9"), 9))
            show(f"window sigma={s} delta={d} lambda={lam} d{der}", val)

    print("# resonant forcing, sigma = 0, delta = 1, lambda = 1e4, T = 1")
    lam = mp.mpf(10) ** 4
    b = mp.sqrt(lam - 1)
    T = mp.mpf(1)
    g = lambda x: mp.cos(b * (T - x) - mp.pi / 4)
    pts = mp.linspace(0, 1, 161)
    u = mp.quad(lambda x: kernel(0, 1, lam, T - x, 0) * g(x), pts)
    up = mp.quad(lambda x: kernel(0, 1, lam, T - x, 1) * g(x), pts)
    show("resonant sqrt(lambda) u", mp.sqrt(lam) * u)
    show("resonant up", up)
    show("resonant limit (sqrt2/4)(1-1/e)", mp.sqrt(2) / 4 * (1 - mp.e**-1))

    print("# blow-up limits")
    e1 = mp.e**-1
    show("supercritical c0 1-1/e", 1 - e1)
    show("supercritical c1 delta=1 e^-1/2", e1 / 2)
    show("critical c0 1-2/e", 1 - 2 * e1)
    show("critical c1 1/e", e1)
    show("subcritical c0=c1 (1-1/e) sqrt2/4", (1 - e1) * mp.sqrt(2) / 4)
    d = mp.mpf(2)
    D = (d + mp.sqrt(d * d - 1)) ** 2
    show("supercritical-half delta=2 c0", 1 + (mp.e**-D - D * e1) / (D - 1))
    show("supercritical-half delta=2 c1", (e1 - mp.e**-D) / (2 * mp.sqrt(d * d - 1)))
    # sigma = 1/2, delta < 1, psi = pi/2, window W/a with W = min(1, pi/(4D)), in the scaled variable y
    d = mp.mpf("0.5")
    bp = mp.sqrt(1 - d * d)
    D = bp / d
    W = min(mp.mpf(1), mp.pi / (4 * D))
    psi = mp.pi / 2
    c0 = mp.quad(lambda y: mp.e**(-d * y) * mp.sin(bp * y) * mp.sin(bp * y + psi), [0, W / d]) / bp
    c1 = mp.quad(lambda y: mp.e**(-d * y) * (mp.cos(bp * y) - d / bp * mp.sin(bp * y)) * mp.sin(bp * y + psi), [0, W / d])
    show("subcritical-half delta=0.5 W", W)
    show("subcritical-half delta=0.5 c0", c0)
    show("subcritical-half delta=0.5 c1", c1)
    show("constant force sigma=1 limit 1-e^-1/2", 1 - mp.e**mp.mpf("-0.5"))

    print("# weights and thresholds")
    k = 0
    while not (mp.power(2, mp.mpf("0.2")) * ((k + 1) / mp.mpf(k + 2)) ** 2 > 1):
        k += 1
    print(f"eventual increase index ratio=2 eps=0.1 = {k}")
    k = 0
    while not (mp.power(4, mp.mpf("0.1")) * ((k + 1) / mp.mpf(k + 2)) ** 2 > 1):
        k += 1
    print(f"eventual increase index ratio=4 eps=0.05 = {k}")
    for M, eta in [(1, mp.mpf(1) / 2), (2, mp.mpf(1) / 4), (3, mp.mpf(1) / 8), (4, mp.mpf(1) / 16), (3, 1)]:
        n = mp.ceil((2 * M + eta) ** 2 * 4 * mp.e**2 / (eta**2 * (1 - e1) ** 2))
        print(f"threshold mode count M={M} eta={mp.nstr(eta, 6)} = {int(n)}")
    show("schedule constant", e1 * (1 - e1))
    c2 = mp.nsum(lambda j: 1 / (j + 1) ** 2, [0, 127])
    show("divergent weights K=128 eta=1 c^2", c2)

    print("# kernel bound constants max_x e^-x max(x^b, x^c)")
    for bb, cc in [(0.5, 2), (0.3, 0.3), (1, 1.5)]:
        grid = [mp.mpf(i) / 1000 for i in range(1, 20001)]
        best = max(grid, key=lambda z: mp.e**-z * max(z**bb, z**cc))
        val = mp.findroot(lambda z: mp.diff(lambda w: mp.e**-w * max(w**bb, w**cc), z), best)
        show(f"kernel bound b={bb} c={cc}", mp.e**-val * max(val**bb, val**cc))

    print("# worst-case single-mode response: int_0^t |G^(c)|")
    s, d, lam, t = mp.mpf("0.25"), mp.mpf(1), mp.mpf(10) ** 4, mp.mpf("0.5")
    kind, a, b = roots(s, d, lam)
    zeros = [j * mp.pi / b for j in range(0, int(t * b / mp.pi) + 1)] + [t]
    g0 = lambda x: mp.e**(-a * x) * mp.sin(b * x) / b
    show("worst u sigma=0.25 delta=1 lambda=1e4 t=0.5", sum(abs(mp.quad(g0, [zeros[i], zeros[i + 1]])) for i in range(len(zeros) - 1)))
    s, d, lam, t = mp.mpf(2), mp.mpf("0.5"), mp.mpf(10) ** 3, mp.mpf(2)
    kind, x1, x2 = roots(s, d, lam)
    g1 = lambda x: (x1 * mp.e**(-x1 * x) - x2 * mp.e**(-x2 * x)) / (x1 - x2)
    ts = mp.log(x1 / x2) / (x1 - x2)
    show("worst uprime sigma=2 delta=0.5 lambda=1e3 t=2", abs(mp.quad(g1, [0, ts])) + abs(mp.quad(g1, [ts, t])))

    print("# threshold mode value, sigma=2 delta=1 lambda=16, window y in [3, 3 + 1/x2], ramps 1e-3/x2")
    lam = mp.mpf(16)
    kind, x1, x2 = roots(mp.mpf(2), mp.mpf(1), lam)
    y0, L, r = mp.mpf(3), 1 / x2, mp.mpf("1e-3") / x2
    def window(y):
        if y < y0 or y > y0 + L:
            return 0
        return min(1, (y - y0) / r, (y0 + L - y) / r)
    G = lambda y: (mp.e**(-x2 * y) - mp.e**(-x1 * y)) / (x1 - x2)
    val = mp.quad(lambda y: G(y) * window(y), [y0, y0 + r, y0 + L - r, y0 + L])
    show("threshold value lambda*u(T)", lam * val)

    print("# constant forcing f = 1, sigma = 2, delta = 1, lambda = 1e3, t = 0.5")
    s, d, lam, t = mp.mpf(2), mp.mpf(1), mp.mpf(1000), mp.mpf("0.5")
    show("unit step u", mp.quad(lambda x: kernel(s, d, lam, x, 0), [0, mp.mpf("1e-5"), mp.mpf("1e-3"), t]))
    show("unit step up", mp.quad(lambda x: kernel(s, d, lam, x, 1), [0, mp.mpf("1e-5"), mp.mpf("1e-3"), t]))


if __name__ == "__main__":
    main()
