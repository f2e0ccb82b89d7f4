"""Reference values frozen into the C++ tests, computed with mpmath at 40 digits."""
import mpmath as mp

mp.mp.dps = 40


def rl_integral(f, a, x):
    return mp.quad(lambda s: (x - s) ** (a - 1) * f(s), [0, x]) / mp.gamma(a)


def caputo(df, a, x):
    return mp.quad(lambda s: (x - s) ** (-a) * df(s), [0, x]) / mp.gamma(1 - a)


def rl_derivative(f, df, a, x):
    return f(0) * x ** (-a) / mp.gamma(1 - a) + caputo(df, a, x)


def show(name, value):
    print(f"{name} = {mp.nstr(value, 17)}")


for z in ["0.1", "0.5", "1.5", "2.5", "3.7", "7.25", "12.5", "29.9"]:
    show(f"gamma({z})", mp.gamma(mp.mpf(z)))

show("rl_integral(sin, 0.3, 2)", rl_integral(mp.sin, mp.mpf("0.3"), 2))
show("rl_integral(exp, 0.7, 1.5)", rl_integral(mp.exp, mp.mpf("0.7"), mp.mpf("1.5")))
show("rl_derivative(exp, 0.6, 0.8)", rl_derivative(mp.exp, mp.exp, mp.mpf("0.6"), mp.mpf("0.8")))
show("caputo(exp, 0.4, 1)", caputo(mp.exp, mp.mpf("0.4"), 1))
show("jumarie(sin, 0.5, 1.2)", caputo(mp.cos, mp.mpf("0.5"), mp.mpf("1.2")))
show("jumarie(cos, 0.75, 2)", caputo(lambda s: -mp.sin(s), mp.mpf("0.75"), 2))
show("integral_dx_alpha(exp, 0.5, 1)", mp.gamma(1.5) * rl_integral(mp.exp, mp.mpf("0.5"), 1))

# Example 1 (f = s^2, g = sin) at a = 0.7, c = 1.5, (x, t) = (1.3, 0.6).
a, c, x, t = mp.mpf("0.7"), mp.mpf("1.5"), mp.mpf("1.3"), mp.mpf("0.6")
X = x ** a / mp.gamma(1 + a)
CT = c ** a * t ** a / mp.gamma(1 + a)
C = c ** a
show("example1(0.7, 1.5, 1.3, 0.6)", X ** 2 + CT ** 2 + mp.sin(X) * mp.sin(CT) / C)

# Example 2 (f = 0, g = sin) at a = 0.8, c = 2, (x, t) = (0.9, 1.7).
a, c, x, t = mp.mpf("0.8"), mp.mpf("2"), mp.mpf("0.9"), mp.mpf("1.7")
X = x ** a / mp.gamma(1 + a)
CT = c ** a * t ** a / mp.gamma(1 + a)
show("example2(0.8, 2, 0.9, 1.7)", mp.sin(X) * mp.sin(CT) / c ** a)

# Order-a derivative of w(X(x)) = X(x)^2 with X = x^a / Gamma(1+a), against 2 X.
for a in ["0.5", "0.7"]:
    a = mp.mpf(a)
    ratio = mp.gamma(2 * a + 1) / (2 * mp.gamma(1 + a) ** 2)
    show(f"chain-rule ratio for X^2 at a={a}", ratio)

# Limit of the composed residual of example 1 (c = 1, x <= 2, t <= 1) at a = 0.7:
# u = X^2 + T^2 + sin X sin T with X = x^a/G, T = t^a/G. D^a X^k = k!/G... expand
# D_t^a D_t^a u exactly by the power rule on the series in t.
def composed_residual(a, x, t, terms=60):
    G = mp.gamma(1 + a)
    X = x ** a / G

    def dd(coef_pow):  # apply D^a twice to sum c_k t^(k a) (Jumarie drops constants)
        out = []
        for coef, p in coef_pow:
            for _ in range(2):
                if p == 0:
                    coef = 0
                    break
                coef = coef * mp.gamma(p + 1) / mp.gamma(p + 1 - a)
                p = p - a
            if coef != 0:
                out.append((coef, p))
        return out

    def series(amp, shift):
        # amp * sin(shift + s), s = var^a / G; sum over powers of var
        terms_out = [(amp * mp.sin(shift), 0)]
        for k in range(1, terms):
            d = [mp.cos, lambda v: -mp.sin(v), lambda v: -mp.cos(v), mp.sin][(k - 1) % 4](shift)
            terms_out.append((amp * d / mp.factorial(k) / G ** k, k * a))
        return terms_out

    def value(terms_list, var):
        return mp.fsum(c0 * (var ** p if p != 0 else 1) for c0, p in terms_list)

    # time direction: u(x, .) = X^2 + s^2 + sin(X) sin(s), s = t^a / G
    ut = [(X ** 2, 0), (1 / G ** 2, 2 * a)] + [(mp.sin(X) * c0, p) for c0, p in series(1, 0)]
    T = t ** a / G
    ux = [(T ** 2, 0), (1 / G ** 2, 2 * a)] + [(mp.sin(T) * c0, p) for c0, p in series(1, 0)]
    return value(dd(ut), t) - value(dd(ux), x)


show("composed residual example1 a=0.7 at (2, 1)", composed_residual(mp.mpf("0.7"), mp.mpf(2), mp.mpf(1)))
