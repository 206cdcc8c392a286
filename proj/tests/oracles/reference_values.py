"""Independent reference values for the unit tests.

Closed forms are evaluated with mpmath at 50 digits straight from the
hyperbolic expressions (no expm1 rewriting). Oracle values come from a numpy
diagonalization of the same Hamiltonian built from dense q and p matrices,
not from the library's projected operators. Run:

    python3 tests/oracles/reference_values.py
"""
import mpmath as mp
import numpy as np

mp.mp.dps = 50


def omega(L, C, R):
    return mp.sqrt(1 / (L * C) - R**2 / L**2)


def closed_forms(L, C, R, beta, hbar=1, k=1):
    L, C, R, beta, hbar, k = map(mp.mpf, (L, C, R, beta, hbar, k))
    w = omega(L, C, R)
    x = beta * hbar * w
    coth = mp.coth(x / 2)
    csch2 = 1 / mp.sinh(x / 2) ** 2
    return {
        "omega": w,
        "U": hbar * w / 2 * coth,
        "S": k * (x * mp.exp(x) / (mp.exp(x) - 1) - mp.log(mp.exp(x) - 1)),
        "fluct": (hbar * w / 2) ** 2 * csch2,
        "dHdR": -hbar * R / (2 * w * L**2) * coth,
        "resistor": -hbar * R**2 / (2 * w * L**2) * coth,
        "dSdR": k * beta**2 * hbar**2 * R / (4 * L**2) * csch2,
        "lnZ": -x / 2 - mp.log(1 - mp.exp(-x)),
    }


def dense_oracle(L, C, R, beta, N, hbar=1.0):
    w0 = 1 / np.sqrt(L * C)
    a = np.diag(np.sqrt(np.arange(1, N + 2)), 1)  # one extra level, then cut
    q = np.sqrt(hbar / (2 * L * w0)) * (a + a.T)
    p = 1j * np.sqrt(hbar * L * w0 / 2) * (a.T - a)
    q2 = (q @ q)[:N, :N]
    p2 = (p @ p)[:N, :N]
    x = (p @ q + q @ p)[:N, :N]
    H = p2 / (2 * L) + q2 / (2 * C) + R / (2 * L) * x
    E, V = np.linalg.eigh(H)
    w = np.exp(-beta * (E - E[0]))
    w /= w.sum()
    avg = lambda A: float(np.real(np.einsum("n,in,ij,jn->", w, V.conj(), A, V)))
    return {
        "E": E,
        "U": float(w @ E),
        "S": float(-(w[w > 0] * np.log(w[w > 0])).sum()),
        "fluct": float(w @ E**2 - (w @ E) ** 2),
        "cross": avg(x),
    }


if __name__ == "__main__":
    for args in [(1, 1, 0.5, 1), (1, 1, 0, 1), (2, 0.5, 0.3, 0.7), (0.5, 2, 0.1, 3)]:
        print("closed forms", args)
        for key, v in closed_forms(*args).items():
            print(f"  {key:9s} {mp.nstr(v, 17)}")
    for x in ["1e-8", "1e-3", "50", "800"]:
        xm = mp.mpf(x)
        print("oscillator x =", x)
        print("  coth_half      ", mp.nstr(mp.coth(xm / 2), 17))
        print("  inv_sinh2_half ", mp.nstr(1 / mp.sinh(xm / 2) ** 2, 17))
        print("  entropy        ", mp.nstr(xm / (mp.exp(xm) - 1) - mp.log(1 - mp.exp(-xm)), 17))
        print("  log_partition  ", mp.nstr(-xm / 2 - mp.log(1 - mp.exp(-xm)), 17))
    d = dense_oracle(1.0, 1.0, 0.5, 1.0, 256)
    print("dense oracle L=C=1 R=0.5 beta=1 N=256")
    print(f"  E1-E0 {d['E'][1] - d['E'][0]:.17g}")
    print(f"  U     {d['U']:.17g}")
    print(f"  S     {d['S']:.17g}")
    print(f"  fluct {d['fluct']:.17g}")
    print(f"  cross {d['cross']:.17g}")
    print(f"  trace {d['E'].sum():.17g}")


def derivative_references(L, C, R, beta):
    """Ensemble derivatives from F = -ln Z / beta via mpmath differentiation.

    <dH/dchi> = dF/dchi, d<H>/dchi, dS/dchi and <H dH/dchi> = -d/dbeta <dH/dchi>
    + <dH/dchi><H>.
    """
    def F(l, c, r, b):
        return -closed_forms(l, c, r, b)["lnZ"] / b

    def U(l, c, r, b):
        return closed_forms(l, c, r, b)["U"]

    def S(l, c, r, b):
        return closed_forms(l, c, r, b)["S"]

    args = [mp.mpf(L), mp.mpf(C), mp.mpf(R), mp.mpf(beta)]
    out = {}
    for i, name in enumerate("LCR"):
        def along(f, i=i):
            return lambda v: f(*[v if j == i else a for j, a in enumerate(args)])
        g = mp.diff(along(F), args[i])
        def g_beta(b, i=i):
            a2 = args[:3] + [b]
            return mp.diff(lambda v: F(*[v if j == i else a for j, a in enumerate(a2)]), a2[i])
        out[f"dH_d{name}_avg"] = g
        out[f"dU_d{name}"] = mp.diff(along(U), args[i])
        out[f"dS_d{name}"] = mp.diff(along(S), args[i])
        out[f"H_dH_d{name}"] = -mp.diff(g_beta, args[3]) + g * U(*args)
    return out


if __name__ == "__main__":
    print("derivative references L=C=1 R=0.5 beta=1")
    for key, v in derivative_references(1, 1, 0.5, 1).items():
        print(f"  {key:12s} {mp.nstr(v, 17)}")
