"""Independent high-precision oracle for frozen regression values.

Computes reference numbers with mpmath (50 digits) from first principles:
Hilbert-space inner products, matrix exponentials, polynomial roots and
Gram-matrix permanents. Prints Rust constant blocks for the test suite.
"""
import itertools
import mpmath as mp

mp.mp.dps = 50
J = mp.mpc(0, 1)


def qubit(theta, phi):
    return [mp.cos(theta / 2), mp.exp(J * phi) * mp.sin(theta / 2)]


def bloch(theta, phi):
    return [mp.sin(theta) * mp.cos(phi), mp.sin(theta) * mp.sin(phi), mp.cos(theta)]


def ip(a, b):
    return mp.fsum(mp.conj(x) * y for x, y in zip(a, b))


def matvec(m, v):
    return [mp.fsum(m[i, k] * v[k] for k in range(len(v))) for i in range(len(v))]


def polar(z):
    return mp.fabs(z), mp.arg(z)


def fmt(x):
    return mp.nstr(x, 20, min_fixed=-30, max_fixed=30)


def qubit_weak(i, r, f):
    qi, qr, qf = qubit(*i), qubit(*r), qubit(*f)
    return ip(qf, qr) * ip(qr, qi) / ip(qf, qi)


def qubit_modular(i, r, f, alpha, beta):
    n = bloch(*r)
    sig = mp.matrix([[n[2], n[0] - J * n[1]], [n[0] + J * n[1], -n[2]]])
    u = mp.expm(-J * alpha / 2 * sig) * mp.exp(J * beta / 2)
    qi, qf = qubit(*i), qubit(*f)
    return ip(qf, matvec(u, qi)) / ip(qf, qi)


def gell_mann():
    z = mp.mpf(0)
    o = mp.mpf(1)
    m = [
        [[z, o, z], [o, z, z], [z, z, z]],
        [[z, -J, z], [J, z, z], [z, z, z]],
        [[o, z, z], [z, -o, z], [z, z, z]],
        [[z, z, o], [z, z, z], [o, z, z]],
        [[z, z, -J], [z, z, z], [J, z, z]],
        [[z, z, z], [z, z, o], [z, o, z]],
        [[z, z, z], [z, z, -J], [z, J, z]],
        [[o / mp.sqrt(3), z, z], [z, o / mp.sqrt(3), z], [z, z, -2 / mp.sqrt(3)]],
    ]
    return [mp.matrix(x) for x in m]


def normalize(v):
    n = mp.sqrt(mp.fsum(abs(x) ** 2 for x in v))
    return [x / n for x in v]


def majorana(c):
    n = len(c) - 1
    coeffs = [(-1) ** k * mp.sqrt(mp.binomial(n, k)) * c[k] for k in range(n + 1)]
    deg = max(k for k in range(n + 1) if abs(coeffs[k]) > mp.mpf(10) ** -40)
    roots = mp.polyroots(list(reversed(coeffs[: deg + 1])), maxsteps=200, extraprec=200) if deg > 0 else []
    pts = []
    for z in roots:
        d = 1 + abs(z) ** 2
        pts.append((2 * mp.re(z) / d, 2 * mp.im(z) / d, (1 - abs(z) ** 2) / d))
    pts += [(mp.mpf(0), mp.mpf(0), mp.mpf(-1))] * (n - deg)
    pts.sort(key=lambda p: (-p[2], -p[0], -p[1]))
    # K = 1 / sqrt(n! perm(G)), G the Gram matrix of the point states.
    states = [qubit(mp.acos(max(-1, min(1, p[2]))), mp.atan2(p[1], p[0])) for p in pts]
    perm = mp.fsum(
        mp.fprod(ip(states[a], states[s[a]]) for a in range(n)) for s in itertools.permutations(range(n))
    )
    k = 1 / mp.sqrt(mp.factorial(n) * mp.re(perm))
    return pts, k


def main():
    print("// qubit projector weak values: (i, r, f) as (theta, phi), then modulus, argument")
    weak_cases = [
        ((0.3, 0.2), (1.2, 2.0), (2.0, -1.0)),
        ((1.0, 0.0), (0.5, 3.0), (2.5, 1.5)),
        ((0.1, 0.1), (3.0, -2.0), (1.5, 0.7)),
    ]
    for i, r, f in weak_cases:
        m, a = polar(qubit_weak(*[tuple(map(mp.mpf, x)) for x in (i, r, f)]))
        print(f"({i}, {r}, {f}, {fmt(m)}, {fmt(a)}),")

    print("// qubit modular values: i, r, f, alpha, beta, modulus, argument")
    mod_cases = [
        ((0.7, 0.2), (1.1, 0.5), (1.9, -2.0), 1.3, 0.4),
        ((2.2, 1.0), (0.4, -1.2), (0.9, 2.9), -2.5, 1.0),
    ]
    for i, r, f, al, be in mod_cases:
        args = [tuple(map(mp.mpf, x)) for x in (i, r, f)]
        m, a = polar(qubit_modular(*args, mp.mpf(al), mp.mpf(be)))
        print(f"({i}, {r}, {f}, {al}, {be}, {fmt(m)}, {fmt(a)}),")

    psi_i = normalize([mp.mpc(0.3, 0.4), mp.mpc(-0.5, 0.1), mp.mpc(0.6, -0.2)])
    psi_r = normalize([mp.mpc(0.1, -0.7), mp.mpc(0.4, 0.2), mp.mpc(0.3, 0.1)])
    psi_f = normalize([mp.mpc(-0.2, 0.5), mp.mpc(0.6, 0.3), mp.mpc(0.1, -0.4)])
    w = ip(psi_f, psi_r) * ip(psi_r, psi_i) / ip(psi_f, psi_i)
    print("// qutrit projector weak value", fmt(abs(w)), fmt(mp.arg(w)))

    r8 = [mp.mpf(x) for x in (0.3, -0.1, 0.5, 0.2, -0.4, 0.1, 0.6, -0.2)]
    nr = mp.sqrt(mp.fsum(x * x for x in r8))
    r8 = [x / nr for x in r8]
    lam = sum((r8[k] * g for k, g in enumerate(gell_mann())), mp.zeros(3, 3))
    al, be = mp.mpf(0.9), mp.mpf(0.3)
    u = mp.expm(-J * al * lam) * mp.exp(J * be)
    mv = ip(psi_f, matvec(u, psi_i)) / ip(psi_f, psi_i)
    print("// qutrit Gell-Mann modular value", fmt(abs(mv)), fmt(mp.arg(mv)))
    ev = mp.eighe(lam)[0]
    print("// lambda_r eigenvalues", [fmt(x) for x in sorted(ev)])

    for label, c in [
        ("qutrit", psi_i),
        ("dim5", normalize([mp.mpc(1), mp.mpc(0, 0.5), mp.mpc(-0.3), mp.mpc(0.2, 0.1), mp.mpc(0.7)])),
        ("dim4 with root at infinity", normalize([mp.mpc(0.5, 0.1), mp.mpc(-0.2), mp.mpc(0.3, 0.3), mp.mpc(0)])),
    ]:
        pts, k = majorana(c)
        print(f"// majorana {label}: K = {fmt(k)}")
        for p in pts:
            print("[" + ", ".join(fmt(x) for x in p) + "],")

    eps = mp.asin(mp.tan(mp.pi / 6))
    chi1, chi2 = 4 * mp.pi / 3, 2 * mp.pi / 3
    print("// scan: epsilon", fmt(eps), "epsilon/pi", fmt(eps / mp.pi))
    print("// theta_b", fmt(mp.atan(2 * mp.sqrt(6))), fmt(mp.atan(2 * mp.sqrt(6)) / mp.pi))
    print("// theta_c", fmt(mp.atan(mp.sqrt(1.5))), fmt(mp.atan(mp.sqrt(mp.mpf(1.5))) / mp.pi))
    for t in (mp.pi / 4, mp.mpf("0.3") * mp.pi):
        c = [mp.exp(J * chi1) * mp.cos(eps) * mp.sin(t), mp.exp(J * chi2) * mp.sin(eps) * mp.sin(t), mp.cos(t)]
        f = [mp.mpf(0.5), 1 / mp.sqrt(2), mp.mpf(0.5)]
        wv = ip(f, [0, 0, c[2]]) / ip(f, c)
        print("// slice weak value at", fmt(t), fmt(mp.re(wv)), fmt(mp.im(wv)))


if __name__ == "__main__":
    main()
