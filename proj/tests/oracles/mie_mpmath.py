"""Arbitrary-precision homogeneous-sphere Mie efficiencies.

Evaluates the Lorenz-Mie coefficients directly from spherical Bessel
functions at 50 significant digits, with no recurrences.
"""
import mpmath as mp

mp.mp.dps = 50


def psi(n, z):
    return z * mp.besselj(n + mp.mpf(1) / 2, z) * mp.sqrt(mp.pi / (2 * z))


def xi(n, z):
    # psi - i*chi with chi = -z*y_n(z)
    y = mp.bessely(n + mp.mpf(1) / 2, z) * mp.sqrt(mp.pi / (2 * z))
    return psi(n, z) + 1j * z * y


def dpsi(n, z):
    return mp.diff(lambda t: psi(n, t), z)


def dxi(n, z):
    return mp.diff(lambda t: xi(n, t), z)


def efficiencies(m, x, extra=20):
    m = mp.mpc(m)
    x = mp.mpf(x)
    nmax = int(mp.ceil(x + 4 * mp.cbrt(x) + 2)) + extra
    mx = m * x
    qext = mp.mpf(0)
    qsca = mp.mpf(0)
    for n in range(1, nmax + 1):
        pm, dpm = psi(n, mx), dpsi(n, mx)
        px, dpx = psi(n, x), dpsi(n, x)
        xx, dxx = xi(n, x), dxi(n, x)
        a = (m * pm * dpx - px * dpm) / (m * pm * dxx - xx * dpm)
        b = (pm * dpx - m * px * dpm) / (pm * dxx - m * xx * dpm)
        qext += (2 * n + 1) * mp.re(a + b)
        qsca += (2 * n + 1) * (abs(a) ** 2 + abs(b) ** 2)
    qext *= 2 / x ** 2
    qsca *= 2 / x ** 2
    return qext, qsca, qext - qsca


if __name__ == "__main__":
    for m, x in [(mp.mpc(1.5, 0.5), 1), (mp.mpc(1.33, 0), 2), (mp.mpc(1.85, 0.71), 0.5),
                 (mp.mpc(1.5, 0.001), 10), (mp.mpc(1.45, 0.0), 0.1)]:
        qe, qs, qa = efficiencies(m, x)
        print(m, x, mp.nstr(qe, 17), mp.nstr(qs, 17), mp.nstr(qa, 17))
