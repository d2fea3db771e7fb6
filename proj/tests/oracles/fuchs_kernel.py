"""Reference Brownian coagulation kernel (Fuchs transition-regime form).

Coded independently of the C++ engine; used to freeze expected kernel values.
"""
import math

K_B = 1.380649e-23
LAMBDA_0 = 6.51e-8
T_0 = 293.15
P_0 = 101325.0
MU_REF = 1.716e-5
T_MU_REF = 273.15
SUTHERLAND = 110.4


def viscosity(temp):
    return MU_REF * (temp / T_MU_REF) ** 1.5 * (T_MU_REF + SUTHERLAND) / (temp + SUTHERLAND)


def particle_props(d, rho, temp, pres):
    lam = LAMBDA_0 * (temp / T_0) * (P_0 / pres)
    kn = 2.0 * lam / d
    cc = 1.0 + kn * (1.257 + 0.4 * math.exp(-1.1 / kn))
    diff = K_B * temp * cc / (3.0 * math.pi * viscosity(temp) * d)
    mass = rho * math.pi * d ** 3 / 6.0
    speed = math.sqrt(8.0 * K_B * temp / (math.pi * mass))
    l = 8.0 * diff / (math.pi * speed)
    g = ((d + l) ** 3 - (d * d + l * l) ** 1.5) / (3.0 * d * l) - d
    return diff, speed, g


def kernel(d1, d2, rho1, rho2, temp, pres):
    D1, c1, g1 = particle_props(d1, rho1, temp, pres)
    D2, c2, g2 = particle_props(d2, rho2, temp, pres)
    dsum = d1 + d2
    diffsum = D1 + D2
    cbar = math.sqrt(c1 * c1 + c2 * c2)
    gbar = math.sqrt(g1 * g1 + g2 * g2)
    denom = dsum / (dsum + 2.0 * gbar) + 8.0 * diffsum / (cbar * dsum)
    return 2.0 * math.pi * dsum * diffsum / denom


if __name__ == "__main__":
    print("equal 100 nm, rho 1000, 295 K:", repr(kernel(1e-7, 1e-7, 1000.0, 1000.0, 295.0, 101325.0)))
    print("10 nm + 1 um, rho 1000, 295 K:", repr(kernel(1e-8, 1e-6, 1000.0, 1000.0, 295.0, 101325.0)))
