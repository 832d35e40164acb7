"""Reference values for the statistics tests (mpmath, 30 digits)."""
import mpmath as mp

mp.mp.dps = 30


def z_two_sided(conf):
    return mp.sqrt(2) * mp.erfinv(conf)


if __name__ == "__main__":
    z95 = z_two_sided(mp.mpf("0.95"))
    print("z(0.95)", mp.nstr(z95, 17))
    print("z(0.6827)", mp.nstr(z_two_sided(mp.mpf("0.6827")), 17))
    sigma = mp.mpf("0.077e-12") / z95
    print("sigma", mp.nstr(sigma, 17))
    for t in ["0.20e-12", "0.33e-12", "0.28e-12"]:
        d = abs(mp.mpf(t) - mp.mpf("0.32e-12"))
        p2 = mp.erfc(d / (sigma * mp.sqrt(2)))
        print("p2", t, mp.nstr(p2, 17), "p1", mp.nstr(p2 / 2, 17), "z", mp.nstr(d / sigma, 17))
