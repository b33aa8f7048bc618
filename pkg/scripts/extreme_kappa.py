"""The triangular matrix [[mu, nu/4], [0, mu]]: singular values kept as
(exponent, mantissa) pairs although the smaller one is far below mu."""

import mpmath

from kogsvd import BINARY64, svd2
from kogsvd.oracle import svd2_ext


def main():
    mu, nu = BINARY64.mu, BINARY64.nu
    G = [[mu, nu / 4], [0.0, mu]]
    res = svd2(G)
    ref = svd2_ext(G)
    mp = ref.ctx
    for name, got, want in (("sigma1", res.sigma1, ref.sigma1), ("sigma2", res.sigma2, ref.sigma2)):
        v = mp.ldexp(mp.mpf(got.f), got.e)
        print(f"{name}: {got}  = {mpmath.nstr(v, 17)}  reference {mpmath.nstr(want, 17)}  "
              f"rel. error {mpmath.nstr(abs(v / want - 1), 3)}")
    print("kappa2:", mpmath.nstr(ref.sigma1 / ref.sigma2, 17))
    print("nu/4:", mpmath.nstr(mp.mpf(nu) / 4, 17), " 4 mu^2/nu:", mpmath.nstr(4 * mp.mpf(mu) ** 2 / nu, 17),
          " nu^2/(16 mu^2):", mpmath.nstr(mp.mpf(nu) ** 2 / (16 * mp.mpf(mu) ** 2), 17))
    print("branches:", res.trace)


if __name__ == "__main__":
    main()
