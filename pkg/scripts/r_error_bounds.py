"""Print the relative error bound constants for the elements of R.

(1 - d-)/eps and (d+ - 1)/eps for d1, d2, d3, rounded up to nine decimals,
for binary32 (wide type binary64) and binary64 (wide type binary128).
"""

import mpmath

FORMATS = {"single": (24, 53), "double": (53, 113)}


def bounds(p: int, pT: int, prec: int = 400) -> list:
    mp = mpmath.MPContext()
    mp.prec = prec
    e, eT = mp.ldexp(1, -p), mp.ldexp(1, -pT)
    # sec(theta) computed from an inexact tan(theta) <= 1, then rounded once
    den_lo = mp.sqrt(((1 - e) ** 2 + 1) / 2) * (1 - e)
    den_hi = mp.sqrt(((1 + e) ** 2 + 1) / 2) * (1 + e)
    lo1, hi1 = (1 - e) ** 2 / den_hi, (1 + e) ** 2 / den_lo
    lo2, hi2 = (1 - e) ** 3 / den_hi, (1 + e) ** 3 / den_lo
    lo3, hi3 = (1 - eT) ** 2 * (1 - e) ** 2 / den_hi, (1 + eT) ** 2 * (1 + e) ** 2 / den_lo
    raw = [(1 - lo1) / e, (hi1 - 1) / e, (1 - lo2) / e, (hi2 - 1) / e, (1 - lo3) / e, (hi3 - 1) / e]
    return [mp.ceil(v * 10**9) / 10**9 for v in raw]


def main():
    print("format  (1-d1-)/e   (d1+-1)/e   (1-d2-)/e   (d2+-1)/e   (1-d3-)/e   (d3+-1)/e")
    for name, (p, pT) in FORMATS.items():
        print(f"{name:7s} " + " ".join(f"{float(v):.9f}".ljust(11) for v in bounds(p, pT)))


if __name__ == "__main__":
    main()
