"""Certified complex root enclosures and exact real-root counting.

Root finding runs in three layers: hardware eigenvalue seeds, Newton polish at
increasing mpmath precision, and an exact a-posteriori certification step in
dyadic integer arithmetic. Every returned disk provably contains exactly one
root. Real-root counts come from integer Sturm chains, no floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import mpmath
import numpy as np

from .exactnum import dyadic_abs_bounds, dyadic_eval
from .intpoly import IntPolynomial

DEFAULT_PRECISION_CEILING = 4096


class NotSquarefree(ValueError):
    """The polynomial has a repeated root (gcd with its derivative is nonconstant)."""


class PrecisionExhausted(RuntimeError):
    """Certification failed below the precision ceiling; carries undecided enclosures."""

    def __init__(self, message: str, enclosures: tuple["RootEnclosure", ...] = ()):
        super().__init__(message)
        self.enclosures = enclosures


# ---------------------------------------------------------------------------
# integer Sturm chains


def _strip(cs: list[int]) -> list[int]:
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    return cs


def _primitive(cs: list[int]) -> list[int]:
    g = 0
    for c in cs:
        g = gcd(g, abs(c))
    return [c // g for c in cs] if g > 1 else cs


def _pseudo_rem(f: list[int], g: list[int]) -> tuple[list[int], int]:
    """(lc(g)**(deg f - deg g + 1) * f) mod g, plus the sign of that multiplier."""
    dg = len(g) - 1
    lg = g[-1]
    r = list(f)
    steps = len(f) - len(g) + 1
    for _ in range(steps):
        lead = r[-1]
        r = [lg * c for c in r]
        if lead:
            shift = len(r) - 1 - dg
            for j in range(dg + 1):
                r[shift + j] -= lead * g[j]
        r.pop()
    mult_sign = 1 if lg > 0 or steps % 2 == 0 else -1
    return _strip(r if r else [0]), mult_sign


def sturm_chain(coeffs: tuple[int, ...]) -> list[list[int]]:
    """Sturm chain of P with exact integer coefficients.

    Each element equals the textbook rational chain entry times a positive
    constant, so sign-variation counts are preserved.
    """
    f = _strip(list(coeffs))
    if len(f) == 1:
        return [f]
    fp = [j * c for j, c in enumerate(f)][1:]
    chain = [f, _primitive(_strip(fp))]
    while len(chain[-1]) > 1:
        r, mult_sign = _pseudo_rem(chain[-2], chain[-1])
        if r == [0]:
            break
        # next entry must be a positive multiple of -(true remainder)
        if mult_sign > 0:
            r = [-c for c in r]
        chain.append(_primitive(r))
    return chain


def chain_is_squarefree(chain: list[list[int]]) -> bool:
    return len(chain[-1]) == 1 and chain[-1][0] != 0


def _sign_at(cs: list[int], x: Fraction) -> int:
    num, den = x.numerator, x.denominator
    n = len(cs) - 1
    v = cs[n]
    for j in range(n - 1, -1, -1):
        v = v * num + cs[j] * den ** (n - j)
    return (v > 0) - (v < 0)


def _variations(signs: list[int]) -> int:
    out = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            out += 1
        prev = s
    return out


def variations_at(chain: list[list[int]], x: Fraction) -> int:
    return _variations([_sign_at(cs, x) for cs in chain])


def variations_at_infinity(chain: list[list[int]], positive: bool) -> int:
    signs = []
    for cs in chain:
        s = (cs[-1] > 0) - (cs[-1] < 0)
        if not positive and (len(cs) - 1) % 2:
            s = -s
        signs.append(s)
    return _variations(signs)


def _deflate_integer_root(coeffs: tuple[int, ...], a: int) -> tuple[int, ...]:
    """Exact synthetic division by (X - a); requires a to be a root."""
    out: list[int] = []
    carry = 0
    for c in reversed(coeffs):
        carry = c + carry * a
        out.append(carry)
    if out[-1] != 0:
        raise ValueError(f"{a} is not a root")
    return tuple(out[:-1][::-1])


def count_real_roots_gt(P: IntPolynomial, threshold) -> int:
    """Exact number of real roots strictly greater than threshold (Sturm chain)."""
    thr = Fraction(threshold)
    chain = sturm_chain(P.coeffs)
    if not chain_is_squarefree(chain):
        raise NotSquarefree(f"{P.render()} is not squarefree")
    coeffs = P.coeffs
    while _sign_at(list(coeffs), thr) == 0:
        if thr.denominator != 1:
            raise ValueError("threshold is a non-integer rational root")
        coeffs = _deflate_integer_root(coeffs, thr.numerator)
        chain = sturm_chain(coeffs)
    return variations_at(chain, thr) - variations_at_infinity(chain, positive=True)


def count_real_roots(P: IntPolynomial) -> int:
    chain = sturm_chain(P.coeffs)
    if not chain_is_squarefree(chain):
        raise NotSquarefree(f"{P.render()} is not squarefree")
    return variations_at_infinity(chain, positive=False) - variations_at_infinity(
        chain, positive=True
    )


# ---------------------------------------------------------------------------
# certified enclosures


@dataclass(frozen=True)
class RootEnclosure:
    """Disk (a + b*i)/2**k with certified radius containing exactly one root."""

    a: int
    b: int
    k: int
    radius: Fraction
    is_real_certified: bool = False
    undecided: bool = False

    @property
    def re(self) -> float:
        return float(Fraction(self.a, 1 << self.k))

    @property
    def im(self) -> float:
        return float(Fraction(self.b, 1 << self.k))

    @property
    def center(self) -> complex:
        return complex(self.re, self.im)

    @property
    def radius_float(self) -> float:
        # round the reported radius upward so the float stays a valid bound
        f = float(self.radius)
        return f if Fraction(f) >= self.radius else math.nextafter(f, math.inf)

    def modulus_interval(self) -> tuple[Fraction, Fraction]:
        lo, hi = dyadic_abs_bounds(self.a, self.b, self.k)
        lo -= self.radius
        return (lo if lo > 0 else Fraction(0)), hi + self.radius

    def real_interval(self) -> tuple[Fraction, Fraction]:
        if not self.is_real_certified:
            raise ValueError("enclosure is not certified real")
        c = Fraction(self.a, 1 << self.k)
        return c - self.radius, c + self.radius

    def to_json(self) -> dict:
        return {
            "re": self.re,
            "im": self.im,
            "radius": self.radius_float,
            "real": self.is_real_certified,
            "undecided": self.undecided,
        }


def modulus_interval(e: RootEnclosure) -> tuple[Fraction, Fraction]:
    """Certified [lo, hi] containing the modulus of the enclosed root."""
    return e.modulus_interval()


def _float_seeds(coeffs: tuple[int, ...]) -> list[complex]:
    n = len(coeffs) - 1
    companion = np.zeros((n, n))
    companion.reshape(-1)[n :: n + 1] = 1.0  # subdiagonal
    companion[:, -1] = [-float(c) for c in coeffs[:-1]]
    roots = np.linalg.eigvals(companion)
    der = [j * c for j, c in enumerate(coeffs)][1:]

    def horner(cs, x):
        v = 0.0 + 0.0j
        for c in reversed(cs):
            v = v * x + c
        return v

    out = []
    for r in roots:
        x = complex(r)
        for _ in range(2):
            d = horner(der, x)
            if d == 0:
                break
            x -= horner(coeffs, x) / d
        out.append(x)
    return out


def _mpmath_polish(coeffs: tuple[int, ...], seeds, prec: int):
    der = [j * c for j, c in enumerate(coeffs)][1:]
    desc = list(reversed(coeffs))
    der_desc = list(reversed(der))
    out = []
    with mpmath.workprec(prec + 20):
        for s in seeds:
            x = mpmath.mpc(s[0], s[1]) if isinstance(s, tuple) else mpmath.mpc(s)
            for _ in range(4):
                d = mpmath.polyval(der_desc, x)
                if d == 0:
                    break
                x = x - mpmath.polyval(desc, x) / d
            out.append(x)
    return out


def _dyadic_center(value, k: int) -> int:
    if isinstance(value, float):
        if abs(value) < 1e18 and k <= 512:
            return round(value * (1 << k))  # power-of-two scaling is exact
        return round(Fraction(value) * (1 << k))
    # mpmath mpf: exact binary rational (sign, mantissa, exponent, bit count)
    sign, man, exp, _ = value._mpf_
    if man == 0:
        return 0
    f = Fraction(-man if sign else man) * Fraction(2) ** exp
    return round(f * (1 << k))


def _certify_stage(
    coeffs: tuple[int, ...],
    centers: list[tuple[int, int]],
    k: int,
    target: Fraction,
    total_real: int,
) -> tuple[RootEnclosure, ...] | None:
    """Try to certify one enclosure per center; None means escalate.

    All checks run in integer arithmetic at the common dyadic scale 2**k;
    each certified radius is an integer numerator over 2**k.
    """
    n = len(coeffs) - 1
    der = tuple(j * c for j, c in enumerate(coeffs))[1:]
    t_num, t_den = target.numerator, target.denominator
    disks: list[list[int]] = []  # [a, b, r_num, real]
    for a, b in centers:
        vr, vi, _ = dyadic_eval(coeffs, a, b, k)
        dr, di, _ = dyadic_eval(der, a, b, k)
        lo_d = isqrt(dr * dr + di * di)
        if lo_d == 0:
            return None
        m2 = vr * vr + vi * vi
        up_p = isqrt(m2)
        if up_p * up_p != m2:
            up_p += 1
        # radius <= n*up_p/(lo_d*2**k): scales of P and P' differ by exactly 2**k
        r_num = -(-n * up_p // lo_d)
        if r_num * t_den > t_num << k:
            return None
        disks.append([a, b, r_num, False])

    # reality certification: disks meeting the real axis must match the exact count
    touchers = [d for d in disks if abs(d[1]) <= d[2]]
    if len(touchers) != total_real:
        return None
    for d in touchers:
        d[1] = 0
        d[3] = True

    # pairwise disjointness, exact
    for i in range(len(disks)):
        ai, bi, ri, _ = disks[i]
        for j in range(i + 1, len(disks)):
            aj, bj, rj, _ = disks[j]
            da, db, rr = ai - aj, bi - bj, ri + rj
            if da * da + db * db <= rr * rr:
                return None
    disks.sort(key=lambda d: (d[0], d[1]))
    den = 1 << k
    return tuple(
        RootEnclosure(a, b, k, Fraction(r, den), is_real_certified=real)
        for a, b, r, real in disks
    )


def _precision_ladder(ceiling: int) -> list[int]:
    out = [53]
    p = 120
    while p < ceiling:
        out.append(p)
        p *= 2
    out.append(ceiling)
    return out


def isolate_roots(
    P: IntPolynomial,
    target_radius=Fraction(1, 10**12),
    max_precision_bits: int = DEFAULT_PRECISION_CEILING,
    _chain: list[list[int]] | None = None,
) -> tuple[RootEnclosure, ...]:
    """deg(P) pairwise-disjoint disks, each certified to hold exactly one root.

    The disk radius is the a-posteriori bound deg(P)*|P(c)|/|P'(c)| evaluated
    exactly at a dyadic center c; disjointness then pins exactly one root per
    disk. Precision escalates until every radius is below target_radius, or
    PrecisionExhausted is raised with the last (undecided) enclosures.
    """
    if P.degree < 1:
        raise ValueError("degree must be >= 1")
    if not P.is_monic:
        raise ValueError("isolate_roots requires a monic polynomial")
    target = Fraction(target_radius)
    if target <= 0:
        raise ValueError("target_radius must be positive")
    chain = _chain if _chain is not None else sturm_chain(P.coeffs)
    if not chain_is_squarefree(chain):
        raise NotSquarefree(f"{P.render()} is not squarefree")
    if P.degree == 1:
        return (
            RootEnclosure(-P.coeffs[0], 0, 0, Fraction(0), is_real_certified=True),
        )
    total_real = variations_at_infinity(chain, positive=False) - variations_at_infinity(
        chain, positive=True
    )

    coeffs = P.coeffs
    last: tuple[RootEnclosure, ...] = ()
    prev_centers: list[tuple[int, int]] | None = None
    prev_k = 0
    for prec in _precision_ladder(max_precision_bits):
        k = prec + 8
        if prec == 53:
            seeds = _float_seeds(coeffs)
            centers = [
                (_dyadic_center(z.real, k), _dyadic_center(z.imag, k)) for z in seeds
            ]
        else:
            with mpmath.workprec(prec + 20):
                if prev_centers is None:
                    seeds_m = [
                        (mpmath.mpf(z.real), mpmath.mpf(z.imag))
                        for z in _float_seeds(coeffs)
                    ]
                else:
                    den = mpmath.mpf(1 << prev_k)
                    seeds_m = [
                        (mpmath.mpf(a) / den, mpmath.mpf(b) / den)
                        for a, b in prev_centers
                    ]
            polished = _mpmath_polish(coeffs, seeds_m, prec)
            with mpmath.workprec(prec + 40):
                centers = [
                    (_dyadic_center(z.real, k), _dyadic_center(z.imag, k))
                    for z in polished
                ]
        certified = _certify_stage(coeffs, centers, k, target, total_real)
        if certified is not None:
            return certified
        prev_centers, prev_k = centers, k
        last = tuple(
            RootEnclosure(a, b, k, Fraction(1), undecided=True) for a, b in centers
        )
    raise PrecisionExhausted(
        f"could not certify roots of {P.render()} below {max_precision_bits} bits",
        enclosures=last,
    )
