"""Numeric verification of the Kähler potential F = |z|^2 + 1/(y_1...y_s).

The potential lives on C x H^s with coordinates z and z_k = x_k + i*y_k,
y_k > 0. Closed forms verified here against Wirtinger finite differences:

  first derivatives   d_j u = -u / (z_j - conj(z_j))
  metric              h_jk = (u/4) (1 + delta_jk) / (y_j y_k)
  determinant         det h = (s+1) u^(s+2) / 4^s
  Ricci               R_jk = -((s+2)/4) delta_jk / (y_j y_k)

The Ricci closed form follows from R = -d d-bar ln det h with
ln det h = const + (s+2) ln u and ln u = -sum ln y_k: a sum of
single-variable terms, so all mixed second derivatives vanish and the
matrix is diagonal. Its entries are strictly negative, which is the
negative-definiteness mechanism the metric's irreducible factor relies on.

Finite-difference steps are relative per coordinate. Second-derivative
checks (tolerance 1e-6) default to 1e-4 * scale, where truncation O(h^2)
and rounding noise O(eps/h^2) balance near 1e-7. First-derivative checks
(tolerance 1e-8) default to 1e-5 * scale, since gradient noise only grows
like O(eps/h).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

GRAD_STEP_REL = 1e-5
HESS_STEP_REL = 1e-4


@dataclass(frozen=True)
class HyperPoint:
    """A point of C x H^s: z in the plane factor, zs on the upper half-planes."""

    z: complex
    zs: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "zs", tuple(complex(w) for w in self.zs))
        if any(w.imag <= 0 for w in self.zs):
            raise ValueError("all half-plane coordinates need positive imaginary part")

    @property
    def s(self) -> int:
        return len(self.zs)

    @property
    def ys(self) -> tuple[float, ...]:
        return tuple(w.imag for w in self.zs)

    def coords(self) -> tuple[complex, ...]:
        return (self.z,) + self.zs

    def replace_coord(self, idx: int, value: complex) -> "HyperPoint":
        if idx == 0:
            return HyperPoint(value, self.zs)
        zs = list(self.zs)
        zs[idx - 1] = value
        return HyperPoint(self.z, tuple(zs))


@dataclass(frozen=True)
class HermitianMatrixSample:
    point: HyperPoint
    h: np.ndarray
    source: str  # "ClosedForm" | "FiniteDifference"

    def hermitian_deviation(self) -> float:
        return float(np.max(np.abs(self.h - self.h.conj().T)))


def u_value(point: HyperPoint) -> float:
    return 1.0 / math.prod(point.ys)


def F_value(point: HyperPoint) -> float:
    return abs(point.z) ** 2 + u_value(point)


def _coord_scales(point: HyperPoint) -> list[float]:
    return [max(1.0, abs(point.z))] + [w.imag for w in point.zs]


def wirtinger_gradient(
    f: Callable[[HyperPoint], float], point: HyperPoint, step_rel: float = GRAD_STEP_REL
) -> np.ndarray:
    """d f / d z_j = (1/2)(d_x - i d_y) f by central differences, all coords."""
    n = point.s + 1
    scales = _coord_scales(point)
    out = np.zeros(n, dtype=complex)
    for j in range(n):
        h = step_rel * scales[j]
        c = point.coords()[j]
        fx = (
            f(point.replace_coord(j, c + h)) - f(point.replace_coord(j, c - h))
        ) / (2 * h)
        fy = (
            f(point.replace_coord(j, c + 1j * h)) - f(point.replace_coord(j, c - 1j * h))
        ) / (2 * h)
        out[j] = (fx - 1j * fy) / 2
    return out


def _second_diff(
    f: Callable[[HyperPoint], float],
    point: HyperPoint,
    j: int,
    dj: complex,
    k: int,
    dk: complex,
    hj: float,
    hk: float,
) -> float:
    """d^2 f along real directions dj (coord j) and dk (coord k)."""
    if j == k and dj == dk:
        c = point.coords()[j]
        return (
            f(point.replace_coord(j, c + hj * dj))
            - 2 * f(point)
            + f(point.replace_coord(j, c - hj * dj))
        ) / (hj * hj)
    pp = point.replace_coord(j, point.coords()[j] + hj * dj)
    pm = point.replace_coord(j, point.coords()[j] + hj * dj)
    pp = pp.replace_coord(k, pp.coords()[k] + hk * dk)
    pm = pm.replace_coord(k, pm.coords()[k] - hk * dk)
    mp = point.replace_coord(j, point.coords()[j] - hj * dj)
    mm = point.replace_coord(j, point.coords()[j] - hj * dj)
    mp = mp.replace_coord(k, mp.coords()[k] + hk * dk)
    mm = mm.replace_coord(k, mm.coords()[k] - hk * dk)
    return (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * hj * hk)


def wirtinger_hessian(
    f: Callable[[HyperPoint], float], point: HyperPoint, step_rel: float = HESS_STEP_REL
) -> np.ndarray:
    """Mixed complex hessian d_j d_kbar f over all coordinates.

    d_j d_kbar = (1/4)(dx_j dx_k + i dx_j dy_k - i dy_j dx_k + dy_j dy_k).
    """
    n = point.s + 1
    scales = _coord_scales(point)
    out = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            hj, hk = step_rel * scales[j], step_rel * scales[k]
            xx = _second_diff(f, point, j, 1, k, 1, hj, hk)
            xy = _second_diff(f, point, j, 1, k, 1j, hj, hk)
            yx = _second_diff(f, point, j, 1j, k, 1, hj, hk)
            yy = _second_diff(f, point, j, 1j, k, 1j, hj, hk)
            out[j, k] = (xx + 1j * xy - 1j * yx + yy) / 4
    return out


def first_derivative_closed_form(point: HyperPoint) -> np.ndarray:
    """d_j u = -u/(z_j - conj z_j) on the half-plane coords, 0 on the flat one."""
    u = u_value(point)
    out = np.zeros(point.s + 1, dtype=complex)
    for j, w in enumerate(point.zs, start=1):
        out[j] = -u / (w - w.conjugate())
    return out


def check_first_derivatives(point: HyperPoint, step_rel: float = GRAD_STEP_REL) -> float:
    """Max deviation of the finite-difference du and dbar-u from closed forms."""
    grad = wirtinger_gradient(u_value, point, step_rel)
    closed = first_derivative_closed_form(point)
    dev = float(np.max(np.abs(grad - closed)))
    # dbar_j u = +u/(z_j - zbar_j); the FD dbar is conj(grad) since u is real
    dev = max(dev, float(np.max(np.abs(np.conj(grad) - (-closed)))))
    return dev


def metric_closed_form(point: HyperPoint) -> HermitianMatrixSample:
    """h_jk = (u/4)(1 + delta_jk)/(y_j y_k) on the half-plane block."""
    s = point.s
    u = u_value(point)
    ys = point.ys
    h = np.empty((s, s), dtype=complex)
    for j in range(s):
        for k in range(s):
            h[j, k] = (u / 4) * (1 + (j == k)) / (ys[j] * ys[k])
    sample = HermitianMatrixSample(point, h, "ClosedForm")
    if np.min(np.linalg.eigvalsh(h)) <= 0:
        raise ArithmeticError("closed-form metric not positive definite")
    return sample


def check_metric(point: HyperPoint, step_rel: float = HESS_STEP_REL) -> float:
    """Max deviation of the u-hessian from the closed-form metric block."""
    hess = wirtinger_hessian(u_value, point, step_rel)
    closed = metric_closed_form(point).h
    return float(np.max(np.abs(hess[1:, 1:] - closed)))


def check_flat_factor(point: HyperPoint, step_rel: float = HESS_STEP_REL) -> float:
    """Product structure of F: flat entry exactly 1, mixed entries 0."""
    hess = wirtinger_hessian(F_value, point, step_rel)
    dev = abs(hess[0, 0] - 1)
    if point.s:
        dev = max(dev, float(np.max(np.abs(hess[0, 1:]))), float(np.max(np.abs(hess[1:, 0]))))
    return float(dev)


def determinant_closed_form(point: HyperPoint) -> float:
    s = point.s
    return (s + 1) * u_value(point) ** (s + 2) / 4**s


def check_determinant(point: HyperPoint) -> float:
    """Relative deviation between det(closed-form h) and (s+1)u^(s+2)/4^s."""
    det = np.linalg.det(metric_closed_form(point).h).real
    ref = determinant_closed_form(point)
    return abs(det - ref) / abs(ref)


def _det_exact(M: list[list[Fraction]]) -> Fraction:
    n = len(M)
    if n == 1:
        return M[0][0]
    total = Fraction(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * _det_exact(minor)
        total += term if j % 2 == 0 else -term
    return total


def exact_determinant_identity(ys: Sequence[Fraction]) -> bool:
    """det h == (s+1) u^(s+2) / 4^s in exact rational arithmetic."""
    s = len(ys)
    if s < 1 or s > 3:
        raise ValueError("exact path supports 1 <= s <= 3")
    ys = [Fraction(y) for y in ys]
    if any(y <= 0 for y in ys):
        raise ValueError("ys must be positive")
    u = Fraction(1)
    for y in ys:
        u /= y
    h = [
        [u / 4 * (1 + (j == k)) / (ys[j] * ys[k]) for k in range(s)]
        for j in range(s)
    ]
    return _det_exact(h) == (s + 1) * u ** (s + 2) / Fraction(4) ** s


def scaling_law_exact(ys: Sequence[Fraction], c: Fraction) -> bool:
    """u(c*y) = c^-s u(y) and h(c*y) = c^-(s+2) h(y), exactly on rationals."""
    s = len(ys)
    ys = [Fraction(y) for y in ys]
    c = Fraction(c)
    if c <= 0 or any(y <= 0 for y in ys):
        raise ValueError("scaling law needs positive inputs")
    u = Fraction(1)
    uc = Fraction(1)
    for y in ys:
        u /= y
        uc /= c * y
    if uc != u / c**s:
        return False
    for j in range(s):
        for k in range(s):
            h = u / 4 * (1 + (j == k)) / (ys[j] * ys[k])
            hc = uc / 4 * (1 + (j == k)) / (c * ys[j] * c * ys[k])
            if hc != h / c ** (s + 2):
                return False
    return True


def ricci_closed_form(point: HyperPoint) -> np.ndarray:
    """R_jk = -((s+2)/4) delta_jk / (y_j y_k): diagonal and negative."""
    s = point.s
    ys = point.ys
    R = np.zeros((s, s), dtype=complex)
    for j in range(s):
        R[j, j] = -(s + 2) / (4 * ys[j] * ys[j])
    return R


def check_ricci(point: HyperPoint, step_rel: float = HESS_STEP_REL) -> tuple[float, bool]:
    """(max deviation of -dd-bar ln det h from the closed form, negative definite?)."""

    def log_det(p: HyperPoint) -> float:
        return math.log(np.linalg.det(metric_closed_form(p).h).real)

    fd = -wirtinger_hessian(log_det, point, step_rel)[1:, 1:]
    closed = ricci_closed_form(point)
    dev = float(np.max(np.abs(fd - closed)))
    neg_def = bool(np.max(np.linalg.eigvalsh((closed + closed.conj().T) / 2)) < 0)
    return dev, neg_def


def check_ricci_u_route(point: HyperPoint, step_rel: float = HESS_STEP_REL) -> float:
    """Consistency: R must also equal -(s+2) * dd-bar ln u."""

    def log_u(p: HyperPoint) -> float:
        return math.log(u_value(p))

    fd = -(point.s + 2) * wirtinger_hessian(log_u, point, step_rel)[1:, 1:]
    return float(np.max(np.abs(fd - ricci_closed_form(point))))


def _random_point(rng: np.random.Generator, s: int, y_lo: float, y_hi: float) -> HyperPoint:
    z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    zs = tuple(
        complex(rng.uniform(-1, 1), math.exp(rng.uniform(math.log(y_lo), math.log(y_hi))))
        for _ in range(s)
    )
    return HyperPoint(z, zs)


def verify_ot_report(
    s: int,
    samples: int = 100,
    seed: int = 0,
    step_rel: float = HESS_STEP_REL,
) -> dict:
    """Full verification sweep for one s; deterministic for a fixed seed.

    Finite-difference comparisons sample y in [0.7, 2.0], where the absolute
    tolerances correspond to >= 4x margin over the O(h^2) truncation
    estimates; definiteness of the closed forms is additionally checked on
    the wide domain y in [0.1, 10].
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    rng = np.random.default_rng(seed)
    dev_eq1 = dev_eq2 = dev_det = dev_ricci = dev_flat = dev_uroute = 0.0
    dev_herm = 0.0
    h_pos = r_neg = True
    for _ in range(samples):
        p = _random_point(rng, s, 0.7, 2.0)
        dev_eq1 = max(dev_eq1, check_first_derivatives(p))
        dev_eq2 = max(dev_eq2, check_metric(p, step_rel))
        dev_det = max(dev_det, check_determinant(p))
        rdev, rneg = check_ricci(p, step_rel)
        dev_ricci = max(dev_ricci, rdev)
        r_neg &= rneg
        dev_uroute = max(dev_uroute, check_ricci_u_route(p, step_rel))
        dev_flat = max(dev_flat, check_flat_factor(p, step_rel))
        sample = metric_closed_form(p)
        dev_herm = max(dev_herm, sample.hermitian_deviation())
        h_pos &= bool(np.min(np.linalg.eigvalsh(sample.h)) > 0)
    # wide-domain definiteness on the closed forms only (no differencing)
    for _ in range(samples):
        p = _random_point(rng, s, 0.1, 10.0)
        h_pos &= bool(np.min(np.linalg.eigvalsh(metric_closed_form(p).h)) > 0)
        R = ricci_closed_form(p)
        r_neg &= bool(np.max(np.linalg.eigvalsh((R + R.conj().T) / 2)) < 0)
    exact_det = all(
        exact_determinant_identity(ys)
        for ys in _rational_tuples(s)
    )
    exact_scaling = all(
        scaling_law_exact(ys, c)
        for ys in _rational_tuples(s)
        for c in (Fraction(2), Fraction(3, 7), Fraction(12, 5))
    )
    return {
        "s": s,
        "samples": samples,
        "seed": seed,
        "step_rel_hessian": step_rel,
        "step_rel_gradient": GRAD_STEP_REL,
        "max_dev_first_derivatives": dev_eq1,
        "max_dev_metric": dev_eq2,
        "max_rel_dev_determinant": dev_det,
        "max_dev_ricci": dev_ricci,
        "max_dev_ricci_u_route": dev_uroute,
        "max_dev_flat_factor": dev_flat,
        "max_hermitian_deviation": dev_herm,
        "metric_positive_definite": bool(h_pos),
        "ricci_negative_definite": bool(r_neg),
        "exact_determinant_identity": bool(exact_det),
        "exact_scaling_law": bool(exact_scaling),
        "passes": {
            "eq1_1e-8": bool(dev_eq1 <= 1e-8),
            "eq2_1e-6": bool(dev_eq2 <= 1e-6),
            "det_1e-10": bool(dev_det <= 1e-10),
            "ricci_1e-6": bool(dev_ricci <= 1e-6),
            "ricci_u_route_1e-6": bool(dev_uroute <= 1e-6),
            "flat_factor_1e-6": bool(dev_flat <= 1e-6),
            "definiteness": bool(h_pos and r_neg),
            "exact_identities": bool(exact_det and exact_scaling),
        },
    }


def _rational_tuples(s: int) -> list[tuple[Fraction, ...]]:
    if s > 3:
        return []
    base = [Fraction(1), Fraction(1, 2), Fraction(7, 3), Fraction(5, 4)]
    out = []
    for i in range(3):
        out.append(tuple(base[(i + k) % len(base)] for k in range(s)))
    return out
