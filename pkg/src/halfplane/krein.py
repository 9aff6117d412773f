"""Kreĭn factors p_J and Kreĭn products k_O.

A factor p_J is the unique fractional-linear self-map of C⁺ that is negative
exactly on the arc J and satisfies |p_J(i)| = 1:

    p_(b,a)(z)   = |i−b|/|i−a| · (z−a)/(z−b)          (b < a finite)
    p_(−∞,a)(z)  = (z−a)/|i−a|
    p_J          = −1/p_J'   for J the complement of the closure of J'
    p_∅ = 1,  p_full = −1.

A product k_O multiplies the factors over the components of an open set O.
Infinite products are evaluated as exp of a sum of principal logarithms:
each summand has imaginary part equal to the angle subtended by its arc, and
the partial sums stay ≤ π, so no branch tracking is needed.  Generator tails
carry a certified bound derived from |v_J(z)| ≤ len(J)·sup_J |1/(t−z) − t/(1+t²)|.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .extreal import (Arc, ArcSet, BoundaryDescriptor, CantorComplement, EMPTY,
                      FULL, INF, Point, boundary_left, is_inf, is_regular,
                      normalize, points_equal)
from .moebius import HalfPlaneAuto, pullback_arcset

REAL_GUARD = 1e-9


class TailNotCertified(RuntimeError):
    """The generator tail could not be bounded below the requested tolerance."""


class EvaluationDomainError(ValueError):
    """Evaluation point too close to the singular set for the continuation."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature of the exponent integral did not converge."""


def _hyp(x: Point) -> float:
    # |i - x| = sqrt(1 + x^2)
    return math.hypot(1.0, float(x))


def p_eval(j, z):
    """Value of the Kreĭn factor p_J at z (complex, real, or the point ∞).

    Real z must differ from the pole b; evaluation exactly at the pole
    returns the ∞ marker (math.inf).
    """
    if isinstance(j, ArcSet):
        if j.is_empty:
            return 1.0
        if j.full:
            return -1.0
        if len(j.arcs) == 1:
            j = j.arcs[0]
        else:
            raise TypeError("p_eval expects a single arc")
    if j.puncture:
        # differs from the full circle by one point; the factor is the constant -1
        return -1.0

    zinf = not isinstance(z, complex) and is_inf(z)
    b, a = j.b, j.a
    if is_inf(b):  # (-oo, a): (z - a)/|i - a|
        if zinf:
            return INF
        return (z - float(a)) / _hyp(a)
    if is_inf(a):  # (b, +oo): -|i - b|/(z - b)
        if zinf:
            return 0.0
        den = z - float(b)
        if den == 0:
            return INF
        return -_hyp(b) / den
    sign = 1.0 if float(b) < float(a) else -1.0
    ratio = _hyp(b) / _hyp(a)
    if zinf:
        return sign * ratio
    den = z - float(b)
    if den == 0:
        return INF
    return sign * ratio * (z - float(a)) / den


def log_p(j, z: complex) -> complex:
    """Principal logarithm of p_J(z) for Im z > 0; imaginary part in [0, π].

    Equals the integral v_J(z) = ∫_J (1+tz)/(t−z) · dt/(1+t²), which for a
    finite arc is log((a−z)/(b−z)) − ½ log((1+a²)/(1+b²)).
    """
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("log_p requires Im z > 0")
    if isinstance(j, ArcSet):
        if j.is_empty:
            return 0.0 + 0.0j
        if j.full:
            return 1j * math.pi
        if len(j.arcs) == 1:
            j = j.arcs[0]
        else:
            raise TypeError("log_p expects a single arc")
    if j.puncture:
        return 1j * math.pi
    # p_J maps C⁺ into C⁺, so the principal branch keeps Im in (0, π)
    return cmath.log(p_eval(j, z))


def log_p_real(j, x: float) -> float:
    """log p_J(x) at a real point where p_J(x) > 0 (off the closure of J)."""
    v = p_eval(j, float(x))
    if not isinstance(v, complex) and (v == INF or v <= 0):
        raise EvaluationDomainError(f"p_J({x}) is not positive")
    return math.log(v)


def _gap_arrays(base, depth: int):
    """Vectorized level-by-level middle-third endpoints for the generator."""
    l, r = float(base[0]), float(base[1])
    starts = np.array([l])
    width = r - l
    bs, as_ = [], []
    for _ in range(depth):
        third = width / 3.0
        bs.append(starts + third)
        as_.append(starts + 2.0 * third)
        starts = np.concatenate([starts, starts + 2.0 * third])
        width = third
    if not bs:
        return np.empty(0), np.empty(0)
    return np.concatenate(bs), np.concatenate(as_)


def _locate_gap(base, cap_depth: int, x: float):
    """(gb, ga, level) of the removed middle third containing x, found by
    walking the construction; fails when x is not in a gap within the cap."""
    lo, hi = float(base[0]), float(base[1])
    if not lo < x < hi:
        raise EvaluationDomainError(f"{x} is outside the base interval")
    for level in range(1, cap_depth + 1):
        third = (hi - lo) / 3.0
        gb, ga = lo + third, hi - third
        if gb < x < ga:
            return gb, ga, level
        if x <= gb:
            hi = lo + third
        else:
            lo = hi - third
    raise EvaluationDomainError(
        f"{x} is within the un-enumerated part of the generator "
        f"(no gap found down to depth {cap_depth})")


def _cantor_majorant(base, z, *, gap=None) -> float:
    """sup over t in the un-enumerated arcs of |1/(t−z) − t/(1+t²)|.

    The tail arcs sit inside the base interval; for a real point inside an
    enumerated gap they additionally stay outside that gap, so the distance
    to the gap's endpoints is the sound denominator there.
    """
    l, r = float(base[0]), float(base[1])
    if isinstance(z, complex) and z.imag != 0:
        x, y = z.real, z.imag
        if x < l:
            dist = math.hypot(l - x, y)
        elif x > r:
            dist = math.hypot(x - r, y)
        else:
            dist = abs(y)
    elif not isinstance(z, complex) and is_inf(z):
        dist = INF
    else:
        x = float(z.real) if isinstance(z, complex) else float(z)
        if l <= x <= r:
            if gap is None:
                raise EvaluationDomainError(
                    f"real evaluation at {x} inside the base needs its gap")
            dist = min(x - gap[0], gap[1] - x)
        else:
            dist = l - x if x < l else x - r

    def u(t):
        return abs(t) / (1.0 + t * t)

    sup_t = max(u(l), u(r))
    if l <= 1.0 <= r or l <= -1.0 <= r:
        sup_t = max(sup_t, 0.5)
    inv = 0.0 if math.isinf(dist) else 1.0 / dist
    return inv + sup_t


@dataclass(frozen=True)
class KreinProduct:
    """k_O for O = explicit arcs plus an optional Cantor-complement generator.

    ``tol`` is the tail tolerance τ: evaluation enumerates generator arcs in
    decreasing length until the certified tail bound at the evaluation point
    drops below τ (within ``max_factors`` and the generator's depth cap), and
    returns that bound alongside the value.
    """

    arcs: ArcSet = EMPTY
    cantor: CantorComplement | None = None
    tol: float = 1e-9
    max_factors: int = 2_000_000

    def __call__(self, z):
        return self.eval(z)[0]

    def eval(self, z):
        """(value, tail_bound) with |true value − value| ≤ tail_bound."""
        explicit = _eval_explicit(self.arcs, z)
        if not isinstance(explicit, complex) and explicit == INF:
            return INF, 0.0
        if self.cantor is None:
            return explicit, 0.0
        gen_val, bound_v = self._eval_generator(z)
        value = explicit * gen_val
        tail = abs(value) * math.expm1(bound_v)
        if tail > self.tol:
            raise TailNotCertified(
                f"tail bound {tail:.3e} exceeds tol {self.tol:.3e} at depth cap "
                f"{self.cantor.depth} / max_factors {self.max_factors}")
        return value, tail

    def _real_inside_gap(self, z):
        """The containing removed gap when z is a real point inside the base."""
        base = self.cantor.base
        l, r = float(base[0]), float(base[1])
        if isinstance(z, complex) and z.imag != 0:
            return None, 0
        if not isinstance(z, complex) and is_inf(z):
            return None, 0
        x = float(z.real) if isinstance(z, complex) else float(z)
        if not l <= x <= r:
            return None, 0
        gb, ga, level = _locate_gap(base, self.cantor.depth, x)
        if min(x - gb, ga - x) < REAL_GUARD:
            raise EvaluationDomainError(f"{x} is within the guard distance of "
                                        "a gap endpoint")
        return (gb, ga), level

    def eval_at_depth(self, z, depth: int):
        """(value, tail_bound) for a fixed truncation depth of the generator."""
        if self.cantor is None:
            raise ValueError("no generator attached")
        gap, level = self._real_inside_gap(z)
        depth = min(max(depth, level), self.cantor.depth)
        base = self.cantor.base
        width = float(base[1]) - float(base[0])
        explicit = _eval_explicit(self.arcs, z)
        val = explicit * _eval_gaps(base, depth, z)
        bound_v = width * (2.0 / 3.0) ** depth * _cantor_majorant(base, z, gap=gap)
        return val, abs(val) * math.expm1(bound_v)

    def _eval_generator(self, z):
        gap, level = self._real_inside_gap(z)
        m = _cantor_majorant(self.cantor.base, z, gap=gap)
        width = float(self.cantor.base[1]) - float(self.cantor.base[0])
        target = min(self.tol, 0.25)
        depth = max(1, level)
        while width * (2.0 / 3.0) ** depth * m > 0.5 * target and depth < self.cantor.depth:
            depth += 1
        while True:
            if 2 ** depth - 1 > self.max_factors:
                raise TailNotCertified("factor budget exhausted before certification")
            bound_v = width * (2.0 / 3.0) ** depth * m
            val = _eval_gaps(self.cantor.base, depth, z)
            if abs(val) * math.expm1(bound_v) <= self.tol or depth >= self.cantor.depth:
                return val, bound_v
            depth += 1

    def structure(self) -> "KreinStructure":
        if self.cantor is not None:
            raise ValueError("structure of generator-backed products is resolved "
                             "by regularization; call on an explicit set")
        return k_structure(self.arcs)

    def support_json(self):
        out = {}
        if not self.arcs.is_empty:
            out["arcs"] = self.arcs.to_json()["arcs"] if not self.arcs.full else "full"
        if self.cantor is not None:
            out.update(self.cantor.to_json())
        return out


def _eval_explicit(o: ArcSet, z):
    if o.full:
        return -1.0 + 0.0j if isinstance(z, complex) else -1.0
    if o.is_empty:
        return 1.0 + 0.0j if isinstance(z, complex) else 1.0
    if isinstance(z, complex) and z.imag != 0:
        if z.imag > 0:
            return cmath.exp(sum(log_p(arc, z) for arc in o.arcs))
        return _product_direct(o, z)
    # real point or ∞: analytic continuation, real-valued
    if not isinstance(z, complex) and is_inf(z):
        val = 1.0
        for arc in o.arcs:
            val *= p_eval(arc, INF)
        return val
    x = float(z.real) if isinstance(z, complex) else float(z)
    guard_violation = None
    for b in o.left_endpoints():
        if is_inf(b):
            continue
        d = abs(x - float(b))
        if d == 0:
            return INF
        if d < REAL_GUARD:
            guard_violation = (b, d)
    if guard_violation is not None:
        raise EvaluationDomainError(
            f"real evaluation at {x} is within {guard_violation[1]:.2e} "
            f"of the singular point {guard_violation[0]}")
    val = 1.0
    for arc in o.arcs:
        val *= p_eval(arc, x)
    return val


def _product_direct(o: ArcSet, z: complex) -> complex:
    val = 1.0 + 0.0j
    for arc in o.arcs:
        val *= p_eval(arc, z)
    return val


def _eval_gaps(base, depth: int, z):
    """Product of the p factors over the enumerated middle thirds (vectorized)."""
    bs, as_ = _gap_arrays(base, depth)
    if bs.size == 0:
        return 1.0 + 0.0j if isinstance(z, complex) else 1.0
    scale = 0.5 * (np.log1p(bs * bs) - np.log1p(as_ * as_))
    if isinstance(z, complex) and z.imag != 0:
        logs = scale + np.log((z - as_) / (z - bs))
        return complex(cmath.exp(complex(np.sum(logs))))
    # real evaluation off the enumerated closure
    x = float(z.real) if isinstance(z, complex) else float(z)
    l, r = float(base[0]), float(base[1])
    if l <= x <= r:
        inside = (bs < x) & (x < as_)
        if not inside.any():
            raise EvaluationDomainError(
                f"{x} is not in an enumerated gap at depth {depth}")
        i = int(np.argmax(inside))
        if min(x - bs[i], as_[i] - x) < REAL_GUARD:
            raise EvaluationDomainError(f"{x} is within the guard distance of "
                                        "a gap endpoint")
    ratios = (x - as_) / (x - bs)
    return float(np.exp(np.sum(scale)) * np.prod(np.sign(ratios)) *
                 np.exp(np.sum(np.log(np.abs(ratios)))))


def k_eval(k: KreinProduct, z):
    """(value, tail_bound) of the Kreĭn product at z."""
    return k.eval(z)


def k_integral_eval(o: ArcSet, z: complex, *, epsabs: float = 1e-11,
                    epsrel: float = 1e-11) -> complex:
    """k_O(z) = e^{v(z)} with v(z) = ∫_O (1+tz)/(t−z) · dt/(1+t²) computed by
    adaptive quadrature, arc by arc.  Requires Im z > 0 and an explicit set."""
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("k_integral_eval requires Im z > 0")
    if o.full:
        segments = [(-math.inf, math.inf)]
    elif o.is_empty:
        return 1.0 + 0.0j
    else:
        segments = []
        for arc in o.arcs:
            if arc.puncture:
                segments.append((-math.inf, math.inf))
            elif is_inf(arc.b):
                segments.append((-math.inf, float(arc.a)))
            elif is_inf(arc.a):
                segments.append((float(arc.b), math.inf))
            elif arc.is_wrap:
                segments.append((float(arc.b), math.inf))
                segments.append((-math.inf, float(arc.a)))
            else:
                segments.append((float(arc.b), float(arc.a)))

    def integrand_re(t):
        w = (1.0 + t * z) / ((t - z) * (1.0 + t * t))
        return w.real

    def integrand_im(t):
        w = (1.0 + t * z) / ((t - z) * (1.0 + t * t))
        return w.imag

    v = 0.0 + 0.0j
    for lo, hi in segments:
        re, re_err = quad(integrand_re, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=300)
        im, im_err = quad(integrand_im, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=300)
        if re_err > 1e-7 or im_err > 1e-7:
            raise QuadratureError(f"quadrature error {max(re_err, im_err):.2e} on "
                                  f"segment ({lo}, {hi})")
        v += re + 1j * im
    return cmath.exp(v)


@dataclass(frozen=True)
class KreinStructure:
    sigma: BoundaryDescriptor
    gamma: ArcSet
    zeros: tuple
    poles: tuple


def k_structure(o: ArcSet) -> KreinStructure:
    """σ, Γ, zeros and poles of k_O for a Lebesgue-regular explicit set.

    σ(k_O) is the closure X of the left endpoints, Γ(k_O) = O, the right
    endpoints off X are simple zeros and the isolated points of X are simple
    poles.  A pole or zero at ∞ means linear growth / decay there.
    """
    if o.full:
        return KreinStructure(BoundaryDescriptor((), False), FULL, (), ())
    if o.is_empty:
        return KreinStructure(BoundaryDescriptor((), False), EMPTY, (), ())
    if any(arc.puncture for arc in o.arcs):
        raise ValueError("punctured-circle sets behave as constants; "
                         "regularize before asking for structure")
    if not is_regular(o):
        raise ValueError("set is not Lebesgue regular; call regularize first")
    x = boundary_left(o)
    zeros = tuple(a for a in o.right_endpoints()
                  if not any(points_equal(a, b) for b in x.points))
    return KreinStructure(x, o, zeros, tuple(x.points))


def equivariance_transport(k: KreinProduct, phi: HalfPlaneAuto):
    """(k', c) with k' over φ⁻¹(O) and k_{φ⁻¹(O)} = c · k_O ∘ φ, c = 1/|k_O(φ(i))|."""
    if k.cantor is not None:
        raise ValueError("equivariance transport requires a finite explicit set")
    value = k(phi(1j))
    c = 1.0 / abs(value)
    pulled = KreinProduct(pullback_arcset(phi, k.arcs), tol=k.tol,
                          max_factors=k.max_factors)
    return pulled, c


def cantor_complement_product(base=(0, 1), depth: int = 30, tol: float = 1e-9,
                              max_factors: int = 2_000_000) -> KreinProduct:
    """Kreĭn product over the full complement of the Cantor set built on base:
    the two half-lines outside [l, r] plus the removed middle thirds.  Its
    value is −1 in the infinite-depth limit."""
    l, r = base
    exterior = normalize([Arc(INF, l), Arc(r, INF)])
    return KreinProduct(arcs=exterior, cantor=CantorComplement((l, r), depth),
                        tol=tol, max_factors=max_factors)
