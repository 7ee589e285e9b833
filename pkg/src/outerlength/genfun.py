"""Generating function of the outer length billiard and its derivatives.

One billiard step is encoded by the pair of tangency angles (alpha1, alpha2)
with gap w = alpha2 - alpha1 in (0, pi).  The generating value is

    S = l1 + l2 - (boundary arc from gamma(alpha1) to gamma(alpha2)),

where l1, l2 are the tangent segment lengths from the chord vertex.  All
first and second partials of S have closed forms in the support data; the
first partials are (minus/plus) the radii R1, R2 of the auxiliary circles of
the reflection rule.  Everything here is implemented twice on purpose: a raw
support-function form and an l*tan(w/2) form, so the tests can pin the two
routes against each other and against finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ChordDomainError

#: guard band for the tangency-angle gap; cot/tan blow up at the endpoints
OMEGA_MIN = 1e-4


def _check_omega(omega):
    bad = (omega < OMEGA_MIN) | (omega > np.pi - OMEGA_MIN)
    if np.any(bad):
        raise ChordDomainError(
            f"gap outside ({OMEGA_MIN}, pi - {OMEGA_MIN}): "
            f"offending value {np.atleast_1d(omega)[np.argmax(np.atleast_1d(bad))]}"
        )


@dataclass(frozen=True)
class ChordConfig:
    """Tangency angle pair of one billiard chord, gap strictly inside (0, pi)."""

    alpha1: float
    alpha2: float

    def __post_init__(self):
        _check_omega(self.omega)

    @property
    def omega(self):
        return self.alpha2 - self.alpha1


@dataclass(frozen=True)
class StepData:
    """All chord quantities in one record (second partials optional)."""

    l1: float
    l2: float
    S: float
    R1: float
    R2: float
    S11: float | None = None
    S12: float | None = None
    S22: float | None = None


# -- vectorized closed forms (arrays of alpha1, alpha2) ----------------------


def lengths_arr(oval, a1, a2):
    """Tangent segment lengths (l1, l2); raw support-function form."""
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    w = a2 - a1
    _check_omega(w)
    sw = np.sin(w)
    cotw = np.cos(w) / sw
    p1, p2 = oval.p(a1), oval.p(a2)
    l1 = -oval.p(a1, 1) + p2 / sw - p1 * cotw
    l2 = oval.p(a2, 1) + p1 / sw - p2 * cotw
    return l1, l2


def S_arr(oval, a1, a2):
    """Generating value S = (p1 + p2) tan(w/2) - integral of p."""
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    w = a2 - a1
    _check_omega(w)
    out = np.asarray((oval.p(a2) + oval.p(a1)) * np.tan(w / 2.0))
    out = out - oval.support_integral(a1, a2)
    return out if out.ndim else float(out)


def grad_arr(oval, a1, a2):
    """(S1, S2) in the raw 1/(2 cos^2(w/2)) support form."""
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    w = a2 - a1
    _check_omega(w)
    cw, sw = np.cos(w), np.sin(w)
    den = 2.0 * np.cos(w / 2.0) ** 2
    p1, p2 = oval.p(a1), oval.p(a2)
    S1 = (p1 * cw - p2 + oval.p(a1, 1) * sw) / den
    S2 = (-p2 * cw + p1 + oval.p(a2, 1) * sw) / den
    return S1, S2


def radii_arr(oval, a1, a2):
    """Auxiliary circle radii (R1, R2) = (l1, l2) * tan(w/2)."""
    l1, l2 = lengths_arr(oval, a1, a2)
    t = np.tan((np.asarray(a2, dtype=float) - np.asarray(a1, dtype=float)) / 2.0)
    return l1 * t, l2 * t


def hess_arr(oval, a1, a2):
    """(S11, S12, S22); sign pattern (+, -, +) for every valid chord."""
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    w = a2 - a1
    _check_omega(w)
    R1, R2 = radii_arr(oval, a1, a2)
    t = np.tan(w / 2.0)
    S11 = t * (R1 + oval.curvature_radius(a1))
    S22 = t * (R2 + oval.curvature_radius(a2))
    S12 = -(R1 + R2) / np.sin(w)
    return S11, S12, S22


# -- ChordConfig front end ---------------------------------------------------


def tangent_lengths(oval, cfg):
    """Tangent segment lengths (l1, l2) of the chord."""
    l1, l2 = lengths_arr(oval, cfg.alpha1, cfg.alpha2)
    return float(l1), float(l2)


def generating_S(oval, cfg):
    """Generating value S(alpha1, alpha2)."""
    return float(S_arr(oval, cfg.alpha1, cfg.alpha2))


def grad_S(oval, cfg):
    """First partials (S1, S2) = (-R1, R2)."""
    S1, S2 = grad_arr(oval, cfg.alpha1, cfg.alpha2)
    return float(S1), float(S2)


def radii(oval, cfg):
    """Auxiliary circle radii (R1, R2), both strictly positive."""
    R1, R2 = radii_arr(oval, cfg.alpha1, cfg.alpha2)
    return float(R1), float(R2)


def hess_S(oval, cfg):
    """Second partials (S11, S12, S22)."""
    S11, S12, S22 = hess_arr(oval, cfg.alpha1, cfg.alpha2)
    return float(S11), float(S12), float(S22)


def step_data(oval, cfg, second_order=False):
    """Bundle l's, S, R's (and optionally the Hessian) for one chord."""
    l1, l2 = tangent_lengths(oval, cfg)
    R1, R2 = radii(oval, cfg)
    S = generating_S(oval, cfg)
    if not second_order:
        return StepData(l1=l1, l2=l2, S=S, R1=R1, R2=R2)
    S11, S12, S22 = hess_S(oval, cfg)
    return StepData(l1=l1, l2=l2, S=S, R1=R1, R2=R2, S11=S11, S12=S12, S22=S22)


# -- finite-difference verifiers ---------------------------------------------


def fd_grad_S(oval, cfg, h=1e-5):
    """Central-difference gradient of S, the independent check on grad_S."""
    a1, a2 = cfg.alpha1, cfg.alpha2
    S1 = (S_arr(oval, a1 + h, a2) - S_arr(oval, a1 - h, a2)) / (2 * h)
    S2 = (S_arr(oval, a1, a2 + h) - S_arr(oval, a1, a2 - h)) / (2 * h)
    return float(S1), float(S2)


def fd_hess_S(oval, cfg, h=1e-4):
    """Central second differences of S, the independent check on hess_S."""
    a1, a2 = cfg.alpha1, cfg.alpha2
    s0 = S_arr(oval, a1, a2)
    S11 = (S_arr(oval, a1 + h, a2) - 2 * s0 + S_arr(oval, a1 - h, a2)) / h**2
    S22 = (S_arr(oval, a1, a2 + h) - 2 * s0 + S_arr(oval, a1, a2 - h)) / h**2
    S12 = (
        S_arr(oval, a1 + h, a2 + h)
        - S_arr(oval, a1 + h, a2 - h)
        - S_arr(oval, a1 - h, a2 + h)
        + S_arr(oval, a1 - h, a2 - h)
    ) / (4 * h**2)
    return float(S11), float(S12), float(S22)


def fd_grad_arr(oval, a1, a2, h=1e-5):
    """Vectorized central-difference gradient (for bulk sampling suites)."""
    S1 = (S_arr(oval, a1 + h, a2) - S_arr(oval, a1 - h, a2)) / (2 * h)
    S2 = (S_arr(oval, a1, a2 + h) - S_arr(oval, a1, a2 - h)) / (2 * h)
    return S1, S2


def fd_hess_arr(oval, a1, a2, h=1e-4):
    """Vectorized central second differences (for bulk sampling suites)."""
    s0 = S_arr(oval, a1, a2)
    S11 = (S_arr(oval, a1 + h, a2) - 2 * s0 + S_arr(oval, a1 - h, a2)) / h**2
    S22 = (S_arr(oval, a1, a2 + h) - 2 * s0 + S_arr(oval, a1, a2 - h)) / h**2
    S12 = (
        S_arr(oval, a1 + h, a2 + h)
        - S_arr(oval, a1 + h, a2 - h)
        - S_arr(oval, a1 - h, a2 + h)
        + S_arr(oval, a1 - h, a2 - h)
    ) / (4 * h**2)
    return S11, S12, S22


def sample_chords(rng, n, omega_lo=0.2, omega_hi=np.pi - 0.4):
    """Random (alpha1, alpha2) arrays with gaps in [omega_lo, omega_hi].

    The default window keeps the finite-difference comparison stencils well
    inside the chord domain, where the 1e-6 / 1e-4 agreement tolerances hold
    with margin; the closed forms themselves are good on all of (0, pi).
    """
    a1 = rng.uniform(0.0, 2.0 * np.pi, n)
    w = rng.uniform(omega_lo, omega_hi, n)
    return a1, a1 + w
