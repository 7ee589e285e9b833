"""Constructors for billiard tables carrying invariant curves of 4-periodic points.

A centrally symmetric table whose map has an invariant curve of 4-periodic
points is swept out by a one-parameter family of circumscribed parallelograms
of perimeter 4.  Writing a parallelogram as support data (alpha1, alpha2, p1,
p2) (opposite sides repeat with angle shift pi), the family is the Legendrian
graph z = f(x), y = f'(x) of the contact form y dx - dz in the variables

    x = (alpha1 + alpha2) / 2,  y = 2 cos(alpha2 - alpha1),  z = p2 - p1,

with f any 2*pi-periodic function obeying f(x + pi/2) = -f(x) and |f'| < 2.
Undoing the change of variables gives the closed-form family

    alpha1 = x - arccos(f'(x) / 2) / 2,
    p1 = (sqrt(4 - f'(x)^2) - 2 f(x)) / 4,   p2 = p1 + f(x),

and the table is the envelope of the side lines, i.e. the support function
p(alpha1(x)) = p1(x) resampled onto a uniform angle grid.  The same family
satisfies p'(alpha1) = -cos(w), p'(alpha2) = cos(w), p(alpha1) + p(alpha2) =
sin(w) with w = alpha2 - alpha1, which drives the quadrant-arc extension
constructor `radon_like`: prescribe a convex support arc on [0, pi/2] with
flat ends and p(0) + p(pi/2) = 1, extend it to the second quadrant by

    beta = alpha + arccos(-p'(alpha)),   p(beta) = -p(alpha) + sin(beta - alpha),

and close up by central symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._solve import newton_1d
from .errors import (
    ArcConstraintError,
    ConvexityError,
    FPrimeBoundError,
    OvalValidationError,
    ReparamError,
    SeamError,
)
from .genfun import ChordConfig
from .oval import SupportOval

TWO_PI = 2.0 * np.pi


# -- the one-variable data -----------------------------------------------------


class FourPeriodicSpec:
    """A function f with f(x + pi/2) = -f(x), |f'| < 2, f(0) = 0.

    Built either from trigonometric coefficients on the allowed harmonics
    (2, 6, 10, ...; the ones anti-periodic under a quarter turn) or from
    callables (f, f', optionally f'').
    """

    def __init__(self, f, fprime, fsecond=None, harmonics=None, grid=4096):
        self._f = f
        self._fp = fprime
        self._fpp = fsecond
        self.harmonics = harmonics
        self._grid = np.linspace(0.0, TWO_PI, grid, endpoint=False)
        self._validate()

    @classmethod
    def from_harmonics(cls, coefficients):
        """coefficients: mapping harmonic -> (cos_coef, sin_coef), harmonic = 2 mod 4."""
        ks = np.array(sorted(coefficients), dtype=float)
        if np.any(np.mod(ks, 4) != 2):
            raise ArcConstraintError(
                f"harmonics {sorted(coefficients)} must all be congruent to 2 mod 4"
            )
        cs = np.array([coefficients[int(k)][0] for k in ks], dtype=float)
        ss = np.array([coefficients[int(k)][1] for k in ks], dtype=float)

        def f(x, ks=ks, cs=cs, ss=ss):
            kx = np.multiply.outer(np.asarray(x, dtype=float), ks)
            return np.cos(kx) @ cs + np.sin(kx) @ ss

        def fp(x, ks=ks, cs=cs, ss=ss):
            kx = np.multiply.outer(np.asarray(x, dtype=float), ks)
            return -np.sin(kx) @ (ks * cs) + np.cos(kx) @ (ks * ss)

        def fpp(x, ks=ks, cs=cs, ss=ss):
            kx = np.multiply.outer(np.asarray(x, dtype=float), ks)
            return -np.cos(kx) @ (ks * ks * cs) - np.sin(kx) @ (ks * ks * ss)

        return cls(f, fp, fpp, harmonics=dict(coefficients))

    @classmethod
    def from_callable(cls, f, fprime, fsecond=None):
        return cls(f, fprime, fsecond)

    def f(self, x):
        return self._f(x)

    def fprime(self, x):
        return self._fp(x)

    def fsecond(self, x, h=1e-6):
        if self._fpp is not None:
            return self._fpp(x)
        return (self._fp(x + h) - self._fp(x - h)) / (2.0 * h)

    def _validate(self):
        g = self._grid
        anti = np.max(np.abs(self._f(g + np.pi / 2.0) + self._f(g)))
        if anti > 1e-12:
            raise ArcConstraintError(
                f"f(x + pi/2) = -f(x) violated (defect {anti:.3e})"
            )
        if abs(float(self._f(0.0))) > 1e-12:
            raise ArcConstraintError("normalization f(0) = 0 violated")
        self.max_fprime = self._refined_max_abs_fprime()
        if self.max_fprime >= 2.0 - 1e-12:
            raise FPrimeBoundError(
                f"f-prime bound violated: max |f'| = {self.max_fprime:.6f} >= 2"
            )

    def _refined_max_abs_fprime(self, levels=3, local=32):
        g = self._grid
        vals = np.abs(self._fp(g))
        i = int(np.argmax(vals))
        best = float(vals[i])
        center = g[i]
        h = g[1] - g[0]
        for _ in range(levels):
            loc = np.linspace(center - h, center + h, local)
            lv = np.abs(self._fp(loc))
            j = int(np.argmax(lv))
            if lv[j] > best:
                best = float(lv[j])
                center = loc[j]
            h /= 8.0
        return best

    def to_json(self):
        if self.harmonics is None:
            raise ValueError("only harmonic-coefficient specs serialize to JSON")
        return {
            "type": "four-periodic",
            "harmonics": [
                {"k": int(k), "cos": float(c), "sin": float(s)}
                for k, (c, s) in sorted(self.harmonics.items())
            ],
        }

    @classmethod
    def from_json(cls, obj):
        coeffs = {
            int(h["k"]): (float(h.get("cos", 0.0)), float(h.get("sin", 0.0)))
            for h in obj["harmonics"]
        }
        return cls.from_harmonics(coeffs)


@dataclass(frozen=True)
class ParallelogramState:
    """Origin-centered circumscribed parallelogram in support coordinates.

    Sides sit at angles (alpha1, alpha2, alpha1 + pi, alpha2 + pi) with
    support values (p1, p2, p1, p2).
    """

    alpha1: float
    alpha2: float
    p1: float
    p2: float

    @property
    def omega(self):
        return self.alpha2 - self.alpha1

    @property
    def perimeter(self):
        return 4.0 * (self.p1 + self.p2) / np.sin(self.omega)

    def shifted(self):
        """Quarter-turn of the cyclic side labels: (a1,a2,p1,p2) -> (a2,a1+pi,p2,p1)."""
        return ParallelogramState(
            self.alpha2, self.alpha1 + np.pi, self.p2, self.p1
        )

    def angles(self):
        return np.array(
            [self.alpha1, self.alpha2, self.alpha1 + np.pi, self.alpha2 + np.pi]
        )

    def supports(self):
        return np.array([self.p1, self.p2, self.p1, self.p2])


def _family_raw(spec, x):
    x = np.asarray(x, dtype=float)
    fp = spec.fprime(x)
    w = np.arccos(fp / 2.0)
    root = np.sqrt(4.0 - fp * fp)
    fv = spec.f(x)
    p1 = (root - 2.0 * fv) / 4.0
    p2 = (root + 2.0 * fv) / 4.0
    return x - w / 2.0, x + w / 2.0, p1, p2


def parallelogram_orbit(spec, x):
    """The circumscribed parallelogram of the family at parameter x."""
    a1, a2, p1, p2 = _family_raw(spec, float(x))
    return ParallelogramState(float(a1), float(a2), float(p1), float(p2))


@dataclass(frozen=True)
class ParallelogramFamily:
    """The full invariant curve: parallelogram states indexed by x in [0, 2*pi)."""

    spec: FourPeriodicSpec

    def state(self, x):
        return parallelogram_orbit(self.spec, x)

    def chord(self, x):
        s = self.state(x)
        return ChordConfig(s.alpha1, s.alpha2)

    def sample(self, n=32):
        return [self.state(x) for x in np.linspace(0.0, TWO_PI, n, endpoint=False)]


def _alpha_of_x(spec, x):
    fp = spec.fprime(x)
    return x - np.arccos(fp / 2.0) / 2.0


def _alpha_prime(spec, x):
    fp = spec.fprime(x)
    return 1.0 + spec.fsecond(x) / (2.0 * np.sqrt(4.0 - fp * fp))


def from_f(spec, n_alpha=4096):
    """Build the table of the family encoded by f, plus the family itself.

    Fails loudly on each distinct breakdown: |f'| reaching 2 (caught at spec
    construction), non-monotone angle reparameterization, and non-convex
    envelope.
    """
    xs = np.linspace(0.0, TWO_PI, 4096, endpoint=False)
    ap = _alpha_prime(spec, xs)
    if np.min(ap) <= 1e-10:
        raise ReparamError(
            f"alpha(x) not strictly increasing (min alpha' = {np.min(ap):.3e})"
        )

    targets = np.linspace(0.0, TWO_PI, n_alpha, endpoint=False)
    samples = np.empty(n_alpha)
    for i, alpha in enumerate(targets):
        x = newton_1d(
            lambda t, alpha=alpha: _alpha_of_x(spec, t) - alpha,
            lambda t: _alpha_prime(spec, t),
            alpha + np.pi / 4.0,
            alpha,
            alpha + np.pi / 2.0,
            ftol=1e-14,
        )
        samples[i] = _family_raw(spec, x)[2]
    try:
        oval = SupportOval.from_samples(samples)
    except OvalValidationError as exc:
        raise ConvexityError(f"constructed envelope is not convex: {exc}") from exc
    return oval, ParallelogramFamily(spec)


def boundary_from_family(spec, x):
    """Boundary point of the table at parameter x via the parametric envelope
    formula gamma = p (cos a, sin a) + (dp/dx / da/dx) (-sin a, cos a)."""
    a1, _, p1, _ = _family_raw(spec, x)
    h = 1e-6
    dp_dx = (_family_raw(spec, x + h)[2] - _family_raw(spec, x - h)[2]) / (2 * h)
    da_dx = _alpha_prime(spec, x)
    t = dp_dx / da_dx
    return np.array(
        [p1 * np.cos(a1) - t * np.sin(a1), p1 * np.sin(a1) + t * np.cos(a1)]
    )


# -- contact coordinates --------------------------------------------------------


def contact_coordinates(state):
    """(x, y, z) of a perimeter-4 parallelogram: mean angle, 2 cos(gap), p2 - p1."""
    a1, a2, p1, p2 = state.alpha1, state.alpha2, state.p1, state.p2
    return ((a1 + a2) / 2.0, 2.0 * np.cos(a2 - a1), p2 - p1)


def state_from_contact(x, y, z):
    """Invert contact coordinates under the perimeter-4 normalization."""
    w = np.arccos(y / 2.0)
    s = np.sin(w)
    return ParallelogramState(
        alpha1=x - w / 2.0,
        alpha2=x + w / 2.0,
        p1=(s - z) / 2.0,
        p2=(s + z) / 2.0,
    )


# -- quadrant-arc extension ------------------------------------------------------


def balanced_radon_seed(eps, base=0.5):
    """A perturbed quadrant arc meeting all extension constraints exactly.

    Returns the callable base + eps cos(2a) - (eps/9) cos(6a).  Odd multiples
    of the double angle keep p(0) + p(pi/2) = 2 * base, and the -eps/9 weight
    balances the endpoint curvatures (p''(0) = p''(pi/2) = 0) so the extended
    table is C^2 across the seams.
    """

    def arc(a):
        return base + eps * np.cos(2.0 * a) - (eps / 9.0) * np.cos(6.0 * a)

    return arc


class _CosineArc:
    """Support arc on [0, pi/2] in the basis cos(2 j a); flat ends are built in."""

    def __init__(self, coefficients):
        self.c = np.asarray(coefficients, dtype=float)
        self.j = np.arange(len(self.c))

    @classmethod
    def fit(cls, samples):
        samples = np.asarray(samples, dtype=float)
        n = len(samples) - 1
        if n < 4:
            raise ArcConstraintError("need at least 5 arc samples")
        nodes = (np.pi / 2.0) * np.arange(n + 1) / n
        design = np.cos(2.0 * np.multiply.outer(nodes, np.arange(n + 1.0)))
        return cls(np.linalg.solve(design, samples))

    def value(self, a, deriv=0):
        a = np.asarray(a, dtype=float)
        ja = 2.0 * np.multiply.outer(a, self.j)
        if deriv == 0:
            return np.cos(ja) @ self.c
        if deriv == 1:
            return -np.sin(ja) @ (2.0 * self.j * self.c)
        return -np.cos(ja) @ ((2.0 * self.j) ** 2 * self.c)

    def end_sum(self):
        # p(0) + p(pi/2) = sum over even j of 2 c_j
        return float(2.0 * np.sum(self.c[::2]))

    def project_end_sum(self, target=1.0):
        self.c[0] += (target - self.end_sum()) / 2.0


def radon_like(arc, n_out=8192, samples_for_callable=129):
    """Extend a first-quadrant support arc to a full table by the reflection rule.

    `arc` is either an array of support samples on a uniform grid over
    [0, pi/2] including both endpoints, or a callable.  The arc must satisfy
    p'(0) = p'(pi/2) = 0 (enforced structurally by the cosine-basis fit) and
    p(0) + p(pi/2) = 1 (checked, then projected exactly).  The extension to
    [pi/2, pi] pairs each angle alpha with beta = alpha + arccos(-p'(alpha))
    and sets p(beta) = -p(alpha) + sin(beta - alpha); the lower half plane
    follows by central symmetry.
    """
    if callable(arc):
        nodes = np.linspace(0.0, np.pi / 2.0, samples_for_callable)
        arc = arc(nodes)
    fit = _CosineArc.fit(arc)
    defect = abs(fit.end_sum() - 1.0)
    if defect > 1e-6:
        raise ArcConstraintError(
            f"p(0) + p(pi/2) = {fit.end_sum():.8f}, must be 1 (defect {defect:.2e})"
        )
    fit.project_end_sum(1.0)

    probe = np.linspace(0.0, np.pi / 2.0, 2048)
    pv = fit.value(probe)
    dpv = fit.value(probe, 1)
    ddpv = fit.value(probe, 2)
    if np.min(ddpv + pv) <= 1e-10:
        raise ArcConstraintError(
            f"seed arc is not strictly convex (min p''+p = {np.min(ddpv + pv):.3e})"
        )
    if np.max(np.abs(dpv)) >= 1.0 - 1e-12:
        raise ArcConstraintError("|p'| reaches 1 on the arc; extension angle degenerates")

    # curvature compatibility at the quadrant ends: the extension's second
    # derivative entering the seam at pi/2 is -p''(0)/(1 + p''(0)), so a seed
    # whose own p''(pi/2) differs leaves a curvature jump that the sampled
    # representation cannot track to closure accuracy
    k0 = fit.value(0.0, 2)
    k1 = fit.value(np.pi / 2.0, 2)
    curvature_jump = abs(k1 + k0 / (1.0 + k0))
    if curvature_jump > 1e-4:
        raise SeamError(
            "seed arc violates the seam curvature balance "
            f"p''(pi/2) = -p''(0)/(1 + p''(0)) (defect {curvature_jump:.3e}); "
            "the extension would only be C^1 across the seams"
        )
    beta_prime = 1.0 + ddpv / np.sqrt(1.0 - dpv * dpv)
    if np.min(beta_prime) <= 1e-10:
        raise ReparamError(
            f"extension map beta(alpha) not monotone (min beta' = {np.min(beta_prime):.3e})"
        )

    if n_out % 4:
        raise ValueError("n_out must be divisible by 4")
    grid = np.linspace(0.0, TWO_PI, n_out, endpoint=False)
    full = np.empty(n_out)
    q = n_out // 4

    full[: q + 1] = fit.value(grid[: q + 1])

    def beta_of(a):
        return a + np.arccos(-fit.value(a, 1))

    # invert beta on (pi/2, pi] by vectorized bisection (beta is monotone)
    second = grid[(grid > np.pi / 2.0) & (grid <= np.pi + 1e-12)]
    lo = np.zeros_like(second)
    hi = np.full_like(second, np.pi / 2.0)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        below = beta_of(mid) < second
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    alpha = 0.5 * (lo + hi)
    ext = -fit.value(alpha) + np.sin(second - alpha)
    full[q + 1 : q + 1 + len(second)] = ext

    half = n_out // 2
    full[half:] = full[:half]

    # seam audit: values and slopes of the two branches at pi/2 and pi
    seam_val = abs((1.0 - fit.value(0.0)) - fit.value(np.pi / 2.0))
    seam_val = max(seam_val, abs((1.0 - fit.value(np.pi / 2.0)) - fit.value(0.0)))
    # extension slope is cos(beta - alpha): vanishes at both seams like the arc's
    seam_slope = max(
        abs(np.cos(beta_of(0.0) - 0.0) - fit.value(0.0, 1)),
        abs(np.cos(beta_of(np.pi / 2.0) - np.pi / 2.0) - fit.value(np.pi / 2.0, 1)),
    )
    seam = max(seam_val, seam_slope)
    if seam > 1e-8:
        raise SeamError(f"extension does not close C^1 (seam defect {seam:.3e})")

    try:
        return SupportOval.from_samples(full)
    except OvalValidationError as exc:
        raise ConvexityError(f"extended table is not convex: {exc}") from exc
