"""Convex polygons in support coordinates and the rotation distribution on them.

A convex n-gon is a cyclic list of cooriented side lines L_i with support
coordinates (alpha_i, p_i).  For each side there is a distinguished circle
tangent to L_{i-1}, L_i, L_{i+1} (outside the polygon across L_i, inside
across its neighbors); rotating L_i about the tangency point C_i of that
circle is the infinitesimal motion that keeps the perimeter stationary.  The
fields

    xi_i = d/d(alpha_i) + Phi_i d/d(p_i),
    Phi_i = determinant[(cos alpha_i, sin alpha_i), C_i],

span an n-dimensional distribution tangent to the perimeter level sets; its
first Lie brackets generically fill out the whole tangent space of the fixed
perimeter slice (rank 2n - 1), which is why surfaces of periodic orbits
cannot exist.   Phi_i has a closed rational-trigonometric form in the
neighboring support data, implemented here both directly and via C_i; the
brackets use machine-precision complex-step partials of the closed form,
while an independent flow-commutator verifier integrates the fields with RK4.

The module also carries the parallelogram specialization (contact structure
on perimeter-4 parallelograms) and the triangle quantities W_i, U_i whose
signs forbid two-parameter families of 3-periodic orbits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

_CSTEP = 1e-200


@dataclass(frozen=True)
class PolygonConfig:
    """Convex polygon as support coordinates of its sides, counterclockwise."""

    alphas: np.ndarray
    ps: np.ndarray

    def __post_init__(self):
        alphas = np.asarray(self.alphas, dtype=float)
        ps = np.asarray(self.ps, dtype=float)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "ps", ps)
        if len(alphas) < 3 or len(alphas) != len(ps):
            raise ValueError("need n >= 3 sides with matching support values")
        gaps = self.gaps
        if np.any(gaps <= 0.0) or np.any(gaps >= np.pi):
            raise ValueError(f"gap sequence {gaps.tolist()} must lie in (0, pi)")
        if abs(np.sum(gaps) - TWO_PI) > 1e-9:
            raise ValueError("side normals must advance by exactly one turn")

    @property
    def n(self):
        return len(self.alphas)

    @property
    def gaps(self):
        ext = np.append(self.alphas, self.alphas[0] + TWO_PI)
        return np.diff(ext)

    @classmethod
    def regular(cls, n, r=1.0, phase=0.0):
        return cls(phase + TWO_PI * np.arange(n) / n, np.full(n, float(r)))

    def to_json(self):
        return {"alpha": self.alphas.tolist(), "p": self.ps.tolist()}

    @classmethod
    def from_json(cls, obj):
        return cls(np.asarray(obj["alpha"]), np.asarray(obj["p"]))


# -- raw geometry ------------------------------------------------------------


def vertices(poly):
    """Vertex i = intersection of sides i-1 and i, counterclockwise order."""
    a, p = poly.alphas, poly.ps
    a_prev, p_prev = np.roll(a, 1), np.roll(p, 1)
    a_prev = a_prev.copy()
    a_prev[0] -= TWO_PI
    s = np.sin(a - a_prev)
    x = (p_prev * np.sin(a) - p * np.sin(a_prev)) / s
    y = (p * np.cos(a_prev) - p_prev * np.cos(a)) / s
    return np.stack([x, y], axis=-1)


def side_lengths(poly):
    """Side lengths from the support data (no vertex coordinates involved)."""
    a, p = poly.alphas, poly.ps
    g = poly.gaps
    g_prev = np.roll(g, 1)
    p_prev, p_next = np.roll(p, 1), np.roll(p, -1)
    return (
        p_prev / np.sin(g_prev)
        + p_next / np.sin(g)
        - p * np.sin(g_prev + g) / (np.sin(g_prev) * np.sin(g))
    )


def perimeter(poly):
    """Perimeter as sum of (p_i + p_{i+1}) tan(gap_i / 2)."""
    p = poly.ps
    return float(np.sum((p + np.roll(p, -1)) * np.tan(poly.gaps / 2.0)))


def perimeter_from_vertices(poly):
    """Euclidean perimeter from the vertex polygon (cross-check route)."""
    v = vertices(poly)
    return float(np.sum(np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)))


def side_length_and_perimeter(poly):
    """(side lengths, perimeter) from the support-coordinate formulas."""
    return side_lengths(poly), perimeter(poly)


def tangency_point(poly, i):
    """Point C_i on side i: cotangent-weighted combination of its endpoints."""
    v = vertices(poly)
    n = poly.n
    g = poly.gaps
    beta_minus = g[(i - 1) % n] / 2.0
    beta_plus = g[i] / 2.0
    v_minus = v[i]            # vertex between sides i-1, i
    v_plus = v[(i + 1) % n]   # vertex between sides i, i+1
    cm, cp = 1.0 / np.tan(beta_minus), 1.0 / np.tan(beta_plus)
    return (cm * v_plus + cp * v_minus) / (cm + cp)


# -- the fields Phi_i, xi_i ---------------------------------------------------


def _phi_raw(beta_minus, beta_plus, p_prev, p_self, p_next):
    """Closed form of Phi in half-gap variables; complex-step safe."""
    num = np.cos(beta_minus) ** 2 * (p_next + p_self) - np.cos(beta_plus) ** 2 * (
        p_prev + p_self
    )
    den = (
        2.0
        * np.sin(beta_minus + beta_plus)
        * np.cos(beta_minus)
        * np.cos(beta_plus)
    )
    return num / den


def _neighbor_data(poly, i):
    n = poly.n
    g = poly.gaps
    return (
        g[(i - 1) % n] / 2.0,
        g[i] / 2.0,
        poly.ps[(i - 1) % n],
        poly.ps[i],
        poly.ps[(i + 1) % n],
    )


def phi(poly, i):
    """Phi_i from the closed rational-trigonometric form."""
    return float(_phi_raw(*_neighbor_data(poly, i)))


def phi_all(poly):
    g = poly.gaps
    p = poly.ps
    return np.asarray(
        _phi_raw(np.roll(g, 1) / 2.0, g / 2.0, np.roll(p, 1), p, np.roll(p, -1))
    )


def phi_via_tangency(poly, i):
    """Phi_i as the determinant [(cos a_i, sin a_i), C_i]; the geometric route."""
    c = tangency_point(poly, i)
    a = poly.alphas[i]
    return float(np.cos(a) * c[1] - np.sin(a) * c[0])


def phi_partials(poly, i):
    """Partials of Phi_i wrt its six neighboring coordinates (complex step).

    Returns a dict keyed by ('alpha', offset) and ('p', offset) for offsets
    -1, 0, +1; exact to machine precision.
    """
    bm, bp, pm, p0, pp = _neighbor_data(poly, i)
    h = _CSTEP

    def d(*args):
        return float(np.imag(_phi_raw(*args)) / h)

    d_bm = d(bm + 1j * h, bp, pm, p0, pp)
    d_bp = d(bm, bp + 1j * h, pm, p0, pp)
    return {
        ("alpha", -1): -0.5 * d_bm,
        ("alpha", 0): 0.5 * d_bm - 0.5 * d_bp,
        ("alpha", 1): 0.5 * d_bp,
        ("p", -1): d(bm, bp, pm + 1j * h, p0, pp),
        ("p", 0): d(bm, bp, pm, p0 + 1j * h, pp),
        ("p", 1): d(bm, bp, pm, p0, pp + 1j * h),
    }


def xi_field(poly, i):
    """The rotation field of side i as a vector in (alpha_0..  , p_0..) coordinates."""
    out = np.zeros(2 * poly.n)
    out[i] = 1.0
    out[poly.n + i] = phi(poly, i)
    return out


def rotation_field(point, alpha):
    """Infinitesimal rotation of a line about a fixed point, as (d alpha, d p)."""
    a, b = point
    return 1.0, float(b * np.cos(alpha) - a * np.sin(alpha))


def xi_bracket(poly, i, j):
    """Closed-form Lie bracket [xi_i, xi_j]; zero unless i, j are cyclic neighbors."""
    n = poly.n
    out = np.zeros(2 * n)
    if (j - i) % n == 1:
        pi_, pj = phi(poly, i), phi(poly, j)
        di, dj = phi_partials(poly, i), phi_partials(poly, j)
        w = dj[("alpha", -1)] + pi_ * dj[("p", -1)]
        u = di[("alpha", 1)] + pj * di[("p", 1)]
        out[n + j] = w
        out[n + i] = -u
        return out
    if (i - j) % n == 1:
        return -xi_bracket(poly, j, i)
    return out


# -- flow-commutator verifier ---------------------------------------------------


def _rk4_flow(alphas, ps, i, t, substeps=4):
    """Integrate the xi_i flow for time t with RK4 (raw arrays, no validation)."""
    a = alphas.copy()
    p = ps.copy()
    n = len(a)
    h = t / substeps

    def vel(a, p):
        gm = (a[i] - a[(i - 1) % n]) % TWO_PI
        gp = (a[(i + 1) % n] - a[i]) % TWO_PI
        return _phi_raw(gm / 2.0, gp / 2.0, p[(i - 1) % n], p[i], p[(i + 1) % n])

    for _ in range(substeps):
        k1 = vel(a, p)
        a2, p2 = a.copy(), p.copy()
        a2[i] += h / 2
        p2[i] += h / 2 * k1
        k2 = vel(a2, p2)
        p3 = p.copy()
        p3[i] += h / 2 * k2
        k3 = vel(a2, p3)
        a4, p4 = a.copy(), p.copy()
        a4[i] += h
        p4[i] += h * k3
        k4 = vel(a4, p4)
        a[i] += h
        p[i] += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return a, p


def flow_commutator(poly, i, j, h=1e-3):
    """[xi_i, xi_j] estimated from the group commutator of the RK4 flows.

    Symmetric in +-h, which cancels the cubic BCH term; agreement with the
    closed form is expected at the 1e-5 level for h = 1e-3.
    """

    def group_comm(t):
        a, p = poly.alphas.copy(), poly.ps.copy()
        for idx, s in ((i, t), (j, t), (i, -t), (j, -t)):
            a, p = _rk4_flow(a, p, idx, s)
        return np.concatenate([a - poly.alphas, p - poly.ps]) / t**2

    return 0.5 * (group_comm(h) + group_comm(-h))


# -- growth of the distribution ---------------------------------------------------


@dataclass
class GrowthReport:
    """Numeric rank of the distribution plus its first brackets."""

    n: int
    rank: int
    expected: int
    theta_rank: int
    singular_values: np.ndarray

    @property
    def matches_expected(self):
        return self.rank == self.expected

    def to_csv(self):
        lines = ["index,singular_value"]
        lines += [f"{i},{s:.16g}" for i, s in enumerate(self.singular_values)]
        lines.append(f"# n={self.n} rank={self.rank} expected={self.expected} "
                     f"theta_rank={self.theta_rank}")
        return "\n".join(lines) + "\n"


def growth_report(poly, rel_tol=1e-8):
    """Rank of span{xi_i} + span{[xi_i, xi_{i+1}]} (all tangent to {F = const})."""
    n = poly.n
    rows = [xi_field(poly, i) for i in range(n)]
    brackets = [xi_bracket(poly, i, (i + 1) % n) for i in range(n)]
    mat = np.array(rows + brackets)
    sv = np.linalg.svd(mat, compute_uv=False)
    rank = int(np.sum(sv > rel_tol * sv[0]))
    # conormal pairing theta_j(B_i) = coefficient of dp_j (brackets are vertical)
    theta = np.array([[b[n + j] for j in range(n)] for b in brackets])
    tsv = np.linalg.svd(theta, compute_uv=False)
    theta_rank = int(np.sum(tsv > rel_tol * max(tsv[0], 1e-300)))
    return GrowthReport(
        n=n, rank=rank, expected=2 * n - 1, theta_rank=theta_rank, singular_values=sv
    )


# -- perimeter invariance ----------------------------------------------------------


def perimeter_partials(poly):
    """(dF/d alpha_i, dF/d p_i) arrays of the perimeter formula."""
    p = poly.ps
    g = poly.gaps
    g_prev = np.roll(g, 1)
    p_prev, p_next = np.roll(p, 1), np.roll(p, -1)
    dF_da = 0.5 * (
        (p_prev + p) / np.cos(g_prev / 2.0) ** 2 - (p + p_next) / np.cos(g / 2.0) ** 2
    )
    dF_dp = np.tan(g / 2.0) + np.tan(g_prev / 2.0)
    return dF_da, dF_dp


def perimeter_derivative_along_xi(poly, i):
    """Directional derivative of the perimeter along xi_i (vanishes identically)."""
    dF_da, dF_dp = perimeter_partials(poly)
    return float(dF_da[i] + phi(poly, i) * dF_dp[i])


# -- recentring helpers --------------------------------------------------------------


def recenter(poly, origin):
    """Same polygon with support values taken from a new origin."""
    ox, oy = origin
    return PolygonConfig(
        poly.alphas, poly.ps - (ox * np.cos(poly.alphas) + oy * np.sin(poly.alphas))
    )


def incenter(poly):
    """Center and radius of the maximal inscribed circle touching all sides.

    Exact for triangles (3x3 linear solve); least squares otherwise, which is
    exact precisely when an inscribed circle tangent to every side exists
    (e.g. regular polygons).
    """
    A = np.column_stack(
        [np.cos(poly.alphas), np.sin(poly.alphas), np.ones(poly.n)]
    )
    sol, *_ = np.linalg.lstsq(A, poly.ps, rcond=None)
    return np.array([sol[0], sol[1]]), float(sol[2])


# -- parallelogram contact structure ---------------------------------------------------


def _as_parallelogram(state):
    if hasattr(state, "alpha1"):
        return state.alpha1, state.alpha2, state.p1, state.p2
    a1, a2, p1, p2 = state
    return a1, a2, p1, p2


@dataclass
class ParallelogramFields:
    """Rotation fields, their bracket, and the two 1-forms on parallelogram space.

    All vectors/covectors are in the coordinate order (alpha1, alpha2, p1, p2).
    """

    xi1: np.ndarray
    xi2: np.ndarray
    bracket: np.ndarray
    contact_form: np.ndarray
    perimeter_form: np.ndarray

    def pair(self, form, vec):
        return float(np.dot(form, vec))

    @property
    def contact_nondegenerate(self):
        return bool(np.linalg.norm(self.bracket) > 1e-12)


def parallelogram_fields(state):
    """Specialize the distribution to origin-centered perimeter-4 parallelograms.

    xi1 = d/d alpha1 - cos(w) d/d p1, xi2 = d/d alpha2 + cos(w) d/d p2, and
    [xi1, xi2] = sin(w) (d/d p1 - d/d p2); the contact form
    cos(w)(d alpha1 + d alpha2) + d p1 - d p2 and the perimeter differential
    cos(w)(d alpha1 - d alpha2) + d p1 + d p2 both annihilate xi1, xi2.
    """
    a1, a2, p1, p2 = _as_parallelogram(state)
    w = a2 - a1
    if not 0.0 < w < np.pi:
        raise ValueError("parallelogram gap must lie in (0, pi)")
    cw, sw = np.cos(w), np.sin(w)
    return ParallelogramFields(
        xi1=np.array([1.0, 0.0, -cw, 0.0]),
        xi2=np.array([0.0, 1.0, 0.0, cw]),
        bracket=np.array([0.0, 0.0, sw, -sw]),
        contact_form=np.array([cw, cw, 1.0, -1.0]),
        perimeter_form=np.array([cw, -cw, 1.0, 1.0]),
    )


# -- triangle quantities of the bracket obstruction -------------------------------------


@dataclass
class TriangleWU:
    """Bracket coefficients of the triangle distribution in half-angle form."""

    W: np.ndarray
    U: np.ndarray
    a: float
    b: float
    expression: float

    @property
    def all_positive(self):
        return bool(np.all(self.W > 0.0) and np.all(self.U > 0.0))


def triangle_WU(u, v, w):
    """W_i, U_i, the combination coefficients, and the six-term obstruction.

    (2u, 2v, 2w) are the exterior angles of a convex triangle, so u, v, w lie
    in (0, pi/2) and sum to pi.  All W_i, U_i are positive and the final
    expression is strictly negative, which is the obstruction to a horizontal
    disc of 3-periodic orbits.
    """
    trip = np.array([u, v, w], dtype=float)
    if abs(float(np.sum(trip)) - np.pi) > 1e-12:
        raise ValueError("exterior half-angles must sum to pi")
    if np.any(trip <= 0.0) or np.any(trip >= np.pi / 2.0):
        raise ValueError("exterior half-angles must lie in (0, pi/2)")
    tu, tv, tw = np.tan(trip)
    W = np.array([tu / np.sin(2 * v), tv / np.sin(2 * w), tw / np.sin(2 * u)])
    U = np.array([tw / np.sin(2 * v), tu / np.sin(2 * w), tv / np.sin(2 * u)])
    a = -W[1] / U[1]
    b = -U[0] / W[0]
    expression = (
        -1.0 / (np.cos(w) ** 2 * tu)
        - tw / np.sin(u) ** 2
        - tv / (np.cos(w) ** 2 * tu**2)
        - tv / np.sin(u) ** 2
        - 1.0 / (np.cos(v) ** 2 * tu)
        - tw / (np.cos(v) ** 2 * tu**2)
    )
    return TriangleWU(W=W, U=U, a=float(a), b=float(b), expression=float(expression))


def triangle_from_half_angles(u, v, w, r=1.0, phase=0.0):
    """Triangle with exterior half-angles (u, v, w), incircle radius r at the origin."""
    return PolygonConfig(
        phase + np.array([0.0, 2.0 * u, 2.0 * u + 2.0 * v]), np.full(3, float(r))
    )


def wu_from_fields(u, v, w):
    """(W, U) via the Phi partials on the unit-incircle triangle (independent route)."""
    poly = triangle_from_half_angles(u, v, w)
    phis = phi_all(poly)
    Wv = np.empty(3)
    Uv = np.empty(3)
    for i in range(3):
        d = phi_partials(poly, i)
        Wv[i] = d[("alpha", -1)] + phis[(i - 1) % 3] * d[("p", -1)]
        Uv[i] = d[("alpha", 1)] + phis[(i + 1) % 3] * d[("p", 1)]
    return Wv, Uv
