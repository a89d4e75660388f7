"""Explicit frequency-strip constructions that bound bilinear product estimates.

Each family builds a pair (u, v) on the Fourier side as indicators of
thickness-1 strips along characteristic lines,

    Fu(lam, eta) = 1[|lam + eta| <= 1/2] 1[eta in A],
    Fv(mu,  zeta) = 1[|mu +- zeta| <= 1/2] 1[zeta in B],

with intervals A, B, C depending on a large scale parameter L and chosen so
that eta in A, xi in C implies eta - xi in B.  The measured quantity is

    ratio = ||u conj(v)||_{H^{-c,-gamma}} /
            (||u||_{X+^{a,alpha}} ||v||_{X-^{b,beta}}),

which for these constructions scales like L^(-delta) with a per-family
exponent delta(a, b, c, alpha, beta, gamma) that is linear in the inputs.
A negative delta therefore certifies unboundedness of the corresponding
product estimate; nonnegativity of delta over all families yields the
necessary conditions checked in ``regions.bilinear_necessary_conditions``.

Families (intervals at scale L, v's strip line, decay exponent):

    cond1_ab     A=[L-1/2,L+1/2], B=[L-1,L+1],   C=[-1/2,1/2],  v: plus,
                 delta = a + b + beta
    cond2        A=[L/4,L/2],     B=[L/2,3L/2],  C=[-L,-L/2],   v: plus,
                 delta = a + b + c + beta - 1/2
    cond3        A=C=[L-1/2,L+1/2], B=[-1,1],                   v: plus,
                 delta = a + c
    cond1_gamma  A=[L-1,L+1],     B=[L-2,L+2],   C=[-1,1],      v: minus,
                 delta = a + b + gamma
    cond4        A=[L-1,L+1],     B=[2L-2,2L+2], C=[-L-1,-L+1], v: minus,
                 delta = a + b + c + gamma

Grids keep the frequency spacings fixed across the L ladder (dxi = 1/4,
dtau = 1/2 by default) so the strip discretization is identical at every L
and cancels out of fitted log-log slopes; extents grow with L so that the
supports of u, v and of the product transform all fit in the box without
periodic wrap, which makes the product computation exact.

Also here: the exact transversal free-wave product identity
(``wave_product_constant``) and a Monte-Carlo probe of the
X+ x X- -> L2 embedding (``embedding_probe``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .norms import (
    Grid2D,
    GridFunction2D,
    NormIndex,
    inverse_transform,
    l2_norm_physical,
    next_fast_even,
    product_norm,
    spatial_inverse,
    transform,
    weighted_norm,
)

Interval = tuple[float, float]

DEFAULT_THICKNESS = 1.0
DEFAULT_DTAU = 0.5
DEFAULT_DXI = 0.25
DEFAULT_L_LADDER = (64.0, 128.0, 256.0, 512.0)


class ExponentTuple(NamedTuple):
    """Exponents (a, b, c, alpha, beta, gamma) indexing a bilinear estimate."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0


@dataclass(frozen=True)
class StripSpec:
    """A thickness-``thickness`` strip along a characteristic line.

    ``line = "plus"`` constrains ``|tau + xi| <= thickness/2``, ``"minus"``
    constrains ``|tau - xi| <= thickness/2``; ``interval`` restricts xi.
    """

    interval: Interval
    line: str
    thickness: float = DEFAULT_THICKNESS

    def __post_init__(self):
        if self.interval[0] >= self.interval[1]:
            raise ValueError("strip interval must satisfy lo < hi")
        if self.line not in ("plus", "minus"):
            raise ValueError("strip line must be 'plus' or 'minus'")
        if self.thickness <= 0:
            raise ValueError("strip thickness must be positive")


@dataclass(frozen=True)
class CounterexampleFamily:
    """One counterexample construction: intervals, strip kinds, decay exponent.

    ``restriction_tau_shift`` describes the tau-restriction defining the
    lower bound used in the scaling analysis: ``None`` means the product is
    concentrated near tau + xi = O(1); a number k means near tau + k L =
    O(1).  The restriction guides support sanity checks only; ratios are
    computed with the full product norm.
    """

    id: str
    v_line: str
    restriction_tau_shift: float | None
    intervals: Callable[[float], tuple[Interval, Interval, Interval]]
    delta: Callable[[ExponentTuple], float]


FAMILIES: dict[str, CounterexampleFamily] = {
    "cond1_ab": CounterexampleFamily(
        id="cond1_ab",
        v_line="plus",
        restriction_tau_shift=None,
        intervals=lambda L: ((L - 0.5, L + 0.5), (L - 1.0, L + 1.0), (-0.5, 0.5)),
        delta=lambda e: e.a + e.b + e.beta,
    ),
    "cond2": CounterexampleFamily(
        id="cond2",
        v_line="plus",
        restriction_tau_shift=None,
        intervals=lambda L: ((L / 4, L / 2), (L / 2, 3 * L / 2), (-L, -L / 2)),
        delta=lambda e: e.a + e.b + e.c + e.beta - 0.5,
    ),
    "cond3": CounterexampleFamily(
        id="cond3",
        v_line="plus",
        restriction_tau_shift=None,
        intervals=lambda L: ((L - 0.5, L + 0.5), (-1.0, 1.0), (L - 0.5, L + 0.5)),
        delta=lambda e: e.a + e.c,
    ),
    "cond1_gamma": CounterexampleFamily(
        id="cond1_gamma",
        v_line="minus",
        restriction_tau_shift=2.0,
        intervals=lambda L: ((L - 1.0, L + 1.0), (L - 2.0, L + 2.0), (-1.0, 1.0)),
        delta=lambda e: e.a + e.b + e.gamma,
    ),
    "cond4": CounterexampleFamily(
        id="cond4",
        v_line="minus",
        restriction_tau_shift=3.0,
        intervals=lambda L: ((L - 1.0, L + 1.0), (2 * L - 2.0, 2 * L + 2.0), (-L - 1.0, -L + 1.0)),
        delta=lambda e: e.a + e.b + e.c + e.gamma,
    ),
}


def predicted_delta(family_id: str, e: ExponentTuple) -> float:
    return FAMILIES[family_id].delta(e)


def abc_margin(family_id: str, L: float) -> float:
    """Interval-arithmetic slack of (eta in A, xi in C => eta - xi in B).

    Returns min(lo(A) - hi(C) - lo(B), hi(B) - hi(A) + lo(C)); nonnegative
    means the implication holds for every point of A x C.
    """
    A, B, C = FAMILIES[family_id].intervals(L)
    return min((A[0] - C[1]) - B[0], B[1] - (A[1] - C[0]))


def _strip_boxes(
    family: CounterexampleFamily, L: float, thickness: float
) -> dict[str, tuple[Interval, Interval]]:
    """Bounding boxes (tau-range, xi-range) of u, v and the product transform."""
    A, B, _ = family.intervals(L)
    h = thickness / 2
    u_tau = (-A[1] - h, -A[0] + h)
    if family.v_line == "plus":
        v_tau = (-B[1] - h, -B[0] + h)
    else:
        v_tau = (B[0] - h, B[1] + h)
    prod_tau = (u_tau[0] - v_tau[1], u_tau[1] - v_tau[0])
    prod_xi = (A[0] - B[1], A[1] - B[0])
    return {
        "u": (u_tau, A),
        "v": (v_tau, B),
        "product": (prod_tau, prod_xi),
    }


def default_family_grid(
    family_id: str,
    L: float,
    dtau: float = DEFAULT_DTAU,
    dxi: float = DEFAULT_DXI,
    margin: float = 4.0,
    thickness: float = DEFAULT_THICKNESS,
) -> Grid2D:
    """Smallest FFT-friendly grid holding the family's strips and their product.

    Spacings stay fixed while extents scale with L, so strip sampling is
    identical across a ladder of L values.
    """
    boxes = _strip_boxes(FAMILIES[family_id], L, thickness)
    h_tau = max(abs(b) for tau_box, _ in boxes.values() for b in tau_box) + margin
    h_xi = max(abs(b) for _, xi_box in boxes.values() for b in xi_box) + margin
    n_t = next_fast_even(math.ceil(2 * h_tau / dtau))
    n_x = next_fast_even(math.ceil(2 * h_xi / dxi))
    return Grid2D(n_t=n_t, n_x=n_x, t_extent=2 * np.pi / dtau, x_extent=2 * np.pi / dxi)


def _strip_indicator(grid: Grid2D, strip: StripSpec) -> GridFunction2D:
    xi = grid.xi
    tau = grid.tau
    lo, hi = strip.interval
    values = np.zeros((grid.n_t, grid.n_x), dtype=complex)
    cols = np.nonzero((xi >= lo) & (xi <= hi))[0]
    if cols.size:
        sign = 1.0 if strip.line == "plus" else -1.0
        comb = tau[:, None] + sign * xi[cols][None, :]
        values[:, cols] = (np.abs(comb) <= strip.thickness / 2).astype(complex)
    return GridFunction2D(grid, values, "fourier")


def build_family(
    family_id: str,
    L: float,
    grid: Grid2D | None = None,
    thickness: float = DEFAULT_THICKNESS,
) -> tuple[GridFunction2D, GridFunction2D, CounterexampleFamily]:
    """Indicator-valued Fourier-side pair (u_hat, v_hat) for one family at scale L.

    The grid (default ``default_family_grid``) must resolve the strips
    (dxi <= thickness/4) and contain the supports of u, v and of the product
    transform; otherwise the pair is rejected rather than truncated, since a
    clipped support would silently corrupt every norm downstream.
    """
    if family_id not in FAMILIES:
        raise ValueError(f"unknown family {family_id!r}")
    if L <= 4:
        raise ValueError("family scale L must exceed 4")
    family = FAMILIES[family_id]
    if grid is None:
        grid = default_family_grid(family_id, L, thickness=thickness)
    if grid.dxi > thickness / 4 + 1e-12:
        raise ValueError(
            f"dxi = {grid.dxi:.4g} too coarse for thickness {thickness} strips "
            f"(need dxi <= {thickness / 4})"
        )
    boxes = _strip_boxes(family, L, thickness)
    tau_lo, tau_hi = grid.tau[0], grid.tau[-1]
    xi_lo, xi_hi = grid.xi[0], grid.xi[-1]
    for name, (tau_box, xi_box) in boxes.items():
        if tau_box[0] < tau_lo or tau_box[1] > tau_hi or xi_box[0] < xi_lo or xi_box[1] > xi_hi:
            raise ValueError(
                f"grid too small to contain the {name} support of {family_id} at "
                f"L = {L}: needs tau in [{tau_box[0]:.6g}, {tau_box[1]:.6g}], "
                f"xi in [{xi_box[0]:.6g}, {xi_box[1]:.6g}]"
            )

    A, B, _ = family.intervals(L)
    u_hat = _strip_indicator(grid, StripSpec(A, "plus", thickness))
    v_hat = _strip_indicator(grid, StripSpec(B, family.v_line, thickness))
    return u_hat, v_hat, family


@dataclass(frozen=True)
class RatioResult:
    family: str
    L: float
    exponents: ExponentTuple
    numerator: float
    denom_u: float
    denom_v: float

    @property
    def ratio(self) -> float:
        return self.numerator / (self.denom_u * self.denom_v)


def _denominators(
    u_hat: GridFunction2D, v_hat: GridFunction2D, e: ExponentTuple
) -> tuple[float, float]:
    du = weighted_norm(u_hat, NormIndex(e.a, e.alpha, "X_plus"))
    dv = weighted_norm(v_hat, NormIndex(e.b, e.beta, "X_minus"))
    if du == 0.0 or dv == 0.0:
        raise ValueError("degenerate experiment: a strip norm vanished on this grid")
    return du, dv


def family_ratio(
    family_id: str, L: float, e: ExponentTuple, grid: Grid2D | None = None
) -> RatioResult:
    """Single-shot ratio ||u conj(v)||_{H^{-c,-gamma}} / (X+ norm * X- norm)."""
    u_hat, v_hat, _ = build_family(family_id, L, grid)
    du, dv = _denominators(u_hat, v_hat, e)
    u = inverse_transform(u_hat)
    v = inverse_transform(v_hat)
    num = product_norm(u, v, NormIndex(-e.c, -e.gamma, "H"), conjugate_second=True)
    return RatioResult(family_id, L, e, num, du, dv)


def ratio_ladder(
    family_id: str,
    L_values,
    tuples,
    grid_factory: Callable[[str, float], Grid2D] | None = None,
) -> list[RatioResult]:
    """Ratios for several exponent tuples over a ladder of L values.

    The expensive part (two inverse transforms, the pointwise product and
    its forward transform) is independent of the exponents, so it is done
    once per L and each tuple only costs three weighted reductions.
    """
    tuples = [ExponentTuple(*t) for t in tuples]
    factory = grid_factory or (lambda fid, L: default_family_grid(fid, L))
    rows: list[RatioResult] = []
    for L in L_values:
        grid = factory(family_id, L)
        u_hat, v_hat, _ = build_family(family_id, L, grid)
        denoms = [_denominators(u_hat, v_hat, e) for e in tuples]
        u = inverse_transform(u_hat)
        del u_hat
        v = inverse_transform(v_hat)
        del v_hat
        w = u.values * np.conj(v.values)
        del u, v
        w_hat = transform(GridFunction2D(grid, w, "physical"))
        del w
        for e, (du, dv) in zip(tuples, denoms):
            num = weighted_norm(w_hat, NormIndex(-e.c, -e.gamma, "H"))
            rows.append(RatioResult(family_id, L, e, num, du, dv))
        del w_hat
    return rows


def loglog_fit(L_values: np.ndarray, ratios: np.ndarray) -> tuple[float, float]:
    x = np.log(L_values)
    y = np.log(ratios)
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    # A ladder that is constant to roundoff carries no variance to explain.
    r_squared = 1.0 if ss_tot < 1e-18 else 1.0 - ss_res / ss_tot
    return float(slope), r_squared


def _validate_ladder(L_values) -> np.ndarray:
    L = np.asarray(list(L_values), dtype=float)
    if L.size < 4:
        raise ValueError("need at least 4 ladder points")
    if np.any(L < 32):
        raise ValueError("ladder values must all be >= 32")
    q = L[1:] / L[:-1]
    if np.any(np.abs(q - q[0]) > 1e-9 * q[0]):
        raise ValueError("ladder must be geometric")
    return L


def fit_exponent(
    family_id: str,
    e: ExponentTuple,
    L_values=DEFAULT_L_LADDER,
    grid_factory: Callable[[str, float], Grid2D] | None = None,
) -> tuple[float, float]:
    """Least-squares slope of log(ratio) against log(L), with r^2.

    For every family and exponent tuple with entries bounded by 2 the slope
    agrees with -delta(family, e) to within 0.15.
    """
    L = _validate_ladder(L_values)
    rows = ratio_ladder(family_id, L, [e], grid_factory)
    ratios = np.array([row.ratio for row in rows])
    if np.any(ratios <= 0):
        raise ValueError("non-positive ratio in ladder; grid construction is broken")
    return loglog_fit(L, ratios)


def restricted_support_stats(
    family_id: str, L: float, n_samples: int = 2000, seed: int = 0
) -> dict[str, float]:
    """Sampled magnitudes of lam - tau - (eta - xi) over the restricted set.

    (lam, eta) is drawn from u's strip and (tau, xi) from the family's
    tau-restriction with xi in C.  For the transversal families this
    combination grows like L (cond1_ab, cond2) or stays O(1) (cond3); for
    the parallel families (cond1_gamma, cond4) the modified v-strip keeps it
    O(1) by construction.
    """
    family = FAMILIES[family_id]
    A, _, C = family.intervals(L)
    rng = np.random.default_rng(seed)
    eta = rng.uniform(A[0], A[1], n_samples)
    lam = -eta + rng.uniform(-0.5, 0.5, n_samples)
    xi = rng.uniform(C[0], C[1], n_samples)
    if family.restriction_tau_shift is None:
        tau = -xi + rng.uniform(-0.5, 0.5, n_samples)
    else:
        tau = -family.restriction_tau_shift * L + rng.uniform(-0.5, 0.5, n_samples)
    sigma_minus = np.abs(lam - tau - (eta - xi))
    return {
        "min": float(sigma_minus.min()),
        "max": float(sigma_minus.max()),
        "mean": float(sigma_minus.mean()),
    }


def default_wave_grid(n: int = 1024, x_extent: float = 32.0) -> Grid2D:
    return Grid2D(n_t=n, n_x=n, t_extent=x_extent / 2, x_extent=x_extent)


def wave_product_constant(
    f_hat: np.ndarray, g_hat: np.ndarray, grid: Grid2D, decay_tol: float = 1e-12
) -> float:
    """||u v||_L2 / (||f|| ||g||) for the transversal free waves u, v.

    Synthesizes ``u(t, x) = f(x - t)`` and ``v(t, x) = g(x + t)`` from the
    spatial spectra by spectral translation and integrates the product over
    the box.  The change of variables (x - t, x + t) turns the squared
    product integral into (1/2) ||f||^2 ||g||^2 exactly, so the ratio equals
    1/sqrt(2) for every pair of profiles; the value is invariant under
    rescaling and translation of f and g.

    The profiles must decay below ``decay_tol`` (relative) at the spatial
    boundary for the periodic box to stand in for the line.  On the
    spatially periodic box the two waves realign every half spatial period,
    so the time extent must not exceed half the spatial extent; otherwise
    the box would integrate the transversal crossing more than once.
    """
    f_hat = np.asarray(f_hat, dtype=complex)
    g_hat = np.asarray(g_hat, dtype=complex)
    if f_hat.shape != (grid.n_x,) or g_hat.shape != (grid.n_x,):
        raise ValueError("spatial spectra must be 1d arrays on the grid's xi axis")
    if grid.t_extent > grid.x_extent / 2 + 1e-12:
        raise ValueError(
            "time extent must be at most half the spatial extent so that the box "
            "contains exactly one transversal crossing"
        )
    f = spatial_inverse(f_hat, grid.x_extent)
    g = spatial_inverse(g_hat, grid.x_extent)
    norm_f = float(np.sqrt(np.sum(np.abs(f) ** 2) * grid.dx))
    norm_g = float(np.sqrt(np.sum(np.abs(g) ** 2) * grid.dx))
    if norm_f == 0.0 or norm_g == 0.0:
        raise ValueError("wave_product_constant: zero profile")
    for name, prof in (("f", f), ("g", g)):
        edge = max(abs(prof[0]), abs(prof[-1])) / np.abs(prof).max()
        if edge > decay_tol:
            raise ValueError(
                f"profile {name} does not decay at the spatial boundary "
                f"(relative edge magnitude {edge:.3e})"
            )
    t = grid.t
    xi = grid.xi
    u = spatial_inverse(f_hat[None, :] * np.exp(-1j * t[:, None] * xi[None, :]), grid.x_extent)
    v = spatial_inverse(g_hat[None, :] * np.exp(+1j * t[:, None] * xi[None, :]), grid.x_extent)
    norm_uv = float(np.sqrt(np.sum(np.abs(u * v) ** 2) * grid.cell_physical))
    return norm_uv / (norm_f * norm_g)


def default_probe_grid(n: int = 288, dmode: float = 0.5) -> Grid2D:
    return Grid2D(n_t=n, n_x=n, t_extent=2 * np.pi / dmode, x_extent=2 * np.pi / dmode)


def embedding_probe(
    alpha: float,
    trials: int,
    seed: int = 0,
    grid: Grid2D | None = None,
    band: float = 32.0,
) -> float:
    """Max of ||u v||_L2 / (||u||_{X+^{0,alpha}} ||v||_{X-^{0,alpha}}) over trials.

    u and v have i.i.d. complex Gaussian Fourier coefficients on the band
    |tau|, |xi| <= band, normalized to unit X norm, so every ratio is the
    raw embedding quotient.  The products stay band-limited within the
    frequency box (the default grid covers twice the band), making the
    pointwise products alias-free.  The max is non-increasing in alpha for a
    fixed seed and bounded uniformly in the grid size.
    """
    if alpha <= 0.5:
        raise ValueError("embedding_probe requires alpha > 1/2")
    if grid is None:
        grid = default_probe_grid()
    if grid.tau[-1] < 2 * band or grid.xi[-1] < 2 * band:
        raise ValueError("probe grid must cover twice the coefficient band")
    rng = np.random.default_rng(seed)
    mask = (np.abs(grid.tau)[:, None] <= band) & (np.abs(grid.xi)[None, :] <= band)
    best = 0.0
    for _ in range(trials):
        factors = []
        for flavor in ("X_plus", "X_minus"):
            z = rng.standard_normal(mask.shape) + 1j * rng.standard_normal(mask.shape)
            gf = GridFunction2D(grid, np.where(mask, z, 0.0), "fourier")
            nrm = weighted_norm(gf, NormIndex(0.0, alpha, flavor))
            gf = GridFunction2D(grid, gf.values / nrm, "fourier")
            factors.append(inverse_transform(gf))
        u, v = factors
        prod = GridFunction2D(grid, u.values * v.values, "physical")
        best = max(best, l2_norm_physical(prod))
    return best
