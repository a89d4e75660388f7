"""Well-posedness regions in the (s, r) regularity plane and the constraint system.

``s`` is the Sobolev regularity of the spinor data, ``r`` that of the scalar
field.  Three regions are encoded: the region certified by this package
(``in_wellposed_region``), and the earlier Pecher and Machihara regions it
strictly contains.  Iterating the system in the weighted space-time spaces
X_+-^{s,sigma} x H^{r,rho} works precisely when the twelve inequalities of
``check_constraints`` admit a parameter choice (sigma, rho, eps);
``choose_parameters`` produces one for every point of the region, following
the recipe rho = 1/2 + eps with eps found by halving.

Also here: the hypothesis checkers for the wave-Sobolev product law
(sufficient side) and for the necessary conditions attached to the explicit
counterexample families in ``counterexamples``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .counterexamples import ExponentTuple

CONSTRAINT_KEYS = (
    "r1", "r2", "sigma1", "rho_sigma", "r6", "s2", "s3", "r7", "r3", "r4", "s1", "rho1",
)

WELLPOSED_INEQUALITIES = ("s > -1/4", "r > 0", "|s| <= r", "r <= 1+s")


@dataclass(frozen=True)
class ParameterChoice:
    sigma: float
    rho: float
    eps: float


@dataclass(frozen=True)
class Infeasible:
    """Marker returned when (s, r) lies outside the certified region."""

    violated: tuple[str, ...]

    @property
    def reason(self) -> str:
        return ", ".join(f"{name} violated" for name in self.violated)


def region_violations(s: float, r: float) -> tuple[str, ...]:
    """Names of the certified-region inequalities failed by (s, r)."""
    checks = {
        "s > -1/4": s > -0.25,
        "r > 0": r > 0,
        "|s| <= r": abs(s) <= r,
        "r <= 1+s": r <= 1 + s,
    }
    return tuple(name for name in WELLPOSED_INEQUALITIES if not checks[name])


def in_wellposed_region(s: float, r: float) -> bool:
    """s > -1/4, r > 0, |s| <= r <= 1+s (strict/non-strict exactly as written)."""
    return s > -0.25 and r > 0 and abs(s) <= r <= 1 + s


def in_pecher_region(s: float, r: float) -> bool:
    """s > -1/4, r > 0, |s| <= r, r < 1+2s, r <= 1+s."""
    return s > -0.25 and r > 0 and abs(s) <= r and r < 1 + 2 * s and r <= 1 + s


def in_machihara_region(s: float, r: float) -> bool:
    """-1/4 < s <= 0, 2|s| <= r, r <= 1+2s."""
    return -0.25 < s <= 0 and 2 * abs(s) <= r and r <= 1 + 2 * s


def check_constraints(s: float, r: float, choice: ParameterChoice) -> dict[str, bool]:
    """Truth value of each iteration constraint at (s, r) with (sigma, rho, eps).

    All comparisons are exact double-precision evaluations of the stated
    strict/non-strict inequalities; no tolerances.  Keys r4 and r6 encode
    the same inequality and always agree.
    """
    sigma, rho, eps = choice.sigma, choice.rho, choice.eps
    report = {
        "r1": r > sigma - 0.5 + eps,
        "r2": r >= abs(s),
        "sigma1": sigma <= 1 - eps,
        "rho_sigma": 0.5 < rho <= 1 and 0.5 < sigma <= 1,
        "r6": r <= 1 + s,
        "s2": s >= -0.5 + (rho + eps) / 2,
        "s3": s >= -1 + rho + eps,
        "r7": r <= 1 + 2 * s + 1 - rho - eps,
        "r3": r < 0.5 + sigma + 2 * s,
        "r4": r <= 1 + s,
        "s1": s >= -sigma / 2,
        "rho1": rho <= 1 - eps,
    }
    return report


def all_constraints_hold(report: dict[str, bool]) -> bool:
    return all(report.values())


def choose_parameters(
    s: float, r: float, eps_start: float = 0.125, eps_floor: float = 2.0**-20
) -> ParameterChoice | Infeasible:
    """Produce (sigma, rho, eps) satisfying every constraint, or Infeasible.

    Sets rho = 1/2 + eps and halves eps from ``eps_start`` until the sigma
    interval (max(1/2, r - 1/2 - 2s), min(1 - eps, r + 1/2 - eps)) is
    nonempty *and* the full constraint report passes with sigma at the
    interval midpoint (near s = -1/4 the interval can be nonempty while the
    spinor-regularity constraints still need a smaller eps).  Reports the
    largest eps that works.
    """
    violated = region_violations(s, r)
    if violated:
        return Infeasible(violated)
    eps = eps_start
    while eps >= eps_floor:
        lo = max(0.5, r - 0.5 - 2 * s)
        hi = min(1 - eps, r + 0.5 - eps)
        if lo < hi:
            choice = ParameterChoice(sigma=(lo + hi) / 2, rho=0.5 + eps, eps=eps)
            if all_constraints_hold(check_constraints(s, r, choice)):
                return choice
        eps /= 2
    # Unreachable for in-region points; kept as a defensive report.
    return Infeasible(("no feasible eps above floor",))


def product_law_conditions(
    a: float, b: float, c: float, alpha: float, beta: float, gamma: float
) -> str:
    """Classify the hypotheses of the wave-Sobolev product law.

    Returns ``"sufficient"`` iff the weight hypotheses (alpha, beta, gamma
    >= 0 and their sum > 1/2), the pairwise sums a+b, a+c, b+c >= 0 and the
    total a+b+c > 1/2 all hold.  On failure, reports the first failing group
    in the order: weights, pairwise sums, total sum.
    """
    if not (alpha >= 0 and beta >= 0 and gamma >= 0 and alpha + beta + gamma > 0.5):
        return "fails_weights"
    if not (a + b >= 0 and a + c >= 0 and b + c >= 0):
        return "fails_abc2"
    if not a + b + c > 0.5:
        return "fails_abc1"
    return "sufficient"


def bilinear_necessary_conditions(e: ExponentTuple) -> dict[str, dict]:
    """Necessary conditions for the two-sided null-form estimate, with margins.

    Each entry carries the slack (lhs - rhs, negative means violated) and
    the id of the counterexample family whose decay rate quantifies the
    failure.  For cond1 the family depends on which of alpha, beta, gamma
    realizes the minimum: the transversal-strip pair probes alpha/beta, the
    parallel-strip pair probes gamma.
    """
    m_abc = min(e.alpha, e.beta, e.gamma)
    cond1_family = "cond1_gamma" if e.gamma <= min(e.alpha, e.beta) else "cond1_ab"
    report = {
        "cond1": {
            "margin": e.a + e.b + m_abc,
            "family": cond1_family,
        },
        "cond2": {
            "margin": e.a + e.b + e.c + min(e.alpha, e.beta) - 0.5,
            "family": "cond2",
        },
        "cond4": {
            "margin": e.a + e.b + e.c + e.gamma,
            "family": "cond4",
        },
        "cond3": {
            "margin": min(e.a, e.b) + e.c,
            "family": "cond3",
        },
    }
    for entry in report.values():
        entry["holds"] = entry["margin"] >= 0
    return report
