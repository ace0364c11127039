import sys
import os
import logging
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from proto import lab_pb2
import lab_config
from DistanceLab import construct_h, distance_report, greedy_factored_witness, weight_of_factored
from EvaluationCode import locality
from LabErrors import CapabilityError, ConstructionError, DomainError, PlaceCapError
from Presets import build_preset, claimed_parameters, parse_preset


# MARK: Initialize Logger
# Configure logging set-up. We want to log times & types of logs, as well as
# function names & the subsequent message.
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(funcName)s - %(message)s'
)

# Create a logger
logger = logging.getLogger(__name__)
diagnostics = logging.getLogger(lab_config.DIAGNOSTICS_LOGGER)


# MARK: Rate points
@dataclass(frozen=True)
class RatePoint:
    """
    Integer parameters of a code; every ratio is derived from them. d is the
    distance the ratios use; when it is not exact, d_upper holds the lightest
    codeword found, if any.
    """
    label: str
    n: int
    k: int
    d: int
    r: int
    d_exact: bool = True
    d_upper: int = None

    @property
    def delta(self):
        return Fraction(self.d, self.n)

    @property
    def rate(self):
        return Fraction(self.k, self.n)

    @property
    def r_over_n(self):
        return Fraction(self.r, self.n)


def rate_point(code, report, label=None):
    """
    Behavior with Exceptions:
        DomainError when no distance is known for the code.
    """
    if report is None or (report.d_upper is None and report.d_lower == 0):
        raise DomainError(f"No distance known for {code.name}")
    return RatePoint(label or code.name, code.n, code.rank, report.best, locality(code), report.exact, report.d_upper)


def claimed_point(name):
    """Rate point of a GS preset from its closed-form parameters, without building it."""
    spec = parse_preset(name)
    stated = claimed_parameters(spec)["stated"]
    return RatePoint(name, stated["n"], stated["k"], stated["d"], stated["r"], not stated["d_is_bound"])


# MARK: Threshold curves
def _check_args(r, q, delta):
    if r < 1 or q < 2:
        raise DomainError(f"Need r >= 1 and q >= 2, got r = {r}, q = {q}")
    if not 0 <= delta <= 1:
        raise DomainError(f"delta = {delta} is outside [0, 1]")


def btv_threshold(r, q, delta):
    """r/(r+1) (1 - delta - 3/(q+1)), clamped at 0. Exact for rational delta."""
    _check_args(r, q, delta)
    return max(0, Fraction(r, r + 1) * (1 - delta - Fraction(3, q + 1)))


def improved_threshold(r, q, delta):
    """r/(r+1) (1 - delta - 2/(q+1)), clamped at 0."""
    _check_args(r, q, delta)
    return max(0, Fraction(r, r + 1) * (1 - delta - Fraction(2, q + 1)))


paper_threshold = improved_threshold


def improved_affine_holds(rate, delta, q):
    """R + (q-1)/q delta > (q-1)(q-2)/q^2, checked in exact arithmetic."""
    return Fraction(rate) + Fraction(q - 1, q) * Fraction(delta) > Fraction((q - 1) * (q - 2), q * q)


def _gv_objective(s, r, q, delta):
    b2 = ((1 + (q - 1) * s) ** (r + 1) + (q - 1) * (1 - s) ** (r + 1)) / q
    return (np.log(b2) / (r + 1) - delta * np.log(s)) / np.log(q)


def gv_minimiser(r, q, delta, tol=lab_config.GV_TOLERANCE, grid_points=lab_config.GV_GRID_POINTS):
    """
    Minimises (1/(r+1)) log_q b_2(s) - delta log_q s over 0 < s <= 1.

    A dense grid locates the basin, golden-section search refines it.

    Returns:
        (float, float): the minimising s and the minimum.
    """
    grid = np.arange(1, grid_points + 1, dtype=np.float64) / grid_points
    values = _gv_objective(grid, r, q, delta)
    i = int(np.argmin(values))
    best_s, best_value = float(grid[i]), float(values[i])
    if i in (0, grid_points - 1):
        return best_s, best_value
    try:
        result = minimize_scalar(
            lambda s: float(_gv_objective(s, r, q, delta)),
            bracket=(grid[i - 1], grid[i], grid[i + 1]),
            method="golden",
            tol=tol,
        )
    except ValueError:
        return best_s, best_value
    if 0 < result.x <= 1 and result.fun < best_value:
        return float(result.x), float(result.fun)
    return best_s, best_value


def gv_threshold(r, q, delta, tol=lab_config.GV_TOLERANCE, grid_points=lab_config.GV_GRID_POINTS):
    """
    r/(r+1) minus the minimum above, clamped at 0. At delta = 0 the minimum
    is approached as s -> 0 and the limit r/(r+1) is returned.
    """
    _check_args(r, q, delta)
    if delta == 0:
        logger.debug("gv_threshold at delta = 0 returns the s -> 0 limit")
        return r / (r + 1)
    _, value = gv_minimiser(r, q, float(delta), tol, grid_points)
    return max(0.0, r / (r + 1) - value)


def asymptotic_point(variant, q):
    """Leading terms of (delta, R) for the two GS families as q grows."""
    if variant == "thm34":
        return 0.5 - 3 / (2 * q), 0.5 - 1 / q + 1 / q ** 2
    if variant == "thm36":
        return 0.5 - 5 / (2 * q), 0.5 + 1 / q ** 2
    raise DomainError(f"No asymptotic form for {variant!r}")


# MARK: Scatter
@dataclass(frozen=True)
class ScatterRow:
    point: RatePoint
    btv_ok: bool
    improved_ok: bool
    gv_ok: bool

    def to_proto(self):
        p = self.point
        return lab_pb2.RatePointRecord(
            label=p.label,
            n=p.n,
            k=p.k,
            d=p.d,
            r=p.r,
            delta_num=p.delta.numerator,
            delta_den=p.delta.denominator,
            rate_num=p.rate.numerator,
            rate_den=p.rate.denominator,
            btv_ok=self.btv_ok,
            paper_ok=self.improved_ok,
            gv_ok=self.gv_ok,
            exact=p.d_exact,
            d_upper=p.d_upper or 0,
        )


def compare(point, q):
    """Checks a point against the three curves for its own locality at the given q."""
    rate, delta = point.rate, point.delta
    gv = gv_threshold(point.r, q, float(delta))
    return ScatterRow(
        point=point,
        btv_ok=rate >= btv_threshold(point.r, q, delta),
        improved_ok=improved_affine_holds(rate, delta, q),
        gv_ok=float(rate) >= gv,
    )


def _measured_point(name, budget):
    spec = parse_preset(name)
    code = build_preset(name)
    report = distance_report(code, budget=budget, prefer_bounds=True)
    point = rate_point(code, report, label=name)
    for reading, claim in claimed_parameters(spec).items():
        claimed_delta = Fraction(claim["d"], claim["n"])
        if claimed_delta != point.delta and not claim["d_is_bound"]:
            diagnostics.warning(f"{name}: measured delta {point.delta} differs from the {reading} reading {claimed_delta}")
    return point


def _gs_point(name):
    """
    Closed-form point of a GS preset paired with its factored witness: the
    strict one, else the greedy one. Presets too large to enumerate keep the
    stated parameters.
    """
    point = claimed_point(name)
    try:
        code = build_preset(name)
        try:
            weight = weight_of_factored(code, construct_h(code), cross_check=False)
        except ConstructionError:
            _, weight = greedy_factored_witness(code, cross_check=False)
    except (CapabilityError, PlaceCapError) as e:
        logger.info(f"{name}: no witness ({e}); keeping the stated parameters")
        return point
    if weight != point.d:
        diagnostics.warning(f"{name}: lightest witness has weight {weight}, the stated d is {point.d}")
    return replace(point, d_exact=point.d_exact and weight == point.d, d_upper=weight)


def scatter(presets, q, sweep=False, budget=lab_config.DEFAULT_SEARCH_BUDGET):
    """
    Rate points of the given presets (GS ones from closed forms checked
    against their witnesses, the rest measured) plus, with sweep, the cor38
    family l = 1 .. q^2/2.
    """
    names = list(presets)
    if sweep:
        names += [f"gs-cor38-q{q}-l{l}" for l in range(1, q * q // 2 + 1)]
    if any(name.startswith("gs-") for name in names):
        diagnostics.warning(f"GS length is q^4 - q^3 = {q ** 4 - q ** 3}, not q^4 - q^2 = {q ** 4 - q ** 2}")

    rows = []
    for name in names:
        point = _gs_point(name) if name.startswith("gs-") else _measured_point(name, budget)
        rows.append(compare(point, q))
    logger.info(f"Scatter at q = {q}: {len(rows)} points")
    return rows


def table_proto(q, rows):
    """The scatter rows, followed by the large-q leading terms of both GS families at this q."""
    asymptotic = []
    for variant in ("thm34", "thm36"):
        delta, rate = asymptotic_point(variant, q)
        asymptotic.append(lab_pb2.AsymptoticPoint(variant=variant, delta=delta, rate=rate))
    return lab_pb2.ScatterTable(
        schema_version=lab_config.SCHEMA_VERSION,
        q=q,
        points=[row.to_proto() for row in rows],
        asymptotic=asymptotic,
    )


def bounds_report(r, q, delta):
    """The three threshold rates at one point, with the GV minimiser."""
    delta = Fraction(delta)
    gv = gv_threshold(r, q, delta)
    s = 0.0 if delta == 0 else gv_minimiser(r, q, float(delta))[0]
    return lab_pb2.BoundsReport(
        schema_version=lab_config.SCHEMA_VERSION,
        r=r,
        q=q,
        delta_num=delta.numerator,
        delta_den=delta.denominator,
        btv=float(btv_threshold(r, q, delta)),
        improved=float(improved_threshold(r, q, delta)),
        gv=float(gv),
        gv_minimiser=s,
    )
