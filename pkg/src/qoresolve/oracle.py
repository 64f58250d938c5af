"""Independent ground truth for binomial surfaces z^m + unit * x^a y^b.

Irreducible binomials are closed under every transform the resolver uses:
substituting the blow-up chart coordinates into z^m + u x^a y^b, stripping
the exceptional factor, and (when the z-degree collapses or a coordinate
inversion is forced) relabeling coordinates always yields another binomial,
a smooth graph, or a unit.  That closure makes literal substitution a
complete, proof-independent oracle for the abstract pair calculus: every
edge of a resolution tree can be replayed here with plain integers and the
resulting (degree, exponent pairs) compared exactly.

The discriminant check is computed from scratch as an integer Sylvester
resultant so that quasi-ordinarity itself is verified rather than assumed.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .pairs import CharPair, GhostMonomial, PairList, validate_pairs


class OracleError(Exception):
    pass


class ReducibleBinomial(OracleError):
    """gcd(m, a, b) > 1: the surface splits into conjugate factors."""


class IllegalCenter(OracleError):
    """The requested blow-up center is not contained in the surface."""


class Divergence(OracleError):
    """Lock-step replay of a resolution tree disagreed with substitution."""


@dataclass(frozen=True)
class BinomialSurface:
    """The germ z^m + u * x^a y^b with u a nonzero constant.

    The value of the unit u never influences the resolution, so it is not
    stored.  The degenerate form (m=1, a=0, b=0) stands for the recentred
    smooth graph f = z (zero monomial term), which arises when a chart makes
    the monomial part constant and the point of interest follows the strict
    transform.
    """

    m: int
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.m < 1 or self.a < 0 or self.b < 0:
            raise OracleError(f"bad binomial data {self}")
        if self.m == 1:
            return
        if (self.a, self.b) == (0, 0):
            raise OracleError("z^m + unit does not pass through the origin")
        if math.gcd(self.m, self.a, self.b) != 1:
            raise ReducibleBinomial(f"gcd(m,a,b) > 1 for {self}")

    def is_plain_smooth(self) -> bool:
        return self.m == 1 and self.a == 0 and self.b == 0

    def __str__(self) -> str:
        if self.is_plain_smooth():
            return "z"
        term = "".join(
            f"{v}^{e}" if e > 1 else v
            for v, e in (("x", self.a), ("y", self.b))
            if e > 0
        )
        zpart = f"z^{self.m}" if self.m > 1 else "z"
        return f"{zpart}+{term}" if term else f"{zpart}+1"


#: Marker results for charts in which the strict transform leaves the origin.
UNIT = "unit"

OracleStep = Union[BinomialSurface, str]


def oracle_pairs(s: BinomialSurface) -> tuple[int, PairList, Optional[GhostMonomial]]:
    """Characteristic data of the binomial, read off the root differences.

    Roots of z^m + u x^a y^b are the m conjugates of x^(a/m) y^(b/m) times
    constants, so there is a single pair (a/m, b/m); when it is integral the
    (necessarily degree-1) branch is a smooth graph and the pair is returned
    as a ghost monomial instead.
    """
    lam, mu = Fraction(s.a, s.m), Fraction(s.b, s.m)
    if lam.denominator == 1 and mu.denominator == 1:
        if s.m != 1:  # would contradict irreducibility
            raise ReducibleBinomial(f"integral pair on degree {s.m}")
        ghost = None if s.is_plain_smooth() else GhostMonomial(lam, mu, True)
        return s.m, PairList(()), ghost
    return s.m, validate_pairs(PairList((CharPair(lam, mu),))), None


def oracle_normalize(s: BinomialSurface) -> BinomialSurface:
    """Literal counterpart of the driver's forced coordinate inversion.

    A surface z^m + u x^a y^b whose single pair violates condition 2
    (one exponent zero, the other below one) is rewritten by exchanging the
    vanishing coordinate with z:

    * a = 0, 0 < b < m: exchange y and z, giving z^b + u' y^m;
    * b = 0, 0 < a < m: exchange x and z, giving z^a + u' x^m.

    Degree-one surfaces are already smooth graphs; absorbing the monomial
    into z is a plain coordinate change that keeps (a, b) as the record of
    the absorbed part, so they are returned unchanged.
    """
    m, a, b = s.m, s.a, s.b
    if m == 1:
        return s
    if a == 0 and 0 < b < m:
        return BinomialSurface(b, 0, m)
    if b == 0 and 0 < a < m:
        return BinomialSurface(a, m, 0)
    return s


def oracle_blow_up(s: BinomialSurface, center: str, chart: str) -> OracleStep:
    """Literal substitution of one blow-up chart, exceptional factor stripped.

    ``center`` is 'origin', 'x-axis' (ideal (y,z)) or 'y-axis' (ideal (x,z));
    ``chart`` is 'x', 'y' or 'z'.  Returns the new BinomialSurface, or UNIT
    when the strict transform misses every point of interest of the chart
    (transversal z-charts and the skipped monoidal charts).

    The z-degree may collapse (non-transverse x-/y-charts), in which case the
    same coordinate exchange the driver performs is applied here, as is the
    single-pair inversion and the m=1 recentring.
    """
    m, a, b = s.m, s.a, s.b
    if center == "origin":
        if s.is_plain_smooth():
            # f = z is invariant under x- and y-charts and a unit in the z-chart
            if chart in ("x", "y"):
                return s
            if chart == "z":
                return UNIT
        nu = min(m, a + b)
        if chart == "x":
            # f(x, xy, xz) / x^nu
            if a + b >= m:
                return BinomialSurface(m, a + b - m, b)
            if b == 0:
                return UNIT  # x^(m-a) z^m + 1 misses the whole chart
            # x^(m-a-b) z^m + y^b: exchange y and z, degree becomes b
            return BinomialSurface(b, m - a - b, m)
        if chart == "y":
            if a + b >= m:
                return BinomialSurface(m, a, a + b - m)
            if a == 0:
                return UNIT
            return BinomialSurface(a, m, m - a - b)
        if chart == "z":
            if a + b >= m:
                return UNIT  # 1 + u x^a y^b z^(a+b-m) is a unit at the origin
            return BinomialSurface(m - a - b, a, b)
    elif center == "x-axis":
        # Ideal (y, z) in the driver's coordinates.  For m = 1 with b = 0 the
        # monomial does not vanish on {y = z = 0}; the axis the driver blows
        # up is the recentred one {y = z + u x^a y^b = 0}, and the monomial
        # part is absorbed into the new fiber coordinate.
        if chart == "z":
            return UNIT
        if chart == "y":
            if s.is_plain_smooth():
                return s
            if m == 1:
                return BinomialSurface(1, a, b - 1) if b >= 1 else BinomialSurface(1, 0, 0)
            if b < m:
                raise IllegalCenter(f"x-axis not equimultiple for {s}")
            return BinomialSurface(m, a, b - m)
    elif center == "y-axis":
        if chart == "z":
            return UNIT
        if chart == "x":
            if s.is_plain_smooth():
                return s
            if m == 1:
                return BinomialSurface(1, a - 1, b) if a >= 1 else BinomialSurface(1, 0, 0)
            if a < m:
                raise IllegalCenter(f"y-axis not equimultiple for {s}")
            return BinomialSurface(m, a - m, b)
    raise IllegalCenter(f"no chart {chart!r} for center {center!r}")


def _poly_eval(coeffs: list[int], t: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _det_fraction_free(mat: list[list[int]]) -> int:
    """Integer determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(mat)
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def oracle_discriminant_check(
    s: BinomialSurface, unit: int = 1
) -> tuple[bool, tuple[int, int]]:
    """Verify quasi-ordinarity directly: the z-discriminant is a monomial.

    Computes Res_z(f, df/dz) for f = z^m + unit*t (t standing for x^a y^b) as
    an exact integer polynomial in t, by evaluating Sylvester determinants at
    integer points and interpolating.  Returns (True, exponents of the
    discriminant monomial in x and y) if the resultant is a single term
    c * t^k; for genuine binomials it always is, with k = m - 1.
    """
    m = s.m
    if m == 1:
        return True, (0, 0)
    # Sylvester matrix of z^m + u t (degree m) and m z^(m-1) (degree m-1):
    # size 2m-1; entries are 0, 1, m or u*t.
    size = 2 * m - 1

    def sylvester_at(t: int) -> list[list[int]]:
        mat = [[0] * size for _ in range(size)]
        # m-1 shifted copies of the coefficient row of f: [1, 0, ..., 0, u*t]
        for r in range(m - 1):
            mat[r][r] = 1
            mat[r][r + m] = unit * t
        # m shifted copies of the row of f': [m, 0, ..., 0]
        for r in range(m):
            mat[m - 1 + r][r] = m
        return mat

    # Degree of det in t is at most m-1; interpolate from m points.
    points = list(range(m))
    values = [_det_fraction_free(sylvester_at(t)) for t in points]
    # Lagrange interpolation with exact rationals.
    coeffs = [Fraction(0)] * m
    for i, ti in enumerate(points):
        # basis polynomial prod_{j != i} (t - tj) / (ti - tj)
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, tj in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis[:]  # multiply by t
            for k in range(len(basis) - 1):
                basis[k] -= tj * basis[k + 1] * 1
            denom *= ti - tj
        for k in range(len(basis)):
            coeffs[k] += values[i] * basis[k] / denom
    int_coeffs = []
    for c in coeffs:
        if c.denominator != 1:
            return False, (0, 0)
        int_coeffs.append(int(c))
    nonzero = [k for k, c in enumerate(int_coeffs) if c != 0]
    if len(nonzero) != 1:
        return False, (0, 0)
    k = nonzero[0]
    return True, (s.a * k, s.b * k)


@dataclass
class ReplayReport:
    """Outcome of replaying a resolution tree through the oracle."""

    ok: bool
    edges: int
    lines: list[str]
    failure: Optional[str] = None
    reused: int = 0

    def text(self) -> str:
        return "\n".join(self.lines)


def _not_increasing(parent, child) -> bool:
    """Lexicographic non-increase, comparing what both sequences define."""
    from .invariant import INF

    def key(v):
        return (1, 0) if v is INF else (0, v)

    for pa, ch in zip(parent.slots, child.slots):
        ka, kc = key(pa), key(ch)
        if kc < ka:
            return True
        if kc > ka:
            return False
    return True  # equal on the shared prefix


def cross_validate(
    surface: BinomialSurface,
    step_cap: int = 100000,
    memo: Optional[dict] = None,
    max_lines: int = 60,
) -> ReplayReport:
    """Resolve the surface abstractly and replay every edge by substitution.

    The abstract driver and the literal-substitution oracle walk the
    resolution tree in lock step; at every node the degree and pair list
    must agree exactly, every skipped chart must be smooth or a unit under
    substitution, and the invariant must not increase along the edge.

    Subtrees below a state are pure functions of the state's canonical key,
    so a (key, surface) pair that has already been verified -- possibly for
    a different input surface -- is not re-verified; pass a shared ``memo``
    dict to carry that knowledge across a corpus run.
    """
    from . import driver  # local import to keep the oracle importable alone

    if memo is None:
        memo = {}
    root_state = driver.initial_state(*oracle_pairs(surface)[:2])

    # Input normalization may have relabeled coordinates; mirror it literally.
    surf = surface
    for mv in root_state.input_moves:
        if mv == "iii":
            surf = BinomialSurface(surf.m, surf.b, surf.a)
        elif mv == "ii":
            surf = oracle_normalize(surf)
        # move i (absorbing the integral part) keeps (m, a, b) as stored

    lines: list[str] = []
    counters = {"edges": 0, "reused": 0, "steps": 0}

    def say(text: str) -> None:
        if len(lines) < max_lines:
            lines.append(text)
        elif len(lines) == max_lines:
            lines.append("... (further lines elided)")

    def check_pairs(state, s: BinomialSurface, path: str) -> None:
        om, opairs, _ = oracle_pairs(s)
        if om != state.m or tuple(opairs) != tuple(state.pairs):
            raise Divergence(
                f"DIVERGE {path or '<root>'} state: driver m={state.m} "
                f"pairs={state.pairs}, oracle m={om} pairs={opairs} ({s})"
            )

    def walk(state, s: BinomialSurface, path: str, result=None) -> None:
        counters["steps"] += 1
        if counters["steps"] > step_cap:
            raise driver.StepCapExceeded(f"more than {step_cap} states verified")
        check_pairs(state, s, path)
        key = (state.canonical_key(), (s.m, s.a, s.b))
        if key in memo:
            counters["reused"] += 1
            return
        if result is None:
            result = driver.compute_invariant(state)
        if driver.is_resolved(state, result):
            say(f"OK {path or '<root>'} resolved {s}")
            memo[key] = True
            return
        center = driver.select_center(state, result)
        name = driver.center_name(center)
        charts = driver.relevant_charts(state, center)
        # every z-chart the driver skips must be smooth or a unit literally
        if "z" not in charts:
            out = oracle_blow_up(s, name, "z")
            if out is not UNIT:
                om2, op2, _ = oracle_pairs(out)
                if om2 != 1 or op2:
                    raise Divergence(f"DIVERGE {path}/z skipped chart not smooth: {out}")
        for chart in charts:
            child = driver.blow_up_chart(state, center, chart, result)
            out = oracle_blow_up(s, name, chart)
            if out is UNIT:
                raise Divergence(f"DIVERGE {path}/{chart} oracle strict transform is a unit")
            out = oracle_normalize(out)
            child_result = driver.compute_invariant(child)
            if not _not_increasing(result.invariant, child_result.invariant):
                raise Divergence(
                    f"DIVERGE {path}/{chart} invariant rose "
                    f"{result.invariant} -> {child_result.invariant}"
                )
            counters["edges"] += 1
            say(f"OK {path}/{chart} {out}")
            walk(child, out, f"{path}/{chart}", child_result)
        memo[key] = True

    try:
        if sys.getrecursionlimit() < 20000:
            sys.setrecursionlimit(20000)
        walk(root_state, surf, "")
    except Divergence as exc:
        return ReplayReport(
            False, counters["edges"], lines + [str(exc)], failure=str(exc),
            reused=counters["reused"],
        )
    return ReplayReport(True, counters["edges"], lines, reused=counters["reused"])


def corpus(max_m: int = 12, max_exp: int = 20):
    """All irreducible binomial surfaces with m <= max_m, a,b <= max_exp."""
    for m in range(1, max_m + 1):
        for a in range(max_exp + 1):
            for b in range(max_exp + 1):
                if (a, b) == (0, 0):
                    continue
                if math.gcd(m, math.gcd(a, b)) != 1:
                    continue
                yield BinomialSurface(m, a, b)
