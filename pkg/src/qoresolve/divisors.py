"""Exceptional divisors as seen from a chart origin.

Only the locally visible configuration is tracked: a divisor belongs to a
chart state exactly while its plane passes through the chart origin.  Each
divisor carries a global birth year (assigned from tree depth, so the data
is a pure function of the path) and a kind describing how its plane reads in
the current coordinates:

* ``X_PLANE`` / ``Y_PLANE`` -- the coordinate planes {x=0}, {y=0};
* ``CONTACT`` -- a plane {z - q(x,y) = 0}; ``exponents`` holds the exponent
  pair of q when q is a known monomial-times-unit (the absorbed integral
  pair), or None when q is an unknown series that the residual coefficient
  monomial weighted-divides (then the divisor is inert and prints as H_z);
* ``CONTACT_AS_X`` / ``CONTACT_AS_Y`` -- planes {x - p} / {y - p} that
  restrict to the bare coordinate times a unit on {z=0}; they behave exactly
  like the corresponding coordinate plane and only keep a distinct kind for
  trace output.

The transition rules below are closed over these kinds: blow-ups evolve
contact exponents by the same substitution rows as the pair calculus,
coordinate exchanges rotate kinds, and the normalizing substitution
z -> z - q turns the unique z-side plane into the carrier of the absorbed
monomial.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .pairs import GhostMonomial, Move, PairList


class DivisorError(Exception):
    pass


class InconsistentConfiguration(DivisorError):
    """The divisor set violates an invariant the transition rules assume."""


class IncompleteHistory(DivisorError):
    """History does not reach back to some divisor's birth year."""


class Kind(enum.Enum):
    X_PLANE = "x"
    Y_PLANE = "y"
    CONTACT = "contact"
    CONTACT_AS_X = "contact-as-x"
    CONTACT_AS_Y = "contact-as-y"


@dataclass(frozen=True)
class Divisor:
    birth: int
    kind: Kind
    exponents: Optional[tuple[Fraction, Fraction]] = None
    dominant: bool = False

    @property
    def axis(self) -> Optional[str]:
        """Coordinate the plane restricts to on {z=0}: 'x', 'y' or None."""
        if self.kind in (Kind.X_PLANE, Kind.CONTACT_AS_X):
            return "x"
        if self.kind in (Kind.Y_PLANE, Kind.CONTACT_AS_Y):
            return "y"
        return None

    @property
    def is_z_side(self) -> bool:
        return self.kind is Kind.CONTACT

    def label(self) -> str:
        if self.kind is Kind.X_PLANE:
            return "H_x"
        if self.kind is Kind.Y_PLANE:
            return "H_y"
        if self.kind is Kind.CONTACT_AS_X:
            return "H_{x-p}"
        if self.kind is Kind.CONTACT_AS_Y:
            return "H_{y-p}"
        if self.exponents is None:
            return "H_z"
        mono = _monomial_str(*self.exponents)
        return f"H_{{z-{mono}}}" if mono != "1" else "H_{z-1}"

    def __str__(self) -> str:
        return self.label()


def _monomial_str(a: Fraction, b: Fraction) -> str:
    parts = []
    for var, e in (("x", a), ("y", b)):
        if e == 0:
            continue
        parts.append(var if e == 1 else f"{var}^{e}")
    return "".join(parts) if parts else "1"


def contact(birth: int, a, b, dominant: bool = False) -> Divisor:
    return Divisor(birth, Kind.CONTACT, (Fraction(a), Fraction(b)), dominant)


@dataclass(frozen=True)
class DivisorConfig:
    """Divisors through the current chart origin, sorted by birth year."""

    divisors: tuple[Divisor, ...] = ()

    def __post_init__(self) -> None:
        births = [d.birth for d in self.divisors]
        if births != sorted(births) or len(set(births)) != len(births):
            raise InconsistentConfiguration(f"births not strictly increasing: {births}")
        for ax in ("x", "y"):
            if sum(1 for d in self.divisors if d.axis == ax) > 1:
                raise InconsistentConfiguration(f"two {ax}-side planes at one origin")
        if sum(1 for d in self.divisors if d.is_z_side) > 1:
            raise InconsistentConfiguration("two z-side planes at one origin")

    def __iter__(self):
        return iter(self.divisors)

    def __len__(self) -> int:
        return len(self.divisors)

    def by_axis(self, axis: str) -> Optional[Divisor]:
        for d in self.divisors:
            if d.axis == axis:
                return d
        return None

    def z_side(self) -> Optional[Divisor]:
        for d in self.divisors:
            if d.is_z_side:
                return d
        return None

    def labels(self) -> tuple[str, ...]:
        return tuple(d.label() for d in self.divisors)

    def __str__(self) -> str:
        return "{" + ", ".join(self.labels()) + "}"


def _sorted_config(divs: list[Divisor]) -> DivisorConfig:
    return DivisorConfig(tuple(sorted(divs, key=lambda d: d.birth)))


def _evolved_contact(d: Divisor, move: Move) -> Optional[Divisor]:
    """Strict transform of a z-side contact plane under one blow-up row."""
    if d.exponents is None:
        return d
    a, b = d.exponents
    if move in (Move.QUAD_TRANSV_X, Move.QUAD_NONTRANSV_X):
        if a + b < 1:
            raise InconsistentConfiguration(f"contact {d} misses the blown-up origin")
        a, b = a + b - 1, b
    elif move in (Move.QUAD_TRANSV_Y, Move.QUAD_NONTRANSV_Y):
        if a + b < 1:
            raise InconsistentConfiguration(f"contact {d} misses the blown-up origin")
        a, b = a, a + b - 1
    elif move is Move.MONOIDAL_X:
        if a < 1:
            raise InconsistentConfiguration(f"contact {d} does not contain the center")
        a, b = a - 1, b
    elif move is Move.MONOIDAL_Y:
        if b < 1:
            raise InconsistentConfiguration(f"contact {d} does not contain the center")
        a, b = a, b - 1
    if (a, b) == (0, 0):
        return None  # the plane z = const no longer meets the origin
    return replace(d, exponents=(a, b))


def transform_divisors(config: DivisorConfig, move: Move, birth: int) -> DivisorConfig:
    """Blow-up step of a divisor configuration (before any coordinate swap).

    A new exceptional plane is born in the chart coordinate; planes whose
    strict transform misses the new origin are dropped; contact exponents
    evolve by the same rows as the exponent pairs.
    """
    out: list[Divisor] = []
    if move in (Move.QUAD_TRANSV_X, Move.QUAD_NONTRANSV_X, Move.MONOIDAL_X):
        new_kind = Kind.X_PLANE
        dropped_axis = "x"
    elif move in (Move.QUAD_TRANSV_Y, Move.QUAD_NONTRANSV_Y, Move.MONOIDAL_Y):
        new_kind = Kind.Y_PLANE
        dropped_axis = "y"
    else:  # z-chart: contacts are blown away, the z-plane is replaced
        for d in config:
            if d.is_z_side:
                continue
            out.append(d)
        out.append(Divisor(birth, Kind.CONTACT, None))
        return _sorted_config(out)

    for d in config:
        if d.axis == dropped_axis:
            continue  # blown away or off the new origin; replaced by the new plane
        if d.is_z_side:
            evolved = _evolved_contact(d, move)
            if evolved is not None:
                out.append(evolved)
        else:
            out.append(d)
    out.append(Divisor(birth, new_kind))
    return _sorted_config(out)


def swap_roles(config: DivisorConfig, axis: str) -> DivisorConfig:
    """Exchange z with the given coordinate in every plane's description.

    Used by the restoring coordinate move after a non-transverse x-/y-chart
    and by the single-pair inversion.  The coordinate plane on the swapped
    axis becomes the z-side plane (the future carrier of absorbed terms);
    z-side planes become coordinate-acting planes on that axis.  An acting
    plane already on the swapped axis would not survive the exchange as a
    plane of the supported shape; the resolution never produces one here,
    and we fail loudly if that assumption is wrong.
    """
    if axis not in ("x", "y"):
        raise ValueError(axis)
    acting = Kind.CONTACT_AS_Y if axis == "y" else Kind.CONTACT_AS_X
    plain = Kind.Y_PLANE if axis == "y" else Kind.X_PLANE
    out: list[Divisor] = []
    for d in config:
        if d.kind is acting:
            raise InconsistentConfiguration(
                f"{d.label()} present while exchanging z and {axis}"
            )
        if d.kind is plain:
            out.append(Divisor(d.birth, Kind.CONTACT, None))
        elif d.is_z_side:
            if d.exponents is None:
                out.append(Divisor(d.birth, plain))
            else:
                out.append(replace(d, kind=acting))
        else:
            out.append(d)
    return _sorted_config(out)


def absorb_ghost(config: DivisorConfig, ghost: Optional[GhostMonomial]) -> DivisorConfig:
    """Record the substitution z -> z - q on the unique z-side plane.

    When a fully integral pair was dropped, q is a known monomial times a
    unit and the z-side plane becomes its carrier; with no z-side plane the
    absorbed part is a plain coordinate change and leaves no trace.  When
    nothing integral was dropped the z-side plane keeps unknown (inert)
    exponents.
    """
    if ghost is None:
        return config
    carrier = config.z_side()
    if carrier is None:
        return config
    out = [
        d
        if d is not carrier
        else replace(d, exponents=(ghost.x_exp, ghost.y_exp), dominant=ghost.dominant)
        for d in config
    ]
    return _sorted_config(out)


def is_general_configuration(
    config: DivisorConfig, pairs: PairList, ghost: Optional[GhostMonomial] = None
) -> bool:
    """Stable shape of the divisor set at a multiplicity drop.

    At most one x-side plane, one y-side plane and one contact plane, with
    the contact's monomial tied to the leading pair by divisibility on one
    side or the other: either x^l y^u divides x^a y^b, or (a, b) is integral
    and x^a y^b divides x^l y^u.  Unknown-exponent contacts sit on the first
    side by construction.  The mirror orientation (produced by y-chart
    drops) is accepted symmetrically.
    """
    x_side = [d for d in config if d.axis == "x"]
    y_side = [d for d in config if d.axis == "y"]
    z_side = [d for d in config if d.is_z_side]
    if len(x_side) > 1 or len(y_side) > 1 or len(z_side) > 1:
        return False
    for d in z_side:
        if d.exponents is None:
            continue  # divisible by any monomial in the weighted sense
        if not pairs:
            continue  # nothing left for the contact monomial to divide against
        a, b = d.exponents
        lam, mu = pairs.first.x_exp, pairs.first.y_exp
        divides_q = lam <= a and mu <= b
        q_integral = a.denominator == 1 and b.denominator == 1
        q_divides = q_integral and a <= lam and b <= mu
        if not (divides_q or q_divides):
            return False
    return True


def order_divisor_subsets(
    all_divisors: tuple[Divisor, ...], first: set, second: set
) -> int:
    """Compare two divisor subsets by age: -1 if the first precedes.

    Subsets are encoded as indicator tuples over the birth-ordered full list
    and compared lexicographically; a subset containing an older divisor has
    a one in an earlier slot, hence the larger tuple, hence precedes.
    """
    ordered = sorted(all_divisors, key=lambda d: d.birth)
    first_births = {d.birth for d in first}
    second_births = {d.birth for d in second}
    ind_first = tuple(1 if d.birth in first_births else 0 for d in ordered)
    ind_second = tuple(1 if d.birth in second_births else 0 for d in ordered)
    if ind_first > ind_second:
        return -1
    if ind_first < ind_second:
        return 1
    return 0
