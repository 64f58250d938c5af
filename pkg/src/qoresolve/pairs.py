"""Exact arithmetic on characteristic exponent pairs.

A quasi-ordinary surface germ ``z^m + c_{m-1}(x,y) z^{m-1} + ... + c_0(x,y)``
is encoded here purely by its degree ``m`` and the list of exponent pairs
``(x_exp, y_exp)`` of the fractional monomials appearing in differences of
its roots.  Everything in this module is exact rational arithmetic: no
floating point is used anywhere in the package.

The central fact exploited throughout is Lipman's transformation table: a
quadratic transform (blow-up of the origin, examined in the x-, y- or
z-chart) or a monoidal transform (blow-up of a coordinate axis) maps an
exponent-pair list to a new exponent-pair list by explicit rational
formulas, with the non-transverse quadratic rows additionally rescaling the
degree.  ``transform_pairs`` implements that table verbatim; ``normalize``
implements the three coordinate moves (absorb integral terms / invert /
swap x and y) that bring a raw pair list back to normalized form.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional


class PairError(Exception):
    """Base class for all structural errors on exponent-pair data."""


class OrderViolation(PairError):
    """Pair list is not totally ordered by componentwise <=."""


class NegativeExponent(PairError):
    """An exponent pair has a negative component."""


class UnsupportedInversion(PairError):
    """Inversion requested on a state the single-pair formula cannot handle."""


class IllegalMove(PairError):
    """A blow-up move whose preconditions the current pair list violates."""


class NonIntegralDegree(PairError):
    """A degree rescaling m' = m * factor produced a non-integer."""


class NonIntegralMultiplicity(PairError):
    """m * (x_exp + y_exp) is not an integer; the state is corrupted."""


class DeepIntegralPair(PairError):
    """A pair with index >= 2 became integral; outside supported territory."""


class CharPair(NamedTuple):
    """One characteristic exponent pair (exponent of x, exponent of y)."""

    x_exp: Fraction
    y_exp: Fraction

    @property
    def total(self) -> Fraction:
        return self.x_exp + self.y_exp

    def is_integral(self) -> bool:
        return self.x_exp.denominator == 1 and self.y_exp.denominator == 1

    def swapped(self) -> "CharPair":
        return CharPair(self.y_exp, self.x_exp)

    def __str__(self) -> str:
        return f"({self.x_exp},{self.y_exp})"


def pair(x_exp, y_exp) -> CharPair:
    """Build a CharPair from anything Fraction() accepts ('2/3', 2, ...)."""
    return CharPair(Fraction(x_exp), Fraction(y_exp))


@dataclass(frozen=True)
class GhostMonomial:
    """Exponents (a, b) of an absorbed integral part q(x,y) = x^a y^b * unit.

    Produced when normalization removes a fully integral leading pair (or an
    integral tail) by the substitution z -> z - q.  ``dominant`` records which
    side of the weighted-divisibility relation q ended up on: True means q
    weighted-divides the residual coefficient monomial and therefore controls
    the invariant; False means it is divisible by it and stays inert.
    """

    x_exp: Fraction
    y_exp: Fraction
    dominant: bool = True

    def __str__(self) -> str:
        return f"({self.x_exp},{self.y_exp})"


class Move(enum.Enum):
    """The legal elementary transforms of a quasi-ordinary pair list."""

    MONOIDAL_X = "monoidal center (x,z)"
    MONOIDAL_Y = "monoidal center (y,z)"
    QUAD_TRANSV_X = "quadratic x-chart, transverse"
    QUAD_TRANSV_Y = "quadratic y-chart, transverse"
    QUAD_NONTRANSV_X = "quadratic x-chart, non-transverse"
    QUAD_NONTRANSV_Y = "quadratic y-chart, non-transverse"
    QUAD_NONTRANSV_Z = "quadratic z-chart, non-transverse"


class Shape(enum.Enum):
    """Coarse classification of a pair list by its leading pair."""

    SMOOTH = "smooth"
    TRANSVERSAL = "transversal"
    NON_TRANSVERSAL = "non-transversal"


@dataclass(frozen=True)
class PairList:
    """A componentwise totally ordered list of characteristic pairs."""

    pairs: tuple[CharPair, ...]

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __bool__(self) -> bool:
        return bool(self.pairs)

    @property
    def first(self) -> CharPair:
        return self.pairs[0]

    @property
    def denominator(self) -> int:
        """Least common denominator of every exponent in the list (1 if empty)."""
        den = 1
        for p in self.pairs:
            den = math.lcm(den, p.x_exp.denominator, p.y_exp.denominator)
        return den

    def __str__(self) -> str:
        return "[" + ", ".join(str(p) for p in self.pairs) + "]"


def pair_list(*entries) -> PairList:
    """Build and validate a PairList from (x_exp, y_exp) tuples."""
    return validate_pairs(PairList(tuple(pair(a, b) for a, b in entries)))


def validate_pairs(pairs: PairList) -> PairList:
    """Check nonnegativity and componentwise total order; return the input.

    Raises NegativeExponent or OrderViolation otherwise.  An empty list is
    vacuously valid (smooth branch).
    """
    prev: Optional[CharPair] = None
    for p in pairs:
        if p.x_exp < 0 or p.y_exp < 0:
            raise NegativeExponent(f"negative exponent in {p}")
        if prev is not None and not (prev.x_exp <= p.x_exp and prev.y_exp <= p.y_exp):
            raise OrderViolation(f"{prev} and {p} are not componentwise ordered")
        prev = p
    return pairs


def is_normalized(m: int, pairs: PairList) -> tuple[bool, Optional[int]]:
    """Test the three normalization conditions; return (ok, first violated).

    Condition 1: the leading pair is not fully integral.
    Condition 2: if the leading pair sums below 1, both entries are positive.
    Condition 3: the x-exponent tuple dominates the y-exponent tuple
    lexicographically, compared on fractional parts.  Integer parts are the
    artifact of how far each coordinate direction has been blown down, so
    only the residues mod 1 distinguish the two labelings canonically;
    this reading also keeps (2/3, 4/3) normalized while rejecting
    (1/3, 2/3), which the plain comparison cannot do.

    An empty list (smooth branch) is considered normalized.
    """
    if not pairs:
        return True, None
    first = pairs.first
    if first.is_integral():
        return False, 1
    if first.total < 1 and (first.x_exp == 0 or first.y_exp == 0):
        return False, 2
    xs = tuple(p.x_exp % 1 for p in pairs)
    ys = tuple(p.y_exp % 1 for p in pairs)
    if xs < ys:
        return False, 3
    return True, None


def classify(pairs: PairList) -> Shape:
    """Smooth if no pairs; otherwise transversality of the leading pair."""
    if not pairs:
        return Shape.SMOOTH
    return Shape.NON_TRANSVERSAL if pairs.first.total < 1 else Shape.TRANSVERSAL


def multiplicity(m: int, pairs: PairList) -> Fraction:
    """Order of the germ at the origin: m * min(1, x_exp1 + y_exp1).

    Always an integer for genuine quasi-ordinary data; a fractional value
    means the (m, pairs) state is corrupted and raises.
    """
    if not pairs:
        return Fraction(m)
    mult = m * min(Fraction(1), pairs.first.total)
    if mult.denominator != 1:
        raise NonIntegralMultiplicity(f"m={m}, pairs={pairs} give order {mult}")
    return mult


def _move_legal(pairs: PairList, move: Move) -> bool:
    if move is Move.MONOIDAL_X:
        # Center (x,z) is the y-axis; permissible when f vanishes to full
        # order along it, i.e. x_exp1 >= 1.  A smooth branch contains the
        # axis trivially.
        return not pairs or pairs.first.x_exp >= 1
    if move is Move.MONOIDAL_Y:
        return not pairs or pairs.first.y_exp >= 1
    shape = classify(pairs)
    if move in (Move.QUAD_TRANSV_X, Move.QUAD_TRANSV_Y):
        return shape in (Shape.TRANSVERSAL, Shape.SMOOTH)
    return shape is Shape.NON_TRANSVERSAL


def transform_pairs(m: int, pairs: PairList, move: Move) -> tuple[int, PairList]:
    """Apply one row of the transformation table to every pair.

    Returns the new degree and the raw (not yet re-normalized) pair list.
    The non-transverse rows use the leading pair's entries inside the
    formula for every index; they also rescale the degree:

    * x-chart: m' = y_exp1 * m
    * y-chart: m' = x_exp1 * m
    * z-chart: m' = m - m*(x_exp1 + y_exp1)

    Each rescaled degree is asserted to be a positive integer.
    """
    if not _move_legal(pairs, move):
        raise IllegalMove(f"{move.name} illegal on {pairs}")

    if move is Move.MONOIDAL_X:
        new = [CharPair(p.x_exp - 1, p.y_exp) for p in pairs]
        return m, PairList(tuple(new))
    if move is Move.MONOIDAL_Y:
        new = [CharPair(p.x_exp, p.y_exp - 1) for p in pairs]
        return m, PairList(tuple(new))
    if move is Move.QUAD_TRANSV_X:
        new = [CharPair(p.total - 1, p.y_exp) for p in pairs]
        return m, PairList(tuple(new))
    if move is Move.QUAD_TRANSV_Y:
        new = [CharPair(p.x_exp, p.total - 1) for p in pairs]
        return m, PairList(tuple(new))

    first = pairs.first
    lam1, mu1 = first.x_exp, first.y_exp
    if move is Move.QUAD_NONTRANSV_X:
        if mu1 == 0:
            raise IllegalMove("non-transverse x-chart needs a positive y-exponent")
        new = [
            CharPair(
                p.x_exp + (1 + p.y_exp) * (1 - lam1) / mu1 - 2,
                (1 + p.y_exp) / mu1 - 1,
            )
            for p in pairs
        ]
        new_m = mu1 * m
    elif move is Move.QUAD_NONTRANSV_Y:
        if lam1 == 0:
            raise IllegalMove("non-transverse y-chart needs a positive x-exponent")
        new = [
            CharPair(
                (1 + p.x_exp) / lam1 - 1,
                p.y_exp + (1 + p.x_exp) * (1 - mu1) / lam1 - 2,
            )
            for p in pairs
        ]
        new_m = lam1 * m
    elif move is Move.QUAD_NONTRANSV_Z:
        denom = 1 - lam1 - mu1
        new = [
            CharPair(
                (p.x_exp * (1 - mu1) + p.y_exp * lam1) / denom,
                (p.x_exp * mu1 + p.y_exp * (1 - lam1)) / denom,
            )
            for p in pairs
        ]
        new_m = m - m * (lam1 + mu1)
    else:  # pragma: no cover - exhaustive enum
        raise IllegalMove(str(move))

    if new_m.denominator != 1 or new_m <= 0:
        raise NonIntegralDegree(f"{move.name} on m={m}, {pairs} gives m'={new_m}")
    return int(new_m), validate_pairs(PairList(tuple(new)))


def drop_integral_first(
    m: int, pairs: PairList
) -> tuple[PairList, Optional[GhostMonomial]]:
    """Remove a fully integral leading pair, recording it as a ghost monomial.

    Dominance of the ghost is decided componentwise against the new leading
    pair: x^a y^b divides x^l y^u exactly when a <= l and b <= u (with no
    remaining pair the ghost controls by default).  A fully integral pair at
    index >= 2 is outside what the transformation table promises and raises.
    """
    for p in tuple(pairs)[1:]:
        if p.is_integral():
            raise DeepIntegralPair(f"pair {p} beyond the first is integral")
    if not pairs or not pairs.first.is_integral():
        return pairs, None
    first = pairs.first
    rest = PairList(tuple(pairs)[1:])
    if rest:
        nxt = rest.first
        dominant = first.x_exp <= nxt.x_exp and first.y_exp <= nxt.y_exp
    else:
        dominant = True
    return rest, GhostMonomial(first.x_exp, first.y_exp, dominant)


class InversionResult(NamedTuple):
    m: int
    pairs: PairList
    axis: str  # 'x' or 'y': which coordinate was exchanged with z


def invert_single_pair(m: int, pairs: PairList) -> InversionResult:
    """Exchange z with the vanishing-exponent coordinate of a single pair.

    Handles the two condition-2 shapes the resolution actually produces:
    a single pair (0, q) or (q, 0) with 0 < q < 1.  The branch then reads as
    a cover of the (x,z)- resp. (y,z)-plane of degree q*m with the exponent
    inverted to 1/q.  Anything richer raises UnsupportedInversion.
    """
    if len(pairs) != 1:
        raise UnsupportedInversion(f"inversion on {len(pairs)} pairs is not supported")
    first = pairs.first
    if first.total >= 1 or (first.x_exp > 0 and first.y_exp > 0):
        raise UnsupportedInversion(f"{first} does not violate condition 2")
    if first.x_exp == 0 and first.y_exp == 0:
        raise UnsupportedInversion("unit branch cannot be inverted")
    q = first.total  # the single nonzero exponent
    new_m = q * m
    if new_m.denominator != 1 or new_m <= 0:
        raise NonIntegralDegree(f"inversion of {first} at m={m} gives m'={new_m}")
    if first.x_exp == 0:
        # swap y and z; the root becomes y = z^(1/q) * unit
        return InversionResult(int(new_m), PairList((CharPair(Fraction(0), 1 / q),)), "y")
    return InversionResult(int(new_m), PairList((CharPair(1 / q, Fraction(0)),)), "x")


class NormalizeResult(NamedTuple):
    m: int
    pairs: PairList
    ghost: Optional[GhostMonomial]
    applied_moves: tuple[str, ...]


def normalize(m: int, pairs: PairList) -> NormalizeResult:
    """Bring (m, pairs) to normalized form by coordinate moves.

    Intended for *input-time* normalization, where coordinates carry no
    exceptional-divisor meaning yet, so all three moves are available:

    * move i   -- drop a fully integral leading pair into a ghost monomial;
    * move ii  -- invert a single condition-2-violating pair;
    * move iii -- swap the roles of x and y to restore condition 3.

    The returned move log uses the labels 'i', 'ii', 'iii'.  Mid-resolution
    normalization inside the driver deliberately never applies move iii (the
    coordinates are pinned by the divisors there); it reuses the move i/ii
    helpers directly.
    """
    validate_pairs(pairs)
    moves: list[str] = []
    ghost: Optional[GhostMonomial] = None
    for _ in range(8):  # each move strictly simplifies; 8 is generous
        ok, cond = is_normalized(m, pairs)
        if ok:
            return NormalizeResult(m, pairs, ghost, tuple(moves))
        if cond == 2:
            m, pairs, _axis = invert_single_pair(m, pairs)
            moves.append("ii")
        elif cond == 1:
            pairs, dropped = drop_integral_first(m, pairs)
            if dropped is not None:
                if ghost is not None:
                    raise UnsupportedInversion("two integral pairs in one normalization")
                ghost = dropped
            moves.append("i")
        else:  # cond == 3
            pairs = validate_pairs(PairList(tuple(p.swapped() for p in pairs)))
            if ghost is not None:
                ghost = GhostMonomial(ghost.y_exp, ghost.x_exp, ghost.dominant)
            moves.append("iii")
    raise PairError(f"normalization of m={m}, {pairs} did not terminate")
