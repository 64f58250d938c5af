"""The desingularization invariant over weighted fractional monomials.

At a chart origin the controlling functions are always monomials times
units on the relevant contact spaces, so the whole coefficient-collection
machinery reduces to lists of weighted monomials ``(x_deg, y_deg, weight)``:

* level 1 lives on {z=0} and collects the trailing coefficient of the
  surface (exponents m*pair, weight m) together with one weight-1 monomial
  per oldest-class divisor (coordinate planes give x or y, contact planes
  give their absorbed monomial, inert planes give nothing);
* each level computes the minimal order/weight ratio, subtracts the orders
  along exceptional planes that are *not* in the oldest classes (recording
  them as the extracted monomial D), counts the divisors whose birth
  precedes the current value of the invariant prefix (the numbers s_i), and
  descends one variable, preferring y over x among the achievers;
* the sequence terminates at 0 (everything exceptional, D selects the next
  center), at infinity (no coefficient functions remain), or immediately
  after the multiplicity for non-transverse states, where the center is the
  origin regardless.

The age bookkeeping is the part that forces progress: a divisor belongs to
class E^i when it already existed at the earliest stage in which the prefix
(nu_1, s_1; ...; nu_i) attained its current value, so repeating the same
kind of blow-up strictly drains the s_i slots even when the nu_i stall.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .divisors import Divisor, DivisorConfig, IncompleteHistory, InconsistentConfiguration
from .pairs import PairList, Shape, classify, multiplicity

logger = logging.getLogger(__name__)


class NotTransversal(Exception):
    """Coefficient machinery requested in the non-transverse regime."""


class ConfigurationOutOfScope(Exception):
    """The collection left the territory of weighted monomials."""


class _Inf:
    """Order of vanishing of the zero function; compares above everything."""

    _instance: Optional["_Inf"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"


INF = _Inf()


def _slot_key(v):
    if v is INF:
        return (1, 0)
    return (0, v)


@dataclass(frozen=True)
class Invariant:
    """The sequence (nu_1, s_1; nu_2, s_2; ...), flattened.

    ``slots`` alternates nu and s values and, unless ``partial``, ends on a
    terminal nu equal to 0 or INF.  Partial invariants (nu_1, s_1) are what
    the engine reports for non-transverse states, where the center is known
    without the rest of the sequence.
    """

    slots: tuple
    partial: bool = False

    def prefix(self, k: int) -> Optional[tuple]:
        """First 2k-1 slots (nu_1, s_1, ..., nu_k), or None if not defined."""
        n = 2 * k - 1
        if len(self.slots) < n:
            return None
        return tuple(self.slots[:n])

    @property
    def terminal(self):
        if self.partial:
            return None
        return self.slots[-1]

    def render(self) -> str:
        parts = []
        slots = list(self.slots)
        while slots:
            nu = slots.pop(0)
            nu_s = "inf" if nu is INF else str(nu)
            if slots:
                s = slots.pop(0)
                parts.append(f"{nu_s},{s}")
            else:
                parts.append(nu_s)
        body = ";".join(parts)
        if self.partial:
            body += ";.."
        return f"({body})"

    def __str__(self) -> str:
        return self.render()


def invariant_of(*slots, partial: bool = False) -> Invariant:
    """Convenience constructor normalizing ints to Fractions in nu slots."""
    out = []
    for i, v in enumerate(slots):
        if v is INF or i % 2 == 1:
            out.append(v)
        else:
            out.append(Fraction(v))
    return Invariant(tuple(out), partial)


def compare_invariants(a: Invariant, b: Invariant) -> int:
    """Lexicographic comparison: -1, 0 or 1.  Total on terminated invariants."""
    if a.partial or b.partial:
        raise ValueError("partial invariants are not totally ordered")
    for va, vb in zip(a.slots, b.slots):
        ka, kb = _slot_key(va), _slot_key(vb)
        if ka < kb:
            return -1
        if ka > kb:
            return 1
    if len(a.slots) != len(b.slots):
        # Well-formed sequences only diverge in length after a terminal
        # value, which the slot comparison above would have caught.
        raise ValueError(f"ill-formed invariant pair {a} / {b}")
    return 0


class WeightedMonomial(NamedTuple):
    """x^a y^b carrying a positive weight; ratios order/weight drive nu."""

    x_deg: Fraction
    y_deg: Fraction
    weight: Fraction

    @property
    def order(self) -> Fraction:
        return self.x_deg + self.y_deg

    def deg(self, axis: str) -> Fraction:
        return self.x_deg if axis == "x" else self.y_deg


def monomial(x_deg, y_deg, weight) -> WeightedMonomial:
    return WeightedMonomial(Fraction(x_deg), Fraction(y_deg), Fraction(weight))


@dataclass
class InvariantResult:
    """Invariant plus everything center selection and diagnostics need."""

    invariant: Invariant
    age_classes: list[tuple[Divisor, ...]] = field(default_factory=list)
    epochs: list[int] = field(default_factory=list)
    drawn: tuple[str, ...] = ()
    terminal_level: Optional[int] = None
    terminal_d: dict[str, Fraction] = field(default_factory=dict)
    terminal_subtractors: dict[str, Divisor] = field(default_factory=dict)
    d_by_level: dict[int, dict[str, Fraction]] = field(default_factory=dict)
    level1_collection: tuple[WeightedMonomial, ...] = ()

    def d_monomial_str(self) -> str:
        if not self.terminal_d:
            return "1"
        parts = []
        for axis in ("x", "y"):
            e = self.terminal_d.get(axis)
            if e:
                parts.append(axis if e == 1 else f"{axis}^{e}")
        return "".join(parts) if parts else "1"


def epoch_start(history: Sequence[Invariant], year: int, prefix: tuple, k: int) -> int:
    """Earliest year from which the k-prefix has continuously equaled `prefix`."""
    y = year
    while y > 0:
        past = history[y - 1].prefix(k)
        if past != prefix:
            break
        y -= 1
    return y


def partition_ages(
    config: DivisorConfig,
    history: Sequence[Invariant],
    year: int,
    prefixes: Sequence[tuple],
) -> list[tuple[Divisor, ...]]:
    """Age classes E^1, E^2, ... of the divisors through this origin.

    ``prefixes[k-1]`` must be the current value of (nu_1, s_1, ..., nu_k).
    Class k collects the not-yet-classified divisors born no later than the
    earliest year in which that prefix attained its current value.
    """
    if len(history) != year:
        raise IncompleteHistory(f"history has {len(history)} entries for year {year}")
    for d in config:
        if d.birth > year:
            raise IncompleteHistory(f"divisor {d} born after year {year}")
    taken: set[int] = set()
    classes: list[tuple[Divisor, ...]] = []
    for k, prefix in enumerate(prefixes, start=1):
        epoch = epoch_start(history, year, prefix, k)
        cls = tuple(d for d in config if d.birth not in taken and d.birth <= epoch)
        taken.update(d.birth for d in cls)
        classes.append(cls)
    return classes


def _level1_collection(m: int, pairs: PairList, oldest: Sequence[Divisor]):
    coll: list[WeightedMonomial] = []
    if pairs:
        first = pairs.first
        coll.append(WeightedMonomial(m * first.x_exp, m * first.y_exp, Fraction(m)))
    for d in oldest:
        if d.axis == "x":
            coll.append(monomial(1, 0, 1))
        elif d.axis == "y":
            coll.append(monomial(0, 1, 1))
        elif d.is_z_side and d.exponents is not None:
            coll.append(WeightedMonomial(d.exponents[0], d.exponents[1], Fraction(1)))
    return tuple(coll)


def build_coefficient_collection(state) -> tuple[tuple[WeightedMonomial, ...], tuple[Divisor, ...]]:
    """Level-1 coefficient collection on {z=0} plus the oldest divisor class.

    Raises NotTransversal for non-transverse states, where the machinery is
    never needed (the center is the origin outright).
    """
    if classify(state.pairs) is Shape.NON_TRANSVERSAL:
        raise NotTransversal("collection requested below transversality")
    mult = multiplicity(state.m, state.pairs)
    epoch = epoch_start(state.history, state.year, (mult,), 1)
    oldest = tuple(d for d in state.config if d.birth <= epoch)
    return _level1_collection(state.m, state.pairs, oldest), oldest


def compute_invariant(state) -> InvariantResult:
    """Full invariant of a chart state (duck-typed: m, pairs, config, history, year).

    For non-transverse states only (nu_1, s_1) is computed and the result is
    marked partial.  Otherwise the level loop runs until a terminal 0 or
    infinity, recording extracted monomials, age classes and drawn contact
    variables along the way.
    """
    m: int = state.m
    pairs: PairList = state.pairs
    config: DivisorConfig = state.config
    history = state.history
    year: int = state.year
    if len(history) != year:
        raise IncompleteHistory(f"history has {len(history)} entries for year {year}")

    mult = multiplicity(m, pairs)
    e1_epoch = epoch_start(history, year, (mult,), 1)
    e1 = tuple(d for d in config if d.birth <= e1_epoch)
    result = InvariantResult(invariant=Invariant((mult, len(e1)), partial=True))
    result.age_classes.append(e1)
    result.epochs.append(e1_epoch)

    if classify(pairs) is Shape.NON_TRANSVERSAL:
        return result

    slots: list = [mult, len(e1)]
    coll = list(_level1_collection(m, pairs, e1))
    result.level1_collection = tuple(coll)

    subtractors: dict[str, Divisor] = {}
    for d in config:
        if d in e1:
            continue
        if d.is_z_side and d.exponents is None:
            # A z-plane born at a chain exit that kept the multiplicity;
            # it coincides with the contact space and is inert throughout.
            continue
        if d.axis is None or d.kind.name.startswith("CONTACT"):
            raise InconsistentConfiguration(
                f"{d.label()} (born {d.birth}) outside the oldest class"
            )
        subtractors[d.axis] = d

    remaining = ["x", "y"]
    drawn = ["z"]
    taken = {d.birth for d in e1}
    level = 2
    while True:
        if not coll:
            terminal = Fraction(0) if level == 2 else INF
            slots.append(terminal)
            result.terminal_level = level
            result.terminal_d = {}
            break
        mu = min(c.order / c.weight for c in coll)
        extracted: dict[str, Fraction] = {}
        for axis in remaining:
            if axis not in subtractors:
                continue
            val = min(c.deg(axis) / c.weight for c in coll)
            if val:
                extracted[axis] = val
        nu = mu - sum(extracted.values(), Fraction(0))
        if nu < 0:
            raise ConfigurationOutOfScope(f"negative residual order {nu}")
        result.d_by_level[level] = dict(extracted)
        if nu == 0:
            slots.append(Fraction(0))
            result.terminal_level = level
            result.terminal_d = dict(extracted)
            result.terminal_subtractors = {
                ax: d for ax, d in subtractors.items() if ax in remaining
            }
            if level > 2:
                logger.info("terminal zero at level %d (D=%s)", level, extracted)
            break

        prefix = tuple(slots) + (nu,)
        epoch = epoch_start(history, year, prefix, level)
        new_class = tuple(
            d for d in config if d.birth not in taken and d.birth <= epoch
        )
        taken.update(d.birth for d in new_class)
        result.age_classes.append(new_class)
        result.epochs.append(epoch)
        slots.extend([nu, len(new_class)])

        next_coll: list[WeightedMonomial] = []
        for c in coll:
            xd = c.x_deg - c.weight * extracted.get("x", Fraction(0))
            yd = c.y_deg - c.weight * extracted.get("y", Fraction(0))
            if xd < 0 or yd < 0:
                raise ConfigurationOutOfScope(f"over-extraction of {c}")
            next_coll.append(WeightedMonomial(xd, yd, c.weight * nu))
        if nu < 1:
            logger.info("companion monomial included at level %d (nu=%s)", level, nu)
            next_coll.append(
                WeightedMonomial(
                    extracted.get("x", Fraction(0)),
                    extracted.get("y", Fraction(0)),
                    1 - nu,
                )
            )
        for d in new_class:
            subtractors.pop(d.axis, None)
            if d.axis == "x" and "x" in remaining:
                next_coll.append(monomial(1, 0, 1))
            elif d.axis == "y" and "y" in remaining:
                next_coll.append(monomial(0, 1, 1))

        achievers = [c for c in next_coll if c.order == c.weight]
        if not achievers:
            raise ConfigurationOutOfScope(
                f"no maximal-contact candidate at level {level}: {next_coll}"
            )
        available = set()
        for c in achievers:
            for axis in remaining:
                if c.deg(axis) > 0 and axis not in subtractors:
                    # A coordinate whose plane is still being factored out
                    # (not yet in an age class) is exceptional data, not
                    # maximal-contact material; aged planes are fair game.
                    available.add(axis)
        if not available:
            raise ConfigurationOutOfScope("achiever with no drawable variable left")
        axis = "y" if "y" in available else "x"

        coll = []
        for c in next_coll:
            e = c.deg(axis)
            if e < c.weight:
                coll.append(
                    WeightedMonomial(
                        c.x_deg if axis == "y" else Fraction(0),
                        c.y_deg if axis == "x" else Fraction(0),
                        c.weight - e,
                    )
                )
        remaining.remove(axis)
        drawn.append(axis)
        level += 1
        if not remaining and coll:
            raise ConfigurationOutOfScope(
                f"units left after consuming all variables: {coll}"
            )

    result.invariant = Invariant(tuple(slots))
    result.drawn = tuple(drawn)
    return result
