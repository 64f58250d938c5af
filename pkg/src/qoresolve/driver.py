"""Canonical center selection, chart transitions, and the resolution tree.

Every node of the tree is a complete chart state: degree, exponent pairs,
the divisors through the chart origin, and the history of invariant values
along the path (which the age bookkeeping consumes).  Transitions compose
the pair table, the divisor rules, and mid-run normalization:

* non-transverse x-/y-charts exchange y resp. x with z and absorb the
  integral part of the new branch (the exchanged coordinate plane becomes
  the carrier of the absorbed monomial);
* a single pair (0, q) or (q, 0) with q < 1 forces the inversion move,
  exchanging the vanishing coordinate with z;
* a fully integral leading pair is dropped into a ghost monomial.

Center selection is exactly the terminal-value case split: origin for
non-transverse states, the last maximal-contact space at terminal infinity,
and the support of the extracted monomial (tie-broken by divisor age) at
terminal zero.  Everything is deterministic: child order is chart order,
and birth years are tree depths, so two runs produce identical trees no
matter how subtree expansion is scheduled.
"""

from __future__ import annotations

import enum
import logging
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

from . import divisors as dv
from . import invariant as iv
from . import pairs as pr
from .divisors import DivisorConfig, InconsistentConfiguration
from .invariant import Invariant, InvariantResult, compute_invariant
from .pairs import (
    GhostMonomial,
    Move,
    PairList,
    Shape,
    UnsupportedInversion,
    classify,
    drop_integral_first,
    invert_single_pair,
    multiplicity,
    normalize,
    transform_pairs,
    validate_pairs,
)

logger = logging.getLogger(__name__)


class DriverError(Exception):
    pass


class AlreadyResolved(DriverError):
    """Center requested for a state that needs no further blow-ups."""


class StepCapExceeded(DriverError):
    """The tree exceeded the safety cap; by the theory this is a bug."""


class Center(enum.Enum):
    ORIGIN = "origin"
    X_AXIS = "x-axis"  # the x-axis {y=z=0}, center ideal (y,z)
    Y_AXIS = "y-axis"  # the y-axis {x=z=0}, center ideal (x,z)


def center_name(center: Center) -> str:
    return center.value


@dataclass(frozen=True)
class ChartState:
    """Complete algorithm state at one chart origin."""

    m: int
    pairs: PairList
    ghost: Optional[GhostMonomial]
    config: DivisorConfig
    history: tuple[Invariant, ...]
    year: int
    cycle_start: int = 0
    input_moves: tuple[str, ...] = ()

    @property
    def cycle_year(self) -> int:
        return self.year - self.cycle_start

    def summary(self) -> str:
        return f"m={self.m} pairs={self.pairs} E={self.config}"

    def canonical_key(self) -> tuple:
        """Shift-independent key determining the whole subtree below this state.

        Age-class epochs never reach back past the start of the current
        multiplicity cycle (the multiplicity differed before it), so history
        before ``cycle_start`` is dead and birth years matter only relative
        to it; divisors born earlier are equivalent to divisors born exactly
        then.  Two states with equal keys generate identical subtrees up to
        a uniform shift of all years, which is what lets repeated
        verification work be shared.
        """
        base = self.cycle_start
        divisors = tuple(
            (
                d.kind.value,
                d.exponents,
                d.dominant,
                max(d.birth - base, 0),
            )
            for d in self.config
        )
        live = tuple(h.slots for h in self.history[base:])
        return (self.m, tuple(self.pairs), divisors, live)


def initial_state(m: int, pairs: PairList) -> ChartState:
    """Normalize raw input data and wrap it as the root chart state."""
    validate_pairs(pairs)
    norm = normalize(m, pairs)
    if norm.applied_moves:
        logger.info(
            "input (m=%s, %s) normalized to (m=%s, %s) via moves %s",
            m, pairs, norm.m, norm.pairs, list(norm.applied_moves),
        )
    return ChartState(
        m=norm.m,
        pairs=norm.pairs,
        ghost=norm.ghost,
        config=DivisorConfig(),
        history=(),
        year=0,
        input_moves=norm.applied_moves,
    )


def is_resolved(state: ChartState, result: Optional[InvariantResult] = None) -> bool:
    """Terminal test: smooth, no pairs, and invariant (1,0;0)."""
    if state.m != 1 or state.pairs:
        return False
    if result is None:
        result = compute_invariant(state)
    return result.invariant.slots == (Fraction(1), 0, Fraction(0))


def select_center(state: ChartState, result: Optional[InvariantResult] = None) -> Center:
    """The canonical center for a not-yet-resolved chart state."""
    if result is None:
        result = compute_invariant(state)
    if is_resolved(state, result):
        raise AlreadyResolved(state.summary())

    if classify(state.pairs) is Shape.NON_TRANSVERSAL:
        return Center.ORIGIN

    inv = result.invariant
    if inv.terminal is iv.INF:
        drawn = set(result.drawn)
        if {"x", "y"} <= drawn:
            return Center.ORIGIN
        return Center.X_AXIS if "y" in drawn else Center.Y_AXIS

    # terminal zero: the extracted monomial drives the choice
    if result.terminal_level and result.terminal_level > 2:
        logger.info("terminal zero beyond level 2; selecting the origin")
        return Center.ORIGIN
    dx = result.terminal_d.get("x", Fraction(0))
    dy = result.terminal_d.get("y", Fraction(0))
    if dx >= 1 and dy >= 1:
        xdiv = result.terminal_subtractors["x"]
        ydiv = result.terminal_subtractors["y"]
        cmp = dv.order_divisor_subsets(state.config.divisors, {xdiv}, {ydiv})
        return Center.Y_AXIS if cmp < 0 else Center.X_AXIS
    if dx >= 1:
        return Center.Y_AXIS
    if dy >= 1:
        return Center.X_AXIS
    if dx + dy >= 1:
        return Center.ORIGIN
    raise iv.ConfigurationOutOfScope(
        f"terminal zero with no usable center at {state.summary()}"
    )


def relevant_charts(state: ChartState, center: Center) -> tuple[str, ...]:
    """Charts whose origin the strict transform can actually pass through."""
    if center is Center.ORIGIN:
        if classify(state.pairs) is Shape.NON_TRANSVERSAL:
            return ("x", "y", "z")
        return ("x", "y")
    return ("y",) if center is Center.X_AXIS else ("x",)


_MOVE_OF = {
    (Center.ORIGIN, "x", True): Move.QUAD_NONTRANSV_X,
    (Center.ORIGIN, "y", True): Move.QUAD_NONTRANSV_Y,
    (Center.ORIGIN, "z", True): Move.QUAD_NONTRANSV_Z,
    (Center.ORIGIN, "x", False): Move.QUAD_TRANSV_X,
    (Center.ORIGIN, "y", False): Move.QUAD_TRANSV_Y,
    (Center.X_AXIS, "y", False): Move.MONOIDAL_Y,
    (Center.Y_AXIS, "x", False): Move.MONOIDAL_X,
}

_NONTRANSV_QUADS = (Move.QUAD_NONTRANSV_X, Move.QUAD_NONTRANSV_Y, Move.QUAD_NONTRANSV_Z)


def _condition2_violated(pairs: PairList) -> bool:
    if not pairs:
        return False
    first = pairs.first
    return first.total < 1 and (first.x_exp == 0 or first.y_exp == 0)


def blow_up_chart(
    state: ChartState,
    center: Center,
    chart: str,
    result: Optional[InvariantResult] = None,
) -> ChartState:
    """One blow-up in one chart, with mid-run normalization applied.

    Mid-run normalization never exchanges x and y (the coordinates are tied
    to divisor identities); it only absorbs integral parts and performs the
    forced coordinate inversion, mirroring both on the divisor set.
    """
    if chart not in relevant_charts(state, center):
        raise pr.IllegalMove(f"chart {chart!r} irrelevant for center {center}")
    if result is None:
        result = compute_invariant(state)
    nontransv = classify(state.pairs) is Shape.NON_TRANSVERSAL
    move = _MOVE_OF[(center, chart, nontransv)]
    birth = state.year + 1

    new_m, raw = transform_pairs(state.m, state.pairs, move)
    config = dv.transform_divisors(state.config, move, birth)
    if move is Move.QUAD_NONTRANSV_X:
        config = dv.swap_roles(config, "y")
    elif move is Move.QUAD_NONTRANSV_Y:
        config = dv.swap_roles(config, "x")

    new_pairs, ghost = drop_integral_first(new_m, raw)
    if move in _NONTRANSV_QUADS:
        config = dv.absorb_ghost(config, ghost)
    elif ghost is not None:
        raise InconsistentConfiguration(
            f"{move.name} produced an integral pair {ghost} on {state.summary()}"
        )

    if _condition2_violated(new_pairs):
        inv_m, inv_pairs, axis = invert_single_pair(new_m, new_pairs)
        config = dv.swap_roles(config, axis)
        new_pairs, inv_ghost = drop_integral_first(inv_m, inv_pairs)
        config = dv.absorb_ghost(config, inv_ghost)
        new_m = inv_m
        if inv_ghost is not None:
            ghost = inv_ghost
        if _condition2_violated(new_pairs):
            raise UnsupportedInversion(f"inversion left {new_pairs} unnormalized")

    validate_pairs(new_pairs)
    if new_pairs and new_pairs.first.is_integral():
        raise InconsistentConfiguration(f"integral leading pair {new_pairs}")

    old_mult = multiplicity(state.m, state.pairs)
    new_mult = multiplicity(new_m, new_pairs)
    if new_mult > old_mult:
        raise InconsistentConfiguration(
            f"multiplicity rose {old_mult} -> {new_mult} on {move.name}"
        )
    dropped = new_mult < old_mult
    if dropped and not dv.is_general_configuration(config, new_pairs, ghost):
        raise InconsistentConfiguration(
            f"divisors {config} not a general configuration after drop"
        )

    return ChartState(
        m=new_m,
        pairs=new_pairs,
        ghost=ghost,
        config=config,
        history=state.history + (result.invariant,),
        year=state.year + 1,
        cycle_start=state.year + 1 if dropped else state.cycle_start,
    )


class Edge(NamedTuple):
    chart: str
    node: "TreeNode"


@dataclass
class TreeNode:
    state: ChartState
    result: InvariantResult
    center: Optional[Center] = None
    children: tuple[Edge, ...] = ()

    @property
    def resolved(self) -> bool:
        return self.center is None

    def walk(self):
        yield self
        for edge in self.children:
            yield from edge.node.walk()


@dataclass
class ResolutionTree:
    root: TreeNode

    @property
    def node_count(self) -> int:
        return sum(1 for _ in self.root.walk())

    def path(self, charts: Sequence[str]) -> list[TreeNode]:
        """Nodes along the given chart choices starting at the root."""
        nodes = [self.root]
        for chart in charts:
            nxt = {e.chart: e.node for e in nodes[-1].children}
            if chart not in nxt:
                raise KeyError(f"no {chart!r}-chart child at year {nodes[-1].state.year}")
            nodes.append(nxt[chart])
        return nodes

    def leftmost_path(self) -> list[TreeNode]:
        nodes = [self.root]
        while nodes[-1].children:
            nodes.append(nodes[-1].children[0].node)
        return nodes


class _Budget:
    def __init__(self, cap: int):
        self.cap = cap
        self.used = 0
        self._lock = threading.Lock()

    def take(self) -> None:
        with self._lock:
            self.used += 1
            if self.used > self.cap:
                raise StepCapExceeded(f"more than {self.cap} chart states expanded")


def _expand(state: ChartState, budget: _Budget) -> TreeNode:
    budget.take()
    result = compute_invariant(state)
    node = TreeNode(state=state, result=result)
    if is_resolved(state, result):
        return node
    center = select_center(state, result)
    node.center = center
    edges = []
    for chart in relevant_charts(state, center):
        child = blow_up_chart(state, center, chart, result)
        edges.append(Edge(chart, _expand(child, budget)))
    node.children = tuple(edges)
    return node


def resolve(initial: ChartState, step_cap: int = 10000, workers: int = 1) -> ResolutionTree:
    """Expand the full resolution tree depth-first.

    ``workers > 1`` expands the root's child subtrees concurrently; the
    output is byte-identical to the sequential run because every node is a
    pure function of its path.
    """
    if step_cap <= 0:
        raise ValueError("step_cap must be positive")
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)
    budget = _Budget(step_cap)
    if workers <= 1:
        return ResolutionTree(_expand(initial, budget))

    budget.take()
    result = compute_invariant(initial)
    root = TreeNode(state=initial, result=result)
    if is_resolved(initial, result):
        return ResolutionTree(root)
    center = select_center(initial, result)
    root.center = center
    charts = relevant_charts(initial, center)
    states = [blow_up_chart(initial, center, c, result) for c in charts]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        subtrees = list(pool.map(lambda s: _expand(s, budget), states))
    root.children = tuple(Edge(c, n) for c, n in zip(charts, subtrees))
    return ResolutionTree(root)


def format_trace(
    tree: ResolutionTree, path: Union[str, Sequence[str]] = "leftmost"
) -> str:
    """Year-by-year log of one path (or of every path with ``path='all'``)."""
    if path == "all":
        blocks = []
        for leaf_path in _all_paths(tree.root):
            charts = [e for e, _ in leaf_path[1:]]
            nodes = [n for _, n in leaf_path]
            blocks.append(
                "path " + ("/".join(charts) if charts else "<root>") + "\n"
                + _format_path(nodes)
            )
        return "\n\n".join(blocks)
    if path == "leftmost":
        nodes = tree.leftmost_path()
    else:
        nodes = tree.path(list(path))
    return _format_path(nodes)


def _all_paths(root: TreeNode):
    if not root.children:
        yield [("", root)]
        return
    for edge in root.children:
        for rest in _all_paths(edge.node):
            yield [("", root), (edge.chart, rest[0][1])] + list(rest[1:])


def _format_path(nodes: list[TreeNode]) -> str:
    lines = []
    for i, node in enumerate(nodes):
        state = node.state
        inv = node.result.invariant.render()
        if node.resolved:
            lines.append(
                f"Year {state.cycle_year}: inv={inv} center=- "
                f"m={state.m} pairs={state.pairs} E={state.config}"
            )
            lines.append(f"resolved: inv={inv}")
            break
        chart = ""
        if i + 1 < len(nodes):
            for edge in node.children:
                if edge.node is nodes[i + 1]:
                    chart = edge.chart
                    break
        d2 = node.result.d_monomial_str()
        lines.append(
            f"Year {state.cycle_year}: inv={inv} center={center_name(node.center)}"
            + (f" chart={chart}" if chart else "")
            + f" m={state.m} pairs={state.pairs} E={state.config} D2={d2}"
        )
    return "\n".join(lines)
