"""
Fisher market state: prices, bang-per-buck structure, MBB graph and the
equilibrium predicate.
"""

from fractions import Fraction
from typing import Iterable, Optional, Sequence

import networkx as nx

from ..exceptions import EmptyMarketError
from ..models.instance import Allocation, Instance
from ..models.report import Verdict, Witness
from ..models.trace import Metric
from . import core


def mbb_structure(inst: Instance, p: Sequence[Fraction]) -> tuple[tuple[Fraction, ...], tuple[frozenset[int], ...]]:
    """
    Compute MBB ratios alpha_i and MBB sets for every agent.

    Args:
        inst: Canonical instance
        p: Positive price per good

    Returns:
        (alpha, mbb_sets) indexed by agent

    Raises:
        EmptyMarketError: If the instance has no goods
    """
    if inst.m == 0:
        raise EmptyMarketError("MBB ratios are undefined without goods")
    alpha: list[Fraction] = []
    mbb_sets: list[frozenset[int]] = []
    for i in inst.agents():
        ratios = [inst.values[i][e] / p[e] for e in inst.goods()]
        best = max(ratios)
        alpha.append(best)
        mbb_sets.append(frozenset(e for e, ratio in enumerate(ratios) if ratio == best))
    return tuple(alpha), tuple(mbb_sets)


def classify_items(inst: Instance) -> tuple[frozenset[int], frozenset[int]]:
    """
    Split goods into consistently small goods (valued 1 by everyone) and the rest.

    Returns:
        (M_minus, M_plus)
    """
    minus = frozenset(e for e in inst.goods() if all(not inst.is_high(i, e) for i in inst.agents()))
    plus = frozenset(inst.goods()) - minus
    return minus, plus


def scale_prices(p: Sequence[Fraction], c: Fraction) -> tuple[Fraction, ...]:
    """Multiply every price by c."""
    return tuple(price * c for price in p)


class MarketState:
    """
    Mutable (allocation, prices) pair with cached MBB structure.

    Price changes refresh the ratio columns of the touched goods and then
    the per-agent maxima; transfers only move goods between bundles.
    """

    def __init__(self, inst: Instance, owner: Sequence[int], prices: Sequence[Fraction]):
        """
        Initialize the state.

        Args:
            inst: Canonical instance
            owner: Owning agent per good
            prices: Positive price per good
        """
        if len(owner) != inst.m or len(prices) != inst.m:
            raise ValueError("owner and price vectors must have one entry per good")
        if any(price <= 0 for price in prices):
            raise ValueError("prices must be positive")
        if any(not 0 <= i < inst.n for i in owner):
            raise ValueError("owner vector names an unknown agent")
        self.inst = inst
        self.owner: list[int] = list(owner)
        self.prices: list[Fraction] = [Fraction(price) for price in prices]
        self.bundles: list[set[int]] = [set() for _ in range(inst.n)]
        for e, i in enumerate(self.owner):
            self.bundles[i].add(e)
        self._ratios: list[list[Fraction]] = [
            [inst.values[i][e] / self.prices[e] for e in inst.goods()] for i in inst.agents()
        ]
        self.alpha: list[Fraction] = []
        self.mbb_sets: list[frozenset[int]] = []
        self._refresh_mbb()

    @classmethod
    def from_allocation(cls, inst: Instance, X: Allocation, p: Sequence[Fraction]) -> "MarketState":
        return cls(inst, X.owner, p)

    def _refresh_mbb(self) -> None:
        if self.inst.m == 0:
            # No goods: ratios are undefined, every predicate holds vacuously
            self.alpha = [Fraction(0)] * self.inst.n
            self.mbb_sets = [frozenset()] * self.inst.n
            return
        self.alpha = [max(row) for row in self._ratios]
        self.mbb_sets = [
            frozenset(e for e, ratio in enumerate(row) if ratio == best)
            for row, best in zip(self._ratios, self.alpha)
        ]

    def copy(self) -> "MarketState":
        clone = MarketState.__new__(MarketState)
        clone.inst = self.inst
        clone.owner = list(self.owner)
        clone.prices = list(self.prices)
        clone.bundles = [set(bundle) for bundle in self.bundles]
        clone._ratios = [list(row) for row in self._ratios]
        clone.alpha = list(self.alpha)
        clone.mbb_sets = list(self.mbb_sets)
        return clone

    def allocation(self) -> Allocation:
        return Allocation(n=self.inst.n, owner=tuple(self.owner))

    def price_vector(self) -> tuple[Fraction, ...]:
        return tuple(self.prices)

    # Mutations

    def transfer(self, e: int, to: int) -> None:
        """Move good e to agent ``to``."""
        source = self.owner[e]
        self.bundles[source].discard(e)
        self.bundles[to].add(e)
        self.owner[e] = to

    def scale_goods(self, goods: Iterable[int], factor: Fraction) -> None:
        """Multiply the prices of the given goods by factor."""
        touched = False
        for e in goods:
            self.prices[e] *= factor
            for i in self.inst.agents():
                self._ratios[i][e] = self.inst.values[i][e] / self.prices[e]
            touched = True
        if touched:
            self._refresh_mbb()

    # Measures

    def ratio(self, i: int, e: int) -> Fraction:
        """Bang-per-buck of good e for agent i."""
        return self._ratios[i][e]

    def price_of(self, i: int) -> Fraction:
        """Unweighted spending p(X_i)."""
        return core.price_sum(self.bundles[i], self.prices)

    def spending(self, i: int) -> Fraction:
        return core.bundle_spending(self.inst, i, self.bundles[i], self.prices)

    def hat_spending(self, i: int) -> Fraction:
        return core.bundle_hat_spending(self.inst, i, self.bundles[i], self.prices)

    def value(self, i: int) -> Fraction:
        return core.bundle_value(self.inst, i, self.bundles[i])

    def hat_value(self, i: int) -> Fraction:
        return core.bundle_hat_value(self.inst, i, self.bundles[i])

    def metric(self, i: int, mode: Metric) -> Fraction:
        """Weighted spending (SPENDING) or weighted own utility (VALUE)."""
        return self.spending(i) if mode is Metric.SPENDING else self.value(i)

    def hat_metric(self, i: int, mode: Metric) -> Fraction:
        return self.hat_spending(i) if mode is Metric.SPENDING else self.hat_value(i)

    def __repr__(self) -> str:
        return f"MarketState(owner={self.owner}, prices={[str(p) for p in self.prices]})"


def bang_per_buck(state: MarketState, i: int, e: int) -> Fraction:
    """alpha_{i,e} = v_i(e) / p(e)."""
    return state.inst.values[i][e] / state.prices[e]


def build_mbb_graph(state: MarketState) -> nx.DiGraph:
    """
    Build the MBB graph: edge i -> j iff MBB_i meets X_j.

    Self-loops are kept; agents are nodes 0..n-1.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(state.inst.agents())
    for i in state.inst.agents():
        for e in state.mbb_sets[i]:
            graph.add_edge(i, state.owner[e])
    return graph


def bfs_tree(graph: nx.DiGraph, source: int) -> tuple[list[int], dict[int, Optional[int]]]:
    """
    Breadth-first search visiting neighbors in ascending index order.

    Returns:
        (visit order starting with source, parent map)
    """
    order = [source]
    parents: dict[int, Optional[int]] = {source: None}
    for u, v in nx.bfs_edges(graph, source, sort_neighbors=sorted):
        parents[v] = u
        order.append(v)
    return order, parents


def path_to(parents: dict[int, Optional[int]], end: int) -> list[int]:
    """Walk a BFS parent map back from end to the source."""
    path = [end]
    while parents[path[-1]] is not None:
        path.append(parents[path[-1]])  # type: ignore[arg-type]
    path.reverse()
    return path


def reachable_from(graph: nx.DiGraph, i: int) -> frozenset[int]:
    """Agents reachable from i, including i."""
    order, _ = bfs_tree(graph, i)
    return frozenset(order)


def is_equilibrium(state: MarketState) -> Verdict:
    """
    Check that every agent holds only MBB goods.

    Returns:
        Verdict with witness (agent, good, alpha_i, alpha_{i,e}) on failure
    """
    for e in state.inst.goods():
        i = state.owner[e]
        if e not in state.mbb_sets[i]:
            return Verdict.fail(
                "equilibrium",
                Witness(agent=i, good=e, lhs=state.alpha[i], rhs=state.ratio(i, e)),
                note="good is not maximum bang-per-buck for its owner",
            )
    return Verdict.ok("equilibrium")


def price_tier_consistency(state: MarketState) -> Verdict:
    """
    Check that an MBB set reaching the upper price tier contains the whole lowest tier.

    With c the minimum price, every agent whose MBB set contains a good of
    price k*c must also contain every good of price c.
    """
    if state.inst.m == 0:
        return Verdict.ok("price-tiers")
    k = state.inst.k
    lowest = min(state.prices)
    bottom = frozenset(e for e in state.inst.goods() if state.prices[e] == lowest)
    for i in state.inst.agents():
        mbb = state.mbb_sets[i]
        if any(state.prices[e] == k * lowest for e in mbb):
            missing = bottom - mbb
            if missing:
                e = min(missing)
                return Verdict.fail(
                    "price-tiers",
                    Witness(agent=i, good=e, lhs=state.alpha[i], rhs=state.ratio(i, e)),
                    note="MBB set holds a k*c good but misses a good of the lowest price c",
                )
    return Verdict.ok("price-tiers")


def least_agent(state: MarketState, group: Iterable[int], mode: Metric) -> int:
    """Minimum-metric agent of a group, lowest index on ties."""
    return min(group, key=lambda i: (state.metric(i, mode), i))


def big_agent(state: MarketState, mode: Metric) -> int:
    """Agent with the largest hat metric over all agents, lowest index on ties."""
    return min(state.inst.agents(), key=lambda i: (-state.hat_metric(i, mode), i))
