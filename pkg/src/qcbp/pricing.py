"""Pricing for column generation: find independent sets whose dual weight beats 1.

The sampler path embeds the dual-positive subproblem on a register, runs the
adiabatic pulse, samples bitstrings, and keeps those that are independent,
improving, and new. A classical branch-and-bound MWIS provides the exact
safeguard that certifies termination. Registers, pulses, and final states are
cached per subproblem vertex set because the search revisits subgraphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .embedding import EmbedParams, Register, audit, embed
from .emulator import EmulatorConfig, PulseSchedule, StateVector, build_adiabatic_pulse, evolve, sample
from .graphs import Graph, expand_mask, iter_bits, mask_of
from .rmp import ColumnPool

# Must stay above the master's optimality tolerance (1e-7): at a solved master,
# every column already in the model satisfies dual feasibility to that tolerance,
# so nothing already priced in can come back looking improving.
IMPROVE_EPS = 1e-6
DUAL_POS_EPS = 1e-6
# Pricing registers are laid out against a tighter unit-disk radius than the
# 10 um hardware maximum, so every target edge sits deep inside the blockade
# (a 6 um edge has ~19 rad/us of interaction, above the final detuning).
COMPACT_REGISTER_RADIUS_UM = 6.0


def reduced_cost(mask: int, duals: np.ndarray) -> float:
    """1 - sum of duals over the set; improving iff below -IMPROVE_EPS."""
    return 1.0 - sum(float(duals[v]) for v in iter_bits(mask))


def exact_mwis(g: Graph, weights) -> int:
    """Independent set maximizing the weight sum, by branch-and-bound.

    Vertices with non-positive weight are dropped up front (they never help).
    Branching follows descending weight with the remaining-weight-sum bound.
    Equal-weight optima resolve to the smallest bitmask value.
    """
    w = [float(x) for x in weights]
    order = sorted((v for v in range(g.n) if w[v] > 0.0), key=lambda v: (-w[v], v))
    best_w = 0.0
    best_mask = 0
    adj = g.adj

    def weight_of(mask: int) -> float:
        return sum(w[v] for v in iter_bits(mask))

    def consider(cur_w: float, cur_mask: int) -> None:
        nonlocal best_w, best_mask
        if cur_w > best_w + 1e-12 or (cur_w > best_w - 1e-12 and cur_mask < best_mask):
            best_w, best_mask = cur_w, cur_mask

    def descend(pos: int, cand: int, cur_w: float, cur_mask: int, rem: float) -> None:
        consider(cur_w, cur_mask)
        if cur_w + rem < best_w - 1e-12:
            return
        while pos < len(order) and not (cand >> order[pos]) & 1:
            pos += 1
        if pos == len(order):
            return
        v = order[pos]
        removed = (adj[v] | (1 << v)) & cand
        descend(pos + 1, cand & ~removed, cur_w + w[v], cur_mask | (1 << v), rem - weight_of(removed))
        descend(pos + 1, cand & ~(1 << v), cur_w, cur_mask, rem - w[v])

    cand0 = mask_of(order)
    descend(0, cand0, 0.0, 0, weight_of(cand0))
    return best_mask


@dataclass(frozen=True)
class PricedColumn:
    """A new improving column in root-graph indexing."""

    mask: int
    reduced_cost: float
    maximal_in_subgraph: bool


@dataclass(frozen=True)
class PricingStats:
    """One row of the per-iteration pricing log."""

    iteration: int
    n_sub: int
    shots: int
    distinct_bitstrings: int
    improving: int
    maximal: int


@dataclass
class SamplerConfig:
    kind: str = "emulated_qaa"  # emulated_qaa | classical_stochastic | exact_pricer
    shots: int = 200
    seed: int = 0
    extend_to_maximal: bool = False
    emulator: EmulatorConfig = field(default_factory=EmulatorConfig)
    embed: EmbedParams = field(
        default_factory=lambda: EmbedParams(ud_radius=COMPACT_REGISTER_RADIUS_UM)
    )

    def __post_init__(self) -> None:
        if self.kind not in ("emulated_qaa", "classical_stochastic", "exact_pricer"):
            raise ValueError(f"unknown sampler kind {self.kind!r}")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")


@dataclass
class _CacheEntry:
    register: Register
    pulse: PulseSchedule
    state: StateVector


class PricingEngine:
    """Owns the sampler configuration, the per-subgraph cache, and shot accounting."""

    def __init__(self, config: SamplerConfig | None = None) -> None:
        self.config = config or SamplerConfig()
        self.cache: dict[int, _CacheEntry] = {}
        self.shots_used = 0
        self.exact_pricer_calls = 0
        self._draws = 0

    @property
    def kind(self) -> str:
        return self.config.kind

    def _next_seed(self) -> list[int]:
        self._draws += 1
        return [self.config.seed, self._draws]

    def _emulated_distribution(self, sub: Graph, key: int) -> StateVector:
        entry = self.cache.get(key)
        if entry is None:
            reg = embed(sub, self.config.embed, seed=int(np.random.default_rng(
                [self.config.seed, key & 0xFFFFFFFF, key >> 32]).integers(1 << 31)))
            report = audit(sub, reg, self.config.embed.ud_radius)
            pulse = build_adiabatic_pulse(report, self.config.emulator)
            state = evolve(reg, pulse, self.config.emulator)
            entry = _CacheEntry(register=reg, pulse=pulse, state=state)
            self.cache[key] = entry
        return entry.state

    def _draw_bitstrings(self, sub: Graph, key: int, weights: np.ndarray) -> dict[int, int]:
        if self.config.kind == "emulated_qaa":
            state = self._emulated_distribution(sub, key)
            seed = int(np.random.default_rng(self._next_seed()).integers(1 << 31))
            return sample(state, self.config.shots, seed).counts
        # classical_stochastic: weighted random greedy maximal sets
        rng = np.random.default_rng(self._next_seed())
        counts: dict[int, int] = {}
        w = np.maximum(np.asarray(weights, dtype=float), 1e-9)
        for _ in range(self.config.shots):
            keys = rng.random(sub.n) ** (1.0 / w)
            chosen = 0
            for v in sorted(range(sub.n), key=lambda i: -keys[i]):
                if not sub.adj[v] & chosen:
                    chosen |= 1 << v
            counts[chosen] = counts.get(chosen, 0) + 1
        return dict(sorted(counts.items()))

    def _extend_to_maximal(self, sub: Graph, mask: int) -> int:
        for v in range(sub.n):
            if not (mask >> v) & 1 and not sub.adj[v] & mask:
                mask |= 1 << v
        return mask

    def sample_columns(
        self,
        sub: Graph,
        sub_to_root: tuple[int, ...],
        duals: np.ndarray,
        pool: ColumnPool,
        iteration: int = 0,
    ) -> tuple[list[PricedColumn], PricingStats]:
        """Sampler pricing pass over the dual-positive subproblem.

        Every returned column is independent in the subproblem, has reduced
        cost below -1e-6, and is absent from the pool, re-checked here no
        matter what the sampler produced.
        """
        if self.config.kind == "exact_pricer":
            raise ValueError("exact_pricer has no sampling path; call exact_mwis instead")
        if sub.n == 0:
            return [], PricingStats(iteration, 0, 0, 0, 0, 0)
        counts = self._draw_bitstrings(sub, mask_of(sub_to_root), np.asarray(duals, dtype=float))
        self.shots_used += self.config.shots

        columns: list[PricedColumn] = []
        seen_root: set[int] = set()
        n_maximal = 0
        for local in counts:
            if not sub.is_independent(local):
                continue
            if self.config.extend_to_maximal:
                local = self._extend_to_maximal(sub, local)
            rc = reduced_cost(local, duals)
            if rc >= -IMPROVE_EPS:
                continue
            root_mask = expand_mask(local, sub_to_root)
            if root_mask in pool or root_mask in seen_root:
                continue
            seen_root.add(root_mask)
            maximal = sub.is_maximal_independent(local)
            n_maximal += maximal
            columns.append(PricedColumn(mask=root_mask, reduced_cost=rc, maximal_in_subgraph=maximal))
        stats = PricingStats(
            iteration=iteration,
            n_sub=sub.n,
            shots=self.config.shots,
            distinct_bitstrings=len(counts),
            improving=len(columns),
            maximal=n_maximal,
        )
        return columns, stats
