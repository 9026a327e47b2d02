"""Gridded reachability analysis: chain graphs, components, lifts.

State space boxes are split into uniform cells; an edge means "flowing for
the link time under some admissible switching word, then jumping at most
epsilon (inflated by cell radii and a sampled expansion factor), reaches
the target cell".  Strongly connected pieces of that relation with a
self-reaching structure are the numerical chain components.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .flow import SwitchedSystem, integrate_segment
from .graph import DirectedGraph, ValidationError, require_valid
from .sequences import enumerate_admissible_words

Node = int | tuple[int, int]  # cell index, or (cell index, vertex)

FREE = "free-switching"
CONSTRAINED = "graph-constrained"


class SizingError(RuntimeError):
    """Raised when a requested analysis exceeds the configured work bound."""


@dataclass(frozen=True)
class Grid:
    """Uniform partition of a box into axis-aligned cells."""

    box: tuple[tuple[float, float], ...]
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.box) != len(self.counts):
            raise ValidationError("one cell count per axis required")
        for (lo, hi), c in zip(self.box, self.counts):
            if c < 1:
                raise ValidationError("cell counts must be >= 1")
            if not lo < hi:
                raise ValidationError("degenerate box interval")

    @property
    def dimension(self) -> int:
        return len(self.box)

    @property
    def widths(self) -> tuple[float, ...]:
        return tuple((hi - lo) / c for (lo, hi), c in zip(self.box, self.counts))

    @property
    def radius(self) -> float:
        """Half diagonal of one cell."""
        return 0.5 * math.sqrt(sum(w * w for w in self.widths))

    @property
    def n_cells(self) -> int:
        return math.prod(self.counts)

    def multi_index(self, cell: int) -> tuple[int, ...]:
        idx = []
        for c in reversed(self.counts):
            cell, r = divmod(cell, c)
            idx.append(r)
        return tuple(reversed(idx))

    def flat_index(self, multi: Sequence[int]) -> int:
        flat = 0
        for k, c in zip(multi, self.counts):
            flat = flat * c + k
        return flat

    def center(self, cell: int) -> np.ndarray:
        multi = self.multi_index(cell)
        return np.array([lo + (k + 0.5) * w
                         for (lo, _), k, w in zip(self.box, multi, self.widths)])

    def all_centers(self) -> np.ndarray:
        axes = [lo + (np.arange(c) + 0.5) * w
                for (lo, _), c, w in zip(self.box, self.counts, self.widths)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def cell_of(self, point: Sequence[float]) -> int:
        multi = []
        for p, (lo, _), c, w in zip(point, self.box, self.counts, self.widths):
            k = int(math.floor((p - lo) / w))
            multi.append(min(max(k, 0), c - 1))
        return self.flat_index(multi)

    def cells_within(self, point: np.ndarray, dist: float) -> list[int]:
        """Cells whose centers lie within Euclidean ``dist`` of ``point``."""
        ranges = []
        for p, (lo, _), c, w in zip(point, self.box, self.counts, self.widths):
            k_lo = max(0, math.ceil((p - dist - lo) / w - 0.5))
            k_hi = min(c - 1, math.floor((p + dist - lo) / w - 0.5))
            if k_lo > k_hi:
                return []
            ranges.append(range(k_lo, k_hi + 1))
        out = []
        for multi in itertools.product(*ranges):
            center = [lo + (k + 0.5) * w
                      for (lo, _), k, w in zip(self.box, multi, self.widths)]
            if math.dist(center, point) <= dist:
                out.append(self.flat_index(multi))
        return out


def build_grid(box: Sequence[Sequence[float]], cells_per_axis: Sequence[int] | int) -> Grid:
    counts = ((cells_per_axis,) * len(box) if isinstance(cells_per_axis, int)
              else tuple(int(c) for c in cells_per_axis))
    return Grid(tuple((float(lo), float(hi)) for lo, hi in box), counts)


def _word_images(sys: SwitchedSystem, points: np.ndarray, word: Sequence[int],
                 durations: Sequence[float]) -> np.ndarray:
    x = points
    for sym, dt in zip(word, durations):
        if dt > 0:
            x = integrate_segment(sys, sym, x, dt)
    return x


def step_image(sys: SwitchedSystem, g: DirectedGraph, grid: Grid, cell: int,
               word: Sequence[int]) -> np.ndarray:
    """Image of the cell center after flowing one h-cell per word symbol."""
    if len(word) < 1:
        raise ValidationError("word must have length >= 1")
    if not g.word_is_admissible(word):
        raise ValidationError(f"word {list(word)} is not admissible")
    x = grid.center(cell)
    return _word_images(sys, x, word, [sys.step] * len(word))


@dataclass
class ChainGraph:
    """Directed reachability relation between grid cells (optionally paired
    with graph vertices), for one (epsilon, link-time) resolution."""

    mode: str
    grid: Grid
    graph: DirectedGraph
    eps: float
    m: int
    q: int
    step: float
    nodes: tuple[Node, ...]
    adjacency: dict[Node, set[Node]]
    word_expansion: dict[tuple, float] = field(default_factory=dict)

    @property
    def link_time(self) -> float:
        return self.m * self.step

    def has_edge(self, a: Node, b: Node) -> bool:
        return b in self.adjacency.get(a, ())

    def project(self, node: Node) -> int:
        return node if self.mode == FREE else node[0]


def _sampled_expansion(images: np.ndarray, grid: Grid) -> float:
    """Max growth of the word's flow map, from adjacent-center differences."""
    shaped = images.reshape(grid.counts + (grid.dimension,))
    best = 0.0
    for axis, w in enumerate(grid.widths):
        if grid.counts[axis] < 2:
            continue
        diffs = np.diff(shaped, axis=axis)
        norms = np.sqrt(np.sum(diffs * diffs, axis=-1))
        best = max(best, float(norms.max()) / w)
    return best if best > 0.0 else 1.0


def build_chain_graph(sys: SwitchedSystem, g: DirectedGraph, grid: Grid,
                      eps: float, m: int, mode: str = FREE, q: int = 1,
                      max_work: int = 2_000_000, threads: int = 1) -> ChainGraph:
    """Construct the (epsilon, m*h) reachability graph over the grid.

    Free-switching: nodes are cells; an edge a -> b exists when some
    admissible word of length m maps a's center within the inflated epsilon
    ball of b's center.  Graph-constrained: nodes are (cell, vertex) pairs;
    the word must start at the source vertex and the target vertex must be
    able to continue it.  Offset sampling (q > 1, free mode only) adds
    split-cell words of length m+1.
    """
    require_valid(g)
    if g.n != len(sys.fields):
        raise ValidationError("analysis graph must index the system's fields")
    if eps <= 0:
        raise ValidationError("eps must be positive")
    if m < 1:
        raise ValidationError("m must be >= 1")
    if q < 1:
        raise ValidationError("q must be >= 1")
    if mode not in (FREE, CONSTRAINED):
        raise ValidationError(f"unknown mode {mode!r}")
    if mode == CONSTRAINED and q > 1:
        raise ValidationError("offset sampling is only supported in free-switching mode")

    h = sys.step
    verts = frozenset(range(g.n))
    words = enumerate_admissible_words(g, verts, m)
    tasks: list[tuple[tuple[int, ...], list[float]]] = [
        (w, [h] * m) for w in words]
    if q > 1:
        split_words = enumerate_admissible_words(g, verts, m + 1)
        for i in range(1, q):
            tau = i * h / q
            durations = [tau] + [h] * (m - 1) + [h - tau]
            tasks.extend((w, durations) for w in split_words)

    n_nodes = grid.n_cells * (1 if mode == FREE else g.n)
    if n_nodes * len(tasks) > max_work:
        raise SizingError(
            f"{n_nodes} nodes x {len(tasks)} words = {n_nodes * len(tasks)} exceeds "
            f"the work bound {max_work}; use a coarser grid, a smaller m, or raise "
            "the bound")

    centers = grid.all_centers()
    r = grid.radius
    adjacency: dict[Node, set[Node]] = {}
    expansions: dict[tuple, float] = {}

    if mode == FREE:
        for cell in range(grid.n_cells):
            adjacency[cell] = set()
    else:
        for cell in range(grid.n_cells):
            for u in range(g.n):
                adjacency[(cell, u)] = set()

    def edges_for(task: tuple[tuple[int, ...], list[float]]):
        word, durations = task
        images = _word_images(sys, centers, word, durations)
        kappa = _sampled_expansion(images, grid)
        reach = eps + r * kappa + r
        local: list[tuple[Node, Node]] = []
        if mode == FREE:
            for a in range(grid.n_cells):
                for b in grid.cells_within(images[a], reach):
                    local.append((a, b))
        else:
            # The node's vertex pins the word start; admissibility constrains
            # only the inside of the word.  Each link uses a fresh signal, so
            # after the jump the next word may begin at any vertex.
            u = word[0]
            for a in range(grid.n_cells):
                targets = grid.cells_within(images[a], reach)
                for b in targets:
                    for v in range(g.n):
                        local.append(((a, u), (b, v)))
        return word, kappa, local

    if threads > 1 and len(tasks) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(edges_for, tasks))
    else:
        results = [edges_for(t) for t in tasks]
    for word, kappa, local in results:
        expansions[tuple(word)] = max(expansions.get(tuple(word), 0.0), kappa)
        for a, b in local:
            adjacency[a].add(b)

    if mode == FREE:
        nodes: tuple[Node, ...] = tuple(range(grid.n_cells))
    else:
        nodes = tuple((c, u) for c in range(grid.n_cells) for u in range(g.n))
    return ChainGraph(mode, grid, g, eps, m, q, h, nodes, adjacency, expansions)


@dataclass(frozen=True)
class ChainComponent:
    """A maximal strongly connected, self-reaching piece of the chain graph."""

    nodes: frozenset[Node]
    cells: frozenset[int]
    viable: bool

    @property
    def size(self) -> int:
        return len(self.nodes)


def _tarjan(nodes: Sequence[Node], adjacency: Mapping[Node, set[Node]]) -> list[list[Node]]:
    index: dict[Node, int] = {}
    lowlink: dict[Node, int] = {}
    on_stack: dict[Node, bool] = {}
    stack: list[Node] = []
    counter = 0
    components: list[list[Node]] = []
    for root in nodes:
        if root in index:
            continue
        work: list[tuple[Node, Iterable | None]] = [(root, None)]
        while work:
            v, it = work[-1]
            if it is None:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
                it = iter(sorted(adjacency.get(v, ())))
                work[-1] = (v, it)
            advanced = False
            for w in it:
                if w not in index:
                    work.append((w, None))
                    advanced = True
                    break
                if on_stack.get(w):
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return components


def chain_components(cg: ChainGraph) -> list[ChainComponent]:
    """Strongly connected components of the chain graph, keeping only those
    that can reach themselves (non-trivial, or trivial with a self-edge),
    sorted by size then by smallest cell."""
    raw = _tarjan(cg.nodes, cg.adjacency)
    kept = []
    for comp in raw:
        if len(comp) == 1:
            node = comp[0]
            if node not in cg.adjacency.get(node, ()):
                continue
        nodes = frozenset(comp)
        cells = frozenset(cg.project(nd) for nd in nodes)
        kept.append(ChainComponent(nodes, cells, True))
    kept.sort(key=lambda c: (-c.size, min(c.cells)))
    return kept


def chain_equivalent(cg: ChainGraph, x: Sequence[float], y: Sequence[float],
                     components: list[ChainComponent] | None = None) -> bool:
    """Whether the cells of x and y lie in one chain component."""
    if components is None:
        components = chain_components(cg)
    cx = cg.grid.cell_of(np.atleast_1d(np.asarray(x, dtype=float)))
    cy = cg.grid.cell_of(np.atleast_1d(np.asarray(y, dtype=float)))
    return any(cx in comp.cells and cy in comp.cells for comp in components)


def lift_kernel(sys: SwitchedSystem, g: DirectedGraph, grid: Grid,
                cells: Iterable[int], slack: float | None = None) -> frozenset[tuple[int, int]]:
    """Largest node set over E x V in which every node has a one-step
    successor and predecessor.

    A successor of (cell, u) is any (cell', v) with cell' in E within
    ``slack`` of the one-h-step image of the cell center under u's field,
    and u -> v an edge.  This combinatorial viability kernel approximates
    the set of pairs whose full two-sided trajectory stays over E.
    """
    require_valid(g)
    cell_list = sorted(set(cells))
    if not cell_list:
        return frozenset()
    if slack is None:
        slack = grid.radius
    cell_set = set(cell_list)
    centers = np.stack([grid.center(c) for c in cell_list])

    succ: dict[tuple[int, int], set[tuple[int, int]]] = {}
    pred: dict[tuple[int, int], set[tuple[int, int]]] = {}
    nodes = [(c, u) for c in cell_list for u in range(g.n)]
    for nd in nodes:
        succ[nd] = set()
        pred[nd] = set()
    for u in range(g.n):
        images = integrate_segment(sys, u, centers, sys.step)
        nexts = g.successors(u)
        for i, c in enumerate(cell_list):
            for b in grid.cells_within(images[i], slack):
                if b not in cell_set:
                    continue
                for v in nexts:
                    succ[(c, u)].add((b, v))
                    pred[(b, v)].add((c, u))

    alive = set(nodes)
    queue = [nd for nd in nodes
             if not (succ[nd] & alive) or not (pred[nd] & alive)]
    while queue:
        nd = queue.pop()
        if nd not in alive:
            continue
        alive.discard(nd)
        for other in succ[nd] | pred[nd]:
            if other in alive:
                if not (succ[other] & alive) or not (pred[other] & alive):
                    queue.append(other)
    return frozenset(alive)


def _as_points(arr: Sequence) -> np.ndarray:
    a = np.asarray(arr, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.size == 0:
        raise ValidationError("empty set has no Hausdorff distance")
    return a


def hausdorff_distance(points_a: Sequence, points_b: Sequence | None = None,
                       interval: tuple[float, float] | None = None) -> float:
    """Hausdorff distance between point sets, or a 1-D set and an interval.

    The interval form is exact: the far side is attained at an interval
    endpoint or a midpoint between consecutive set points.
    """
    a = _as_points(points_a)
    if interval is not None:
        lo, hi = float(interval[0]), float(interval[1])
        pts = np.sort(a.ravel())
        d_set_to_interval = max(max(lo - p, p - hi, 0.0) for p in pts)
        candidates = [lo, hi]
        for p0, p1 in zip(pts, pts[1:]):
            mid = 0.5 * (p0 + p1)
            if lo <= mid <= hi:
                candidates.append(mid)
        d_interval_to_set = max(min(abs(c - p) for p in pts) for c in candidates)
        return max(d_set_to_interval, d_interval_to_set)
    if points_b is None:
        raise ValidationError("need a second set or an interval")
    b = _as_points(points_b)
    d_ab = max(float(np.min(np.linalg.norm(b - p, axis=1))) for p in a)
    d_ba = max(float(np.min(np.linalg.norm(a - p, axis=1))) for p in b)
    return max(d_ab, d_ba)
