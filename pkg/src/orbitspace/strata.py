"""Exact semialgebraic classification of points into strata.

A point of the p space belongs to the orbit-space image S exactly when P
evaluated there is positive semidefinite; the rank of P(p) then equals the
dimension of the stratum through p.  Membership is decided by checking all
2^q - 1 principal minors (the correct semidefiniteness criterion for
symmetric matrices), so there are no tolerances anywhere: boundary
membership at a grid node is an exact algebraic statement.

Section grids sample the compact slice on the hyperplane p_q = 1 at exact
rational nodes; connectivity of the sampled principal stratum is a
diagnostic, never a proof.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .linalg import NotSymmetric, RationalMatrix, principal_minor, rank as matrix_rank
from .pmatrix import PMatrix, evaluate_p

OUTSIDE = "Outside"
IN_S = "InS"

SECTION_CSV_SCHEMA = "section-grid/1"
SECTION_SUMMARY_SCHEMA = "section-summary/1"


@dataclass(frozen=True)
class StratumLabel:
    """Membership status of a point; rank is set only inside S."""

    status: str
    rank: int | None = None

    @property
    def inside(self) -> bool:
        return self.status == IN_S


def psd_rank(matrix: RationalMatrix) -> tuple[bool, int]:
    """Exact (positive semidefinite?, rank) for a symmetric matrix."""
    if not matrix.is_symmetric():
        raise NotSymmetric("psd_rank needs a symmetric matrix")
    n = matrix.rows
    psd = True
    for size in range(1, n + 1):
        for indices in combinations(range(n), size):
            if principal_minor(matrix, indices) < 0:
                psd = False
                break
        if not psd:
            break
    return psd, matrix_rank(matrix)


def classify_point(p: PMatrix, point: Sequence) -> StratumLabel:
    """Exact stratum label of a point of the p space."""
    value = evaluate_p(p, point)
    psd, r = psd_rank(value)
    if not psd:
        return StratumLabel(OUTSIDE)
    return StratumLabel(IN_S, r)


@dataclass(frozen=True)
class SectionGrid:
    """Exact classification of a rational grid on the hyperplane p_q = 1.

    ``axes`` holds the node coordinates per section axis (p_1 .. p_{q-1});
    ``labels`` is row-major with the first axis slowest.
    """

    q: int
    box: tuple[tuple[Fraction, Fraction], ...]
    resolution: int
    axes: tuple[tuple[Fraction, ...], ...]
    labels: tuple[StratumLabel, ...]

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(axis) for axis in self.axes)

    def node(self, index: tuple[int, ...]) -> tuple[Fraction, ...]:
        """Full q-coordinate point of a grid node (p_q = 1 appended)."""
        return tuple(axis[i] for axis, i in zip(self.axes, index)) + (Fraction(1),)

    def label(self, index: tuple[int, ...]) -> StratumLabel:
        return self.labels[self._flat(index)]

    def _flat(self, index: tuple[int, ...]) -> int:
        flat = 0
        for i, size in zip(index, self.shape):
            flat = flat * size + i
        return flat

    def indices(self) -> Iterable[tuple[int, ...]]:
        return product(*(range(size) for size in self.shape))


def _axis_nodes(lo: Fraction, hi: Fraction, resolution: int) -> tuple[Fraction, ...]:
    step = (hi - lo) / (resolution - 1)
    return tuple(lo + step * k for k in range(resolution))


def section_grid(p: PMatrix, box, resolution: int, threads: int = 1) -> SectionGrid:
    """Classify every node of a rational grid on the section hyperplane.

    ``box`` gives rational (lo, hi) ranges for p_1 .. p_{q-1}.  Grid node
    classification is embarrassingly parallel; ``threads`` only chunks the
    work and never changes the output.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    ranges = tuple((Fraction(lo), Fraction(hi)) for lo, hi in box)
    if len(ranges) != p.q - 1:
        raise ValueError(f"box needs {p.q - 1} ranges, got {len(ranges)}")
    axes = tuple(_axis_nodes(lo, hi, resolution) for lo, hi in ranges)
    points = [coords + (Fraction(1),) for coords in product(*axes)]
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        chunk = max(1, len(points) // (threads * 4))
        chunks = [points[i:i + chunk] for i in range(0, len(points), chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda block: [classify_point(p, pt) for pt in block], chunks))
        labels = tuple(label for part in parts for label in part)
    else:
        labels = tuple(classify_point(p, pt) for pt in points)
    return SectionGrid(p.q, ranges, resolution, axes, labels)


def principal_connectivity(grid: SectionGrid) -> int:
    """Number of axis-neighbor components of full-rank nodes (sampled check)."""
    full_rank = grid.q
    shape = grid.shape
    inside = {
        index
        for index in grid.indices()
        if grid.label(index).inside and grid.label(index).rank == full_rank
    }
    seen: set[tuple[int, ...]] = set()
    components = 0
    for start in sorted(inside):
        if start in seen:
            continue
        components += 1
        queue = deque([start])
        seen.add(start)
        while queue:
            current = queue.popleft()
            for axis in range(len(shape)):
                for delta in (-1, 1):
                    neighbor = list(current)
                    neighbor[axis] += delta
                    if 0 <= neighbor[axis] < shape[axis]:
                        node = tuple(neighbor)
                        if node in inside and node not in seen:
                            seen.add(node)
                            queue.append(node)
    return components


# -- export -------------------------------------------------------------------


def write_section_csv(grid: SectionGrid) -> str:
    """CSV text: one row per node with exact coordinates, status and rank."""
    q = grid.q
    lines = [
        f"# schema: {SECTION_CSV_SCHEMA}",
        f"# q: {q}",
        f"# resolution: {grid.resolution}",
        "# box: " + " ".join(f"{lo}:{hi}" for lo, hi in grid.box),
        ",".join([f"p{i + 1}" for i in range(q)] + ["status", "rank"]),
    ]
    for index in grid.indices():
        point = grid.node(index)
        label = grid.label(index)
        rank_text = "" if label.rank is None else str(label.rank)
        lines.append(",".join([str(c) for c in point] + [label.status, rank_text]))
    return "\n".join(lines) + "\n"


def read_section_csv(text: str) -> SectionGrid:
    """Parse the CSV produced by write_section_csv (exact round trip)."""
    meta: dict[str, str] = {}
    rows: list[tuple[tuple[Fraction, ...], StratumLabel]] = []
    header_seen = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, value = body.split(":", 1)
                meta[key.strip()] = value.strip()
            continue
        if not header_seen:
            header_seen = True
            continue
        cells = line.split(",")
        q = int(meta["q"])
        coords = tuple(Fraction(c) for c in cells[:q])
        status = cells[q]
        rank_cell = cells[q + 1]
        label = StratumLabel(status, int(rank_cell) if rank_cell else None)
        rows.append((coords, label))
    q = int(meta["q"])
    resolution = int(meta["resolution"])
    box = tuple(
        (Fraction(part.split(":")[0]), Fraction(part.split(":")[1]))
        for part in meta["box"].split()
    )
    axes = tuple(_axis_nodes(lo, hi, resolution) for lo, hi in box)
    labels = tuple(label for _, label in rows)
    return SectionGrid(q, box, resolution, axes, labels)


def section_summary(grid: SectionGrid) -> dict:
    """JSON-ready summary: label counts, connectivity, bounds for plotting."""
    counts: dict[str, int] = {}
    in_bounds: list[list[Fraction] | None] = [None] * (grid.q - 1)
    for index in grid.indices():
        label = grid.label(index)
        key = OUTSIDE if not label.inside else f"rank_{label.rank}"
        counts[key] = counts.get(key, 0) + 1
        if label.inside:
            point = grid.node(index)
            for axis in range(grid.q - 1):
                if in_bounds[axis] is None:
                    in_bounds[axis] = [point[axis], point[axis]]
                else:
                    lo, hi = in_bounds[axis]
                    in_bounds[axis] = [min(lo, point[axis]), max(hi, point[axis])]
    return {
        "schema": SECTION_SUMMARY_SCHEMA,
        "q": grid.q,
        "resolution": grid.resolution,
        "box": [[str(lo), str(hi)] for lo, hi in grid.box],
        "counts": dict(sorted(counts.items())),
        "principal_components": principal_connectivity(grid),
        "in_s_bounds": [
            None if b is None else [str(b[0]), str(b[1])] for b in in_bounds
        ],
    }


def summary_json(grid: SectionGrid) -> str:
    return json.dumps(section_summary(grid), sort_keys=True, indent=2) + "\n"
