"""Rendering of section grids to image files.

Figures are a convenience layer over the exact CSV/JSON outputs: rendering
quantizes the rational coordinates to floats, so the delimited exports stay
the data of record.  Only 1- and 2-dimensional sections (q = 2, 3) are
drawable.
"""

from __future__ import annotations

from .strata import SectionGrid


def render_section(grid: SectionGrid, path: str, title: str | None = None) -> None:
    """Render a section grid to an image file (format from the extension).

    Nodes are colored by stratum dimension; points outside the orbit-space
    image are drawn in light gray.
    """
    if grid.q not in (2, 3):
        raise ValueError("only sections of q = 2 or q = 3 matrices can be rendered")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.colors import BoundaryNorm, ListedColormap

    q = grid.q
    colors = ["#d9d9d9", "#1b2a49", "#2e6f9e", "#56b4e9", "#e69f00", "#c44e52"]
    cmap = ListedColormap(colors[: q + 2])
    norm = BoundaryNorm([v - 0.5 for v in range(-1, q + 2)], cmap.N)

    def code(label):
        return -1 if not label.inside else label.rank

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    if q == 2:
        xs = [float(x) for x in grid.axes[0]]
        ys = [code(grid.label((i,))) for i in range(len(xs))]
        ax.scatter(xs, ys, c=ys, cmap=cmap, norm=norm, s=8)
        ax.set_xlabel("p1")
        ax.set_ylabel("stratum dimension (-1 = outside)")
        ax.set_yticks(range(-1, q + 1))
    else:
        nx, ny = grid.shape
        image = [[code(grid.label((i, j))) for j in range(ny)] for i in range(nx)]
        extent = [
            float(grid.box[1][0]),
            float(grid.box[1][1]),
            float(grid.box[0][0]),
            float(grid.box[0][1]),
        ]
        shown = ax.imshow(
            image,
            origin="lower",
            extent=extent,
            cmap=cmap,
            norm=norm,
            aspect="auto",
            interpolation="nearest",
        )
        colorbar = fig.colorbar(shown, ax=ax, ticks=range(-1, q + 1))
        colorbar.set_label("stratum dimension (-1 = outside)")
        ax.set_xlabel("p2")
        ax.set_ylabel("p1")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
