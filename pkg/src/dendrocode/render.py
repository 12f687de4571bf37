"""Deterministic monospaced rendering of a dendrogram.

Terminals are listed top to bottom in the canonical drawing order; each
internal node appears as a junction column placed by rank, annotated at the
right margin with its rank and height.  Rendering the same tree twice
yields byte-identical output.
"""

from __future__ import annotations

from .hierarchy import Child, Dendrogram, TERMINAL, canonicalize


def render_tree(tree: Dendrogram, full_precision: bool = False) -> str:
    from .formats import fmt_float

    tree = canonicalize(tree)
    if not tree.nodes:
        return f"{tree.labels[0]}\n"

    label_width = max(len(label) for label in tree.labels)

    def column(rank: int) -> int:
        return label_width + 1 + 3 * rank

    margin = column(len(tree.nodes)) + 4
    lines: list[list[str]] = []

    def put(row: int, col: int, text: str, keep: bool = False) -> None:
        line = lines[row]
        while len(line) < col + len(text):
            line.append(" ")
        for offset, ch in enumerate(text):
            if not keep or line[col + offset] == " ":
                line[col + offset] = ch

    def walk(child: Child) -> tuple[int, int]:
        """Emit a subtree; return its (attach_row, attach_col)."""
        kind, idx = child
        if kind == TERMINAL:
            row = len(lines)
            lines.append(list(f"{tree.labels[idx]:<{label_width}} "))
            return row, label_width + 1
        node = tree.nodes[idx - 1]
        col = column(node.rank)
        top_row, top_col = walk(node.left)
        put(top_row, top_col, "-" * (col - top_col) + "+")
        junction_row = len(lines)
        lines.append([])
        bottom_row, bottom_col = walk(node.right)
        put(bottom_row, bottom_col, "-" * (col - bottom_col) + "+")
        for row in range(top_row + 1, bottom_row):
            put(row, col, "|" if row != junction_row else "+", keep=True)
        put(
            junction_row,
            margin,
            f"q{node.rank} h={fmt_float(node.height, full_precision)}",
        )
        return junction_row, col + 1

    walk(("q", tree.nodes[-1].rank))
    return "\n".join("".join(line).rstrip() for line in lines) + "\n"
