#!/usr/bin/env python3
"""Convert a GML graph (e.g. Newman's football.gml) to the edge-list and
label formats read by the ricciflow CLI.

Usage: gml_to_edgelist.py input.gml out_prefix [value_attribute]

Writes out_prefix.edges (one `u v` line per edge) and, when the nodes carry
the value attribute (default: "value"), out_prefix.labels.
"""
import sys

try:
    import networkx as nx
except ImportError:
    sys.exit("networkx is required")


def main() -> None:
    if len(sys.argv) < 3:
        sys.exit(__doc__)
    path, prefix = sys.argv[1], sys.argv[2]
    attr = sys.argv[3] if len(sys.argv) > 3 else "value"
    g = nx.read_gml(path, label="label")
    with open(prefix + ".edges", "w") as f:
        for u, v in g.edges():
            f.write(f"{str(u).replace(' ', '_')} {str(v).replace(' ', '_')}\n")
    values = nx.get_node_attributes(g, attr)
    if values:
        with open(prefix + ".labels", "w") as f:
            for n in g.nodes():
                f.write(f"{str(n).replace(' ', '_')} {values[n]}\n")
    print(f"{g.number_of_nodes()} vertices, {g.number_of_edges()} edges")


if __name__ == "__main__":
    main()
