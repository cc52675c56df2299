"""
Decomposition of a spanning tree into edge-disjoint subtrees of size
between s and 4s, any two of which share at most one node.
"""
import logging
from typing import Dict, FrozenSet, List, Optional, Set

import networkx as nx

from app.core.errors import GraphError
from app.core.graphs import RoundGraph

logger = logging.getLogger(__name__)


def _rooted(tree: nx.Graph, nodes: Set[int], root: int):
    sub = tree.subgraph(nodes)
    order = list(nx.dfs_preorder_nodes(sub, root))
    parent = dict(nx.dfs_predecessors(sub, root))
    children: Dict[int, List[int]] = {v: [] for v in order}
    for child, up in parent.items():
        children[up].append(child)
    for kids in children.values():
        kids.sort()
    size = {v: 1 for v in order}
    for v in reversed(order):
        if v in parent:
            size[parent[v]] += size[v]
    return children, size


def _subtree(children: Dict[int, List[int]], top: int) -> Set[int]:
    nodes, stack = set(), [top]
    while stack:
        v = stack.pop()
        nodes.add(v)
        stack.extend(children[v])
    return nodes


def tree_decompose(tree: RoundGraph, s: int, root: Optional[int] = None) -> List[FrozenSet[int]]:
    """Node sets of the subtrees, in emission order."""
    graph = tree.to_networkx()
    if not nx.is_tree(graph):
        raise GraphError("tree_decompose needs a tree")
    if not 1 <= s <= tree.n:
        raise ValueError(f"size parameter {s} outside [1, {tree.n}]")
    root = min(graph.nodes) if root is None else root
    remaining: Set[int] = set(graph.nodes)
    if len(remaining) <= 2 * s:
        return [frozenset(remaining)]

    pieces: List[FrozenSet[int]] = []
    while True:
        children, size = _rooted(graph, remaining, root)
        v = root
        while True:
            heavy = [c for c in children[v] if size[c] >= s]
            if not heavy:
                break
            v = heavy[0]
        below = _subtree(children, v)

        if size[v] <= 2 * s:
            if len(remaining) - size[v] >= s:
                pieces.append(frozenset(below))
                remaining -= below
                continue
            pieces.append(frozenset(remaining))
            break

        groups: List[Set[int]] = []
        current: Set[int] = set()
        for child in children[v]:
            current |= _subtree(children, child)
            if 1 + len(current) >= s:
                groups.append(current | {v})
                current = set()
        if current:
            groups[-1] |= current

        if v == root:
            pieces.extend(frozenset(g) for g in groups)
            break
        rest = remaining - below
        if len(rest) < s:
            groups[-1] |= rest
            pieces.extend(frozenset(g) for g in groups)
            break
        pieces.extend(frozenset(g) for g in groups)
        remaining = rest

    logger.debug(f"[tree_decompose] n={tree.n} s={s} | pieces={[len(p) for p in pieces]}")
    return pieces
