"""Handler dependency analysis.

Builds the directed graph whose vertices are event handlers and whose edges
connect handlers that can interact (an output event of one overlaps an input
event of another), condenses strongly connected components, derives the
related sets that must be verified jointly, merges sets whose members issue
conflicting outputs, and prunes redundant subsets.
"""

from __future__ import annotations

from dataclasses import dataclass

from .appdsl import EventPattern, patterns_conflict, patterns_overlap

Origin = tuple[str, str]  # (app name, handler name)


@dataclass(frozen=True)
class HandlerVertex:
    """A handler, or a composite of mutually reachable handlers.

    Composite vertices carry the union of their members' inputs and outputs.
    """

    id: int
    origins: tuple[Origin, ...]
    inputs: frozenset[EventPattern]
    outputs: frozenset[EventPattern]

    @property
    def composite(self) -> bool:
        return len(self.origins) > 1


@dataclass(frozen=True)
class DependencyGraph:
    vertices: tuple[HandlerVertex, ...]
    edges: frozenset[tuple[int, int]]

    def children(self, vid: int) -> list[int]:
        return sorted(v for (u, v) in self.edges if u == vid)

    def parents(self, vid: int) -> list[int]:
        return sorted(u for (u, v) in self.edges if v == vid)

    def leaves(self) -> list[int]:
        with_children = {u for (u, _) in self.edges}
        return [v.id for v in self.vertices if v.id not in with_children]

    def vertex(self, vid: int) -> HandlerVertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)


@dataclass(frozen=True)
class RelatedSet:
    members: frozenset[int]

    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))


def _tarjan(n: int, succ: list[list[int]]) -> list[list[int]]:
    """Strongly connected components, in reverse topological discovery order."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0

    def visit(root: int):
        nonlocal counter
        # iterative DFS so deep graphs cannot overflow the stack
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pi, len(succ[v])):
                w = succ[v][i]
                if index[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])

    for v in range(n):
        if index[v] == -1:
            visit(v)
    return sccs


def build_graph(
    handlers: list[tuple[Origin, frozenset[EventPattern], frozenset[EventPattern]]],
) -> DependencyGraph:
    """Vertex per handler, edge on output/input overlap, SCCs condensed.

    Raw vertex ids follow the input order, so ids are reproducible from
    fixture ordering; a composite vertex takes the smallest member id.
    """
    n = len(handlers)
    succ: list[list[int]] = [[] for _ in range(n)]
    for u in range(n):
        _, _, outs = handlers[u]
        for v in range(n):
            if u == v:
                continue
            _, ins, _ = handlers[v]
            if any(patterns_overlap(p, q) for p in outs for q in ins):
                succ[u].append(v)

    sccs = _tarjan(n, succ)
    comp_of = {}
    for comp in sccs:
        cid = min(comp)
        for v in comp:
            comp_of[v] = cid

    vertices = []
    for comp in sorted(sccs, key=min):
        cid = min(comp)
        origins = tuple(handlers[v][0] for v in comp)
        inputs = frozenset().union(*(handlers[v][1] for v in comp))
        outputs = frozenset().union(*(handlers[v][2] for v in comp))
        vertices.append(HandlerVertex(cid, origins, inputs, outputs))

    edges = set()
    for u in range(n):
        for v in succ[u]:
            cu, cv = comp_of[u], comp_of[v]
            if cu != cv:
                edges.add((cu, cv))
    return DependencyGraph(tuple(vertices), frozenset(edges))


def ancestors(g: DependencyGraph, vid: int) -> frozenset[int]:
    seen: set[int] = set()
    work = [vid]
    while work:
        v = work.pop()
        for p in g.parents(v):
            if p not in seen:
                seen.add(p)
                work.append(p)
    return frozenset(seen)


def related_sets(g: DependencyGraph) -> list[RelatedSet]:
    """One initial set per leaf: the leaf plus all of its ancestors.

    Non-leaf-rooted sets are never emitted; they are subsets of some leaf's
    related set.
    """
    return [RelatedSet(ancestors(g, leaf) | {leaf}) for leaf in sorted(g.leaves())]


def merge_conflicts(g: DependencyGraph, sets: list[RelatedSet]) -> list[RelatedSet]:
    """Add a joint set for every vertex pair with conflicting outputs.

    Outputs conflict when two patterns target the same attribute with
    distinct values (a wildcard conflicts with any value).  The scan examines
    every output-pattern pair, O(E^2) in the number of output edges.
    """
    out = list(sets)
    seen = {s.members for s in out}
    vs = sorted(g.vertices, key=lambda v: v.id)
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            if any(patterns_conflict(p, q) for p in u.outputs for q in v.outputs):
                merged = (ancestors(g, u.id) | {u.id} | ancestors(g, v.id) | {v.id})
                if merged not in seen:
                    seen.add(merged)
                    out.append(RelatedSet(frozenset(merged)))
    return out


def prune_subsets(sets: list[RelatedSet]) -> list[RelatedSet]:
    """Keep only maximal sets; order by descending size, then member order."""
    keep = []
    for s in sets:
        if not any(s.members < t.members for t in sets):
            if s.members not in {k.members for k in keep}:
                keep.append(s)
    return sorted(keep, key=lambda s: (-len(s.members), s.sorted_members()))


def final_related_sets(g: DependencyGraph) -> list[RelatedSet]:
    return prune_subsets(merge_conflicts(g, related_sets(g)))


def app_groups(g: DependencyGraph, sets: list[RelatedSet]) -> list[tuple[str, ...]]:
    """Related sets in terms of apps (an app is installed whole).

    Distinct sets mapping to the same app group are reported once, keeping
    the order of first occurrence.
    """
    groups: list[tuple[str, ...]] = []
    for s in sets:
        apps = sorted({origin[0] for vid in s.members
                       for origin in g.vertex(vid).origins})
        group = tuple(apps)
        if group not in groups:
            groups.append(group)
    return groups


# ---------------------------------------------------------------------------
# Renderings for the `deps` CLI subcommand

def render_table(g: DependencyGraph) -> str:
    rows = [("App", "Handler", "Vertex", "Input Events", "Output Events")]
    for v in sorted(g.vertices, key=lambda v: v.id):
        ins = ", ".join(p.render() for p in sorted(v.inputs))
        outs = ", ".join(p.render() for p in sorted(v.outputs))
        for i, (app, handler) in enumerate(v.origins):
            vid = str(v.id) if i == 0 else ""
            rows.append((app, handler, vid, ins if i == 0 else "", outs if i == 0 else ""))
    widths = [max(len(r[c]) for r in rows) for c in range(5)]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("-" * (sum(widths) + 8))
    return "\n".join(lines)


def render_sets(title: str, sets: list[RelatedSet]) -> str:
    lines = [title]
    for i, s in enumerate(sets, 1):
        lines.append(f"  {i}: {{{', '.join(str(m) for m in s.sorted_members())}}}")
    return "\n".join(lines)


def to_dot(g: DependencyGraph) -> str:
    lines = ["digraph handlers {"]
    for v in sorted(g.vertices, key=lambda v: v.id):
        label = "\\n".join(f"{app}.{h}" for app, h in v.origins)
        lines.append(f'  v{v.id} [label="{v.id}: {label}"];')
    for (u, v) in sorted(g.edges):
        lines.append(f"  v{u} -> v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
