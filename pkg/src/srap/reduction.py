"""Reductions from 2-SCAP and k-SAG to SRAP, and lifting solutions back.

Min cuts of the connectivity graph are represented by a cactus, a tree of
cycles whose 2-cuts are exactly those min cuts.  A depth-first walk of the
cactus lays its nodes out on a ring; a node met several times gets one ring
vertex per visit, tied together by zero-cost links.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field

from .feasibility import UnionFind, max_flow, verify_edge_connectivity
from .model import Link, SrapInstance, build_instance

MAX_CACTUS_ATOMS = 20


class ReductionError(ValueError):
    pass


class PreconditionError(ReductionError):
    """The input graph lacks the connectivity the reduction assumes."""


# --- problem types ------------------------------------------------------------

@dataclass(frozen=True)
class ScapInstance:
    """Raise Steiner edge connectivity of (V, edges) on the terminals from k to k+1."""

    num_vertices: int
    edges: tuple  # (u, v) pairs, repeated for parallel edges
    terminals: frozenset
    links: tuple  # Link objects sorted by pair
    k: int = 2


@dataclass(frozen=True)
class SagInstance:
    """Raise a k-edge-connected graph H to k+1; links may use extra vertices."""

    k: int
    h_vertices: int
    extra_vertices: int
    edges: tuple
    links: tuple

    def as_scap(self) -> ScapInstance:
        return ScapInstance(self.h_vertices + self.extra_vertices, self.edges,
                            frozenset(range(self.h_vertices)), self.links, self.k)


def _check_links(links, total):
    seen = {}
    for item in links:
        l = item if isinstance(item, Link) else Link(int(item[0]), int(item[1]), int(item[2]))
        if l.u == l.v:
            raise ReductionError(f"link {l.pair} is a loop")
        if l.u < 0 or l.v >= total:
            raise ReductionError(f"link {l.pair} has an endpoint outside 0..{total - 1}")
        if l.cost < 0:
            raise ReductionError(f"link {l.pair} has negative cost")
        if l.pair in seen:
            raise ReductionError(f"duplicate link {l.pair}")
        seen[l.pair] = l
    return tuple(seen[p] for p in sorted(seen))


def _check_edges(edges, total):
    out = []
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise ReductionError(f"edge {(u, v)} is a loop")
        if not (0 <= u < total and 0 <= v < total):
            raise ReductionError(f"edge {(u, v)} has an endpoint outside 0..{total - 1}")
        out.append((min(u, v), max(u, v)))
    return tuple(sorted(out))


def build_scap(num_vertices: int, edges, terminals, links, k: int = 2) -> ScapInstance:
    if num_vertices < 1:
        raise ReductionError("need at least one vertex")
    terms = frozenset(int(t) for t in terminals)
    for t in terms:
        if not 0 <= t < num_vertices:
            raise ReductionError(f"terminal {t} out of range")
    if not terms:
        raise ReductionError("no terminals")
    if k < 1:
        raise ReductionError("k must be at least 1")
    return ScapInstance(num_vertices, _check_edges(edges, num_vertices), terms,
                        _check_links(links, num_vertices), k)


def build_sag(k: int, h_vertices: int, extra_vertices: int, edges, links) -> SagInstance:
    if h_vertices < 2:
        raise ReductionError("H needs at least two vertices")
    if extra_vertices < 0 or k < 1:
        raise ReductionError("bad size parameters")
    total = h_vertices + extra_vertices
    edges = _check_edges(edges, total)
    for u, v in edges:
        if v >= h_vertices:
            raise ReductionError(f"edge {(u, v)} leaves H")
    return SagInstance(k, h_vertices, extra_vertices, edges, _check_links(links, total))


# --- normalization ------------------------------------------------------------

@dataclass
class Normalized:
    rep: dict  # original vertex -> representative
    core: list  # representatives in the terminal component
    edges: list  # loopless edges among core representatives
    outside: list  # representatives off the core


def _components(vertices, edges):
    uf = UnionFind(vertices)
    for u, v in edges:
        uf.union(u, v)
    groups = defaultdict(list)
    for x in vertices:
        groups[uf.find(x)].append(x)
    return sorted(sorted(g) for g in groups.values())


def _reach(start, edges, skip_index):
    adj = defaultdict(list)
    for idx, (u, v) in enumerate(edges):
        if idx != skip_index:
            adj[u].append(v)
            adj[v].append(u)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def normalize_scap(inst: ScapInstance) -> Normalized:
    """Contract terminal-free components and terminal-free bridge sides."""
    terms = sorted(inst.terminals)
    if not verify_edge_connectivity(inst.edges, terms, 2):
        raise PreconditionError("graph is not Steiner 2-edge-connected on the terminals")
    rep = {x: x for x in range(inst.num_vertices)}
    for comp in _components(range(inst.num_vertices), inst.edges):
        if not inst.terminals & set(comp):
            for x in comp:
                rep[x] = comp[0]

    def current_edges():
        return [(rep[u], rep[v]) for u, v in inst.edges if rep[u] != rep[v]]

    root = terms[0]
    while True:
        edges = current_edges()
        core = _reach(root, edges, -1)
        edges = [e for e in edges if e[0] in core]
        bridge = None
        for idx, (u, v) in enumerate(edges):
            side = _reach(u, edges, idx)
            if v not in side:
                bridge = (u, v, side)
                break
        if bridge is None:
            break
        u, v, side = bridge
        reps_terms = {rep[t] for t in terms}
        if side & reps_terms:
            side = core - side
            anchor = u
        else:
            anchor = v
        assert not side & reps_terms, "both sides of a bridge hold terminals"
        for x in rep:
            if rep[x] in side:
                rep[x] = anchor
    reps = sorted(set(rep.values()))
    return Normalized(rep, sorted(core), sorted(edges), [r for r in reps if r not in core])


# --- cactus -------------------------------------------------------------------

@dataclass
class Cactus:
    """Rooted cactus.  ``children[x]`` lists the cycles hanging below node x,
    each as its ordered non-root nodes; a 2-cycle is a one-element list."""

    root: int
    members: list  # node -> sorted original vertices (empty for empty nodes)
    children: list
    node_of: dict  # original vertex -> node
    terminal_nodes: frozenset = frozenset()

    @property
    def size(self) -> int:
        return len(self.members)

    def cuts(self) -> list[frozenset]:
        """Vertex sets (root side excluded) of every 2-cut."""
        below = {}

        def subtree(x):
            if x not in below:
                s = set(self.members[x])
                for cyc in self.children[x]:
                    for y in cyc:
                        s |= subtree(y)
                below[x] = frozenset(s)
            return below[x]

        out = set()
        for x in range(self.size):
            for cyc in self.children[x]:
                for i in range(len(cyc)):
                    s = set()
                    for j in range(i, len(cyc)):
                        s |= subtree(cyc[j])
                        out.add(frozenset(s))
        return sorted(out, key=lambda s: sorted(s))


def _cut_value(mask, atom_edges):
    return sum(c for a, b, c in atom_edges if (mask >> a & 1) != (mask >> b & 1))


def _crosses(s, t):
    return bool(s & t) and bool(s & ~t) and bool(t & ~s)


def _atoms(vertices, edges, k, root):
    reps = []
    atom_of = {}
    for v in vertices:
        for i, r in enumerate(reps):
            if max_flow(edges, r, v, limit=k + 1) > k:
                atom_of[v] = i
                break
        else:
            atom_of[v] = len(reps)
            reps.append(v)
    # renumber so the root atom is 0
    order = sorted(range(len(reps)), key=lambda i: (i != atom_of[root], reps[i]))
    index = {old: new for new, old in enumerate(order)}
    return {v: index[a] for v, a in atom_of.items()}, len(reps)


def _circular_parts(masks, nat, atom_edges, k):
    """Circular partition generated by a crossing family, starting at the root part."""
    sig = defaultdict(int)
    for a in range(nat):
        key = tuple(m >> a & 1 for m in masks)
        sig[key] |= 1 << a
    parts = sorted(sig.values(), key=lambda p: (not p & 1, p))
    assert parts[0] & 1, "root atom missing from the partition"
    t = len(parts)
    assert t >= 4, "crossing family with fewer than four parts"
    between = defaultdict(int)
    where = {}
    for i, p in enumerate(parts):
        for a in range(nat):
            if p >> a & 1:
                where[a] = i
    for a, b, c in atom_edges:
        i, j = where[a], where[b]
        if i != j:
            between[(min(i, j), max(i, j))] += c
    nbrs = defaultdict(list)
    for (i, j), c in between.items():
        assert 2 * c == k, f"parts {i},{j} joined by {c} edges, expected {k // 2}"
        nbrs[i].append(j)
        nbrs[j].append(i)
    for i in range(t):
        assert len(nbrs[i]) == 2, f"part {i} has {len(nbrs[i])} cycle neighbours"
    first = min(nbrs[0], key=lambda j: parts[j])
    seq = [0, first]
    while len(seq) < t:
        a, b = seq[-2], seq[-1]
        nxt = nbrs[b][0] if nbrs[b][0] != a else nbrs[b][1]
        seq.append(nxt)
    assert len(set(seq)) == t
    return [parts[i] for i in seq]


def cactus_of_mincuts(vertices, edges, k: int, root: int, terminals=()) -> Cactus:
    """Cactus of all k-edge cuts of a k-edge-connected multigraph.

    Atoms (vertex classes no k-cut separates) come from pairwise max-flow;
    the k-cuts are then enumerated over atoms, crossing families become
    cycles and the rest tree edges, and the result is checked against the
    enumerated cuts.
    """
    vertices = sorted(vertices)
    edges = list(edges)
    for v in vertices:
        if v != root and max_flow(edges, root, v, limit=k) < k:
            raise PreconditionError(f"graph is not {k}-edge-connected (vertices {root} and {v})")
    atom_of, nat = _atoms(vertices, edges, k, root)
    if nat > MAX_CACTUS_ATOMS:
        raise ReductionError(f"{nat} min-cut atoms exceed the limit {MAX_CACTUS_ATOMS}")
    ae = defaultdict(int)
    for u, v in edges:
        a, b = atom_of[u], atom_of[v]
        if a != b:
            ae[(min(a, b), max(a, b))] += 1
    atom_edges = [(a, b, c) for (a, b), c in sorted(ae.items())]
    full = (1 << nat) - 1
    cuts = []
    for sub in range(1 << (nat - 1)):
        mask = sub << 1
        if mask == 0:
            continue
        val = _cut_value(mask, atom_edges)
        assert val >= k
        if val == k:
            cuts.append(mask)
    if not cuts:
        raise PreconditionError(f"minimum cut exceeds {k}; nothing to augment at this level")
    cutset = set(cuts)

    uf = UnionFind(range(len(cuts)))
    for i in range(len(cuts)):
        for j in range(i + 1, len(cuts)):
            if _crosses(cuts[i], cuts[j]):
                uf.union(i, j)
    groups = defaultdict(list)
    for i in range(len(cuts)):
        groups[uf.find(i)].append(cuts[i])
    cycles = []  # (union, ordered non-root parts)
    represented = set()
    for fam in sorted(groups.values()):
        if len(fam) < 2:
            continue
        ring = _circular_parts(fam, nat, atom_edges, k)
        parts = ring[1:]
        for i in range(len(parts)):
            s = 0
            for j in range(i, len(parts)):
                s |= parts[j]
                assert s in cutset, "consecutive union of a cut cycle is not a min cut"
                represented.add(s)
        cycles.append((full & ~ring[0], parts))
    tree_cuts = [c for c in cuts if c not in represented]

    sets = set(tree_cuts)
    for union, parts in cycles:
        sets.add(union)
        sets.update(parts)
    sets = sorted(sets, key=lambda s: (-s.bit_count(), s))
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            assert not _crosses(sets[i], sets[j]), "cut skeleton is not laminar"
    allsets = [full] + sets

    def parent(s):
        best = full
        for t in sets:
            if t != s and t & s == s and t.bit_count() < best.bit_count():
                best = t
        return best

    node = {s: i for i, s in enumerate(allsets)}
    nuf = UnionFind(range(len(allsets)))
    role = defaultdict(set)
    for s in tree_cuts:
        role[s].add("tree")
    for idx, (union, parts) in enumerate(cycles):
        role[union].add(("union", idx))
        for p in parts:
            role[p].add(("part", idx))
    for s in sets:
        ups = [r for r in role[s] if r == "tree" or r[0] == "part"]
        assert len(ups) <= 1, f"set {s:b} has {len(ups)} upward connections"
        if not ups:
            nuf.union(node[parent(s)], node[s])

    def nid(s):
        return nuf.find(node[s])

    child_cycles = defaultdict(list)
    for s in tree_cuts:
        child_cycles[nid(parent(s))].append([nid(s)])
    for union, parts in cycles:
        child_cycles[nid(union)].append([nid(p) for p in parts])
    holders = defaultdict(list)
    for v in vertices:
        a = atom_of[v]
        smallest = full
        for s in sets:
            if s >> a & 1 and s.bit_count() < smallest.bit_count():
                smallest = s
        holders[nid(smallest)].append(v)

    # an empty node on a tree edge with exactly two child tree edges is a 3-cycle
    changed = True
    while changed:
        changed = False
        for p in list(child_cycles):
            for idx, cyc in enumerate(child_cycles[p]):
                if len(cyc) != 1 or holders[cyc[0]]:
                    continue
                below = child_cycles.get(cyc[0], [])
                if len(below) == 2 and all(len(c) == 1 for c in below):
                    child_cycles[p][idx] = [below[0][0], below[1][0]]
                    del child_cycles[cyc[0]]
                    changed = True
                    break
            if changed:
                break

    # renumber nodes in walk order from the root
    order = []
    seen = set()

    def visit(x):
        seen.add(x)
        order.append(x)
        for cyc in sorted(child_cycles[x], key=lambda c: min(min(holders[y], default=10 ** 9) for y in c)):
            for y in cyc:
                if y not in seen:
                    visit(y)

    visit(nid(full))
    renum = {x: i for i, x in enumerate(order)}
    members = [sorted(holders[x]) for x in order]
    children = [[[renum[y] for y in cyc] for cyc in
                 sorted(child_cycles[x], key=lambda c: min(min(holders[y], default=10 ** 9) for y in c))]
                for x in order]
    node_of = {v: renum[nid_] for nid_, vs in holders.items() for v in vs}
    terms = frozenset(node_of[t] for t in terminals if t in node_of)
    cactus = Cactus(0, members, children, node_of, terms)

    expected = set()
    for c in cuts:
        expected.add(frozenset(v for v in vertices if c >> atom_of[v] & 1))
    got = set(cactus.cuts())
    if got != expected:
        raise AssertionError("cactus 2-cuts differ from the enumerated min cuts")
    if root not in members[0]:
        raise AssertionError("root vertex is not in the root node")
    return cactus


# --- unfolding ----------------------------------------------------------------

def unfold_order(cactus: Cactus) -> list[int]:
    """Ring sequence of cactus nodes from a depth-first walk; the root comes first."""
    seq = []

    def walk(x):
        seq.append(x)
        for cyc in cactus.children[x]:
            for y in cyc:
                walk(y)
            seq.append(x)

    walk(cactus.root)
    if len(seq) > 1:
        seq.pop()  # the walk returns to the root, which is already position 0
    while len(seq) < 3:
        seq.append(cactus.root)
    return seq


@dataclass
class LiftData:
    k: int
    zero_pairs: frozenset  # reduced pairs added by the reduction
    origin: dict  # reduced pair -> original Link
    occurrences: list = field(default_factory=list)  # ring position -> cactus node


def unfold_cactus_to_ring(cactus: Cactus, links, outside, k: int, *, all_terminal: bool = False,
                          rep=None):
    """SRAP instance on the unfolded ring plus lift data.

    ``rep`` maps original vertices to the vertices the cactus was built on
    (identity when omitted); ``outside`` lists representatives off the ring.
    """
    rep = rep or {}
    seq = unfold_order(cactus)
    n = len(seq)
    first = {}
    positions = defaultdict(list)
    for pos, x in enumerate(seq):
        first.setdefault(x, pos)
        positions[x].append(pos)
    if all_terminal:
        terminals = set(range(n))
    else:
        terminals = {first[x] for x in cactus.terminal_nodes}
        terminals.add(0)
    out_index = {v: n + i for i, v in enumerate(sorted(outside))}

    def place(v):
        r = rep.get(v, v)
        if r in cactus.node_of:
            return first[cactus.node_of[r]]
        return out_index[r]

    chosen = {}
    zero = set()
    for x, pos in positions.items():
        for a, b in zip(pos, pos[1:]):
            zero.add((a, b))
            chosen[(a, b)] = Link(a, b, 0)
    origin = {}
    for l in sorted(links, key=lambda l: (l.cost, l.pair)):
        a, b = place(l.u), place(l.v)
        if a == b:
            continue
        pair = (min(a, b), max(a, b))
        if pair in chosen:
            continue
        chosen[pair] = Link(pair[0], pair[1], l.cost)
        origin[pair] = l
    inst = build_instance(n, len(out_index), terminals, list(chosen.values()))
    return inst, LiftData(k, frozenset(zero), origin, seq)


# --- pipelines ----------------------------------------------------------------

@dataclass
class Reduction:
    instance: SrapInstance
    lift: LiftData
    cactus: Cactus
    source: object


def reduce_scap(inst: ScapInstance) -> Reduction:
    if inst.k != 2:
        raise ReductionError(f"the cactus reduction needs k = 2, got k = {inst.k}")
    norm = normalize_scap(inst)
    root = norm.rep[min(inst.terminals)]
    term_reps = {norm.rep[t] for t in inst.terminals}
    cactus = cactus_of_mincuts(norm.core, norm.edges, 2, root, term_reps)
    srap, lift = unfold_cactus_to_ring(cactus, inst.links, norm.outside, 2, rep=norm.rep)
    return Reduction(srap, lift, cactus, inst)


def reduce_sag(inst: SagInstance) -> Reduction:
    h = range(inst.h_vertices)
    cactus = cactus_of_mincuts(h, inst.edges, inst.k, 0, h)
    outside = list(range(inst.h_vertices, inst.h_vertices + inst.extra_vertices))
    srap, lift = unfold_cactus_to_ring(cactus, inst.links, outside, inst.k, all_terminal=True)
    return Reduction(srap, lift, cactus, inst)


def lift_solution(links, lift: LiftData, source=None) -> list[Link]:
    """Map reduced links back; zero-cost reduction links are discarded.

    With ``source`` (the original SCAP or SAG instance) the result is
    verified at connectivity k+1.
    """
    out = set()
    for l in links:
        pair = l.pair if isinstance(l, Link) else (min(l[0], l[1]), max(l[0], l[1]))
        if pair in lift.zero_pairs:
            continue
        if pair not in lift.origin:
            raise ReductionError(f"link {pair} is not part of the reduced instance")
        out.add(lift.origin[pair])
    out = sorted(out)
    if source is not None:
        scap = source.as_scap() if isinstance(source, SagInstance) else source
        edges = list(scap.edges) + [l.pair for l in out]
        if not verify_edge_connectivity(edges, sorted(scap.terminals), scap.k + 1):
            raise ReductionError("lifted solution fails the connectivity check")
    return out
