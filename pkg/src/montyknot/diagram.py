"""Planar diagrams synthesized from link notation, with diagram-level invariants.

This module is the brute-force oracle: it draws an honest crossing diagram for
any LinkExpr by composing twist regions, then computes component count, the
Goeritz determinant from a checkerboard coloring, and the Alexander polynomial
from the Wirtinger presentation.  Nothing here knows the closed formulas it is
used to check.

Crossing model: each crossing stores its four incident arc labels in
counterclockwise order, slots 0..3, with the under-strand passing through
slots (0, 2) and the over-strand through slots (1, 3).  The chirality of a
crossing is therefore carried entirely by how its slots attach to the rest of
the diagram; `sign` records which handedness table created it.

Twist handedness: building a positive twist can wire the new crossing two
ways (mirror images).  The two global bits _CAL_H and _CAL_V below select the
wiring for positive horizontal and vertical half-twists.  They were fixed by
sweeping all four choices against independently known determinants (two-bridge
b(a,b) has determinant a; published Montesinos values 17, 3, 0); exactly the
two globally-mirrored assignments survive, and this one was kept.  The
remaining mirror freedom is a documented convention: determinants and
|Alexander| evaluations are mirror-invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .errors import MontyknotError
from .laurent import LaurentPoly, PolyMatrix, det_int_matrix
from .notation import LinkExpr, Montesinos, Pretzel, TwoBridge

_CAL_H = 1
_CAL_V = 1


class MultiComponentError(MontyknotError):
    """Alexander computation restricted to knots; a link was supplied."""


@dataclass(frozen=True)
class Crossing:
    """Arc labels at slots 0..3 (counterclockwise; under-strand at 0 and 2)."""

    slots: Tuple[int, int, int, int]
    sign: int


@dataclass(frozen=True)
class PlanarDiagram:
    crossings: Tuple[Crossing, ...]
    arcs: int
    free_circles: int
    provenance: Optional[LinkExpr] = None

    def __post_init__(self):
        seen = {}
        for c in self.crossings:
            for a in c.slots:
                seen[a] = seen.get(a, 0) + 1
        if set(seen) != set(range(self.arcs)) or any(v != 2 for v in seen.values()):
            raise ValueError("every arc label must occur exactly twice")

    def endpoints(self):
        """arc label -> ((c, s), (c', s')) over crossing slots."""
        ends = {a: [] for a in range(self.arcs)}
        for ci, c in enumerate(self.crossings):
            for s, a in enumerate(c.slots):
                ends[a].append((ci, s))
        return {a: tuple(v) for a, v in ends.items()}


class _DSU:
    def __init__(self):
        self.parent = []

    def make(self):
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb
        return rb


class _Builder:
    """Accumulates crossings and arc-gluing while tangles are composed.

    Tokens are strand endpoints; a DSU class is one arc of the final diagram.
    Crossing corner tokens remember their (crossing, slot); gluing a class to
    itself closes a loop, which is a free circle when the class never touched
    a crossing.
    """

    def __init__(self):
        self.dsu = _DSU()
        self.token_slot = []   # token -> (crossing, slot) or None
        self.slot_count = {}   # root -> number of slot tokens in class
        self.crossings = []    # crossing -> (4 tokens, sign)
        self.free_circles = 0

    def token(self, slot=None):
        t = self.dsu.make()
        self.token_slot.append(slot)
        self.slot_count[t] = 0 if slot is None else 1
        return t

    def crossing(self, sign):
        ci = len(self.crossings)
        toks = tuple(self.token((ci, s)) for s in range(4))
        self.crossings.append((toks, sign))
        return toks

    def glue(self, a, b):
        ra, rb = self.dsu.find(a), self.dsu.find(b)
        if ra == rb:
            if self.slot_count[ra] == 0:
                self.free_circles += 1
            return
        total = self.slot_count.pop(ra) + self.slot_count.pop(rb)
        self.slot_count[self.dsu.union(ra, rb)] = total

    def finish(self, provenance):
        roots = {}
        for t in range(len(self.token_slot)):
            roots.setdefault(self.dsu.find(t), []).append(t)
        arc_of = {}
        slotless = 0
        for r, members in roots.items():
            slots = [self.token_slot[t] for t in members if self.token_slot[t] is not None]
            if not slots:
                slotless += 1
                continue
            assert len(slots) == 2, "arc with %d crossing ends" % len(slots)
            arc_of[r] = len(arc_of)
        assert slotless == self.free_circles, "unglued boundary tokens remain"
        crossings = tuple(
            Crossing(tuple(arc_of[self.dsu.find(t)] for t in toks), sign)
            for toks, sign in self.crossings
        )
        return PlanarDiagram(crossings, len(arc_of), self.free_circles, provenance)


class _Tangle:
    """Four boundary tokens plus the tangle fraction tracked projectively.

    The fraction (num, den) follows the twist calculus: a horizontal
    half-twist of sign s sends p/q to (p + s q)/q, a vertical one sends it to
    p/(q + s p).  The zero tangle is 0/1, the infinity tangle 1/0.  The
    tracked value is asserted against the requested slope after every build,
    so a wiring mistake cannot pass silently.
    """

    __slots__ = ("nw", "ne", "sw", "se", "num", "den")

    def __init__(self, nw, ne, sw, se, num, den):
        self.nw, self.ne, self.sw, self.se = nw, ne, sw, se
        self.num, self.den = num, den


def _zero_tangle(b):
    nw, ne, sw, se = b.token(), b.token(), b.token(), b.token()
    b.glue(nw, ne)
    b.glue(sw, se)
    return _Tangle(nw, ne, sw, se, 0, 1)


def _inf_tangle(b):
    nw, ne, sw, se = b.token(), b.token(), b.token(), b.token()
    b.glue(nw, sw)
    b.glue(ne, se)
    return _Tangle(nw, ne, sw, se, 1, 0)


# Corner layout of a fresh crossing, by half-twist kind and handedness
# variant.  Values are the slot numbers of (for H) left-top, left-bottom,
# right-bottom, right-top, and (for V) top-left, bottom-left, bottom-right,
# top-right.  Both variants list corners counterclockwise; they differ by a
# cyclic shift, which exchanges the under and over diagonals.
_H_CORNERS = {1: (0, 1, 2, 3), -1: (3, 0, 1, 2)}
_V_CORNERS = {1: (0, 1, 2, 3), -1: (3, 0, 1, 2)}


def _r_twist(b, t, s):
    """One horizontal half-twist of sign s appended at the right boundary."""
    variant = _CAL_H * s
    toks = b.crossing(variant)
    lt, lb, rb, rt = (toks[i] for i in _H_CORNERS[variant])
    b.glue(t.ne, lt)
    b.glue(t.se, lb)
    t.ne, t.se = rt, rb
    t.num += s * t.den
    return t


def _b_twist(b, t, s):
    """One vertical half-twist of sign s appended at the bottom boundary."""
    variant = _CAL_V * s
    toks = b.crossing(variant)
    tl, bl, br, tr = (toks[i] for i in _V_CORNERS[variant])
    b.glue(t.sw, tl)
    b.glue(t.se, tr)
    t.sw, t.se = bl, br
    t.den += s * t.num
    return t


def _tangle_sum(b, t1, t2):
    b.glue(t1.ne, t2.nw)
    b.glue(t1.se, t2.sw)
    num = t1.num * t2.den + t2.num * t1.den
    den = t1.den * t2.den
    return _Tangle(t1.nw, t2.ne, t1.sw, t2.se, num, den)


def _peel(frac):
    """Decompose a fraction into twist layers, outermost first.

    Returns (layers, base) with layers a list of ("R", n) / ("B", n) and base
    "zero" or "inf".  A horizontal layer of n half-twists sends F to F + n; a
    vertical layer sends 1/F to 1/F + n.  Peeling truncates toward zero, so
    layer counts are nonzero and alternate in kind.
    """
    layers = []
    num, den = frac.numerator, frac.denominator
    mode = "R" if abs(num) >= den else "B"
    while num != 0:
        if mode == "R":
            n = int(Fraction(num, den))  # truncates toward zero
            layers.append(("R", n))
            num -= n * den
            mode = "B"
        else:
            n = int(Fraction(den, num))
            layers.append(("B", n))
            den -= n * num
            if den == 0:
                return layers, "inf"
            mode = "R"
    return layers, "zero"


def _build_tangle(b, frac):
    layers, base = _peel(frac)
    t = _zero_tangle(b) if base == "zero" else _inf_tangle(b)
    for kind, n in reversed(layers):
        op = _r_twist if kind == "R" else _b_twist
        s = 1 if n > 0 else -1
        for _ in range(abs(n)):
            t = op(b, t, s)
    assert Fraction(t.num, t.den) == frac if t.den else frac is None
    return t


def _vertical_tower(b, q):
    """A bare vertical twist region of q half-twists (tangle fraction 1/q)."""
    t = _inf_tangle(b)
    s = 1 if q > 0 else -1
    for _ in range(abs(q)):
        t = _b_twist(b, t, s)
    return t


def _numerator_close(b, t):
    b.glue(t.nw, t.ne)
    b.glue(t.sw, t.se)


def synthesize(expr):
    """Draw a planar diagram of the denoted link.

    Montesinos: each slope becomes a rational tangle from its twist-layer
    decomposition, tangles are joined left to right, e horizontal half-twists
    are appended, and the result is closed top-to-top, bottom-to-bottom.
    Pretzel parameters become bare vertical twist regions.  Two-bridge
    b(a, b) is the closed a/b tangle.
    """
    b = _Builder()
    if isinstance(expr, Montesinos):
        t = None
        for slope in expr.slopes:
            piece = _build_tangle(b, slope)
            t = piece if t is None else _tangle_sum(b, t, piece)
        if t is None:
            t = _zero_tangle(b)
        s = 1 if expr.e > 0 else -1
        for _ in range(abs(expr.e)):
            t = _r_twist(b, t, s)
        total = Fraction(t.num, t.den) if t.den else None
        assert total == expr.e + sum(expr.slopes, Fraction(0))
        _numerator_close(b, t)
    elif isinstance(expr, Pretzel):
        t = None
        for q in expr.twists:
            piece = _vertical_tower(b, q)
            t = piece if t is None else _tangle_sum(b, t, piece)
        _numerator_close(b, t)
    elif isinstance(expr, TwoBridge):
        if (expr.alpha, expr.beta) == (1, 0):
            t = _inf_tangle(b)
        else:
            t = _build_tangle(b, Fraction(expr.alpha, expr.beta))
        _numerator_close(b, t)
    else:
        raise TypeError("not a LinkExpr: %r" % (expr,))
    return b.finish(expr)


def components(d):
    """Number of link components, by strand tracing plus free circles."""
    if not d.crossings:
        return d.free_circles
    ends = d.endpoints()
    seen = set()
    count = 0
    for start_c in range(len(d.crossings)):
        for start_s in range(4):
            if (start_c, start_s) in seen:
                continue
            count += 1
            c, s = start_c, start_s
            while (c, s) not in seen:
                seen.add((c, s))
                out = (s + 2) % 4
                seen.add((c, out))
                (c1, s1), (c2, s2) = ends[d.crossings[c].slots[out]]
                c, s = (c2, s2) if (c1, s1) == (c, out) else (c1, s1)
    return count + d.free_circles


def _assert_connected(d):
    n = len(d.crossings)
    ends = d.endpoints()
    adj = {i: set() for i in range(n)}
    for (c1, _s1), (c2, _s2) in ends.values():
        adj[c1].add(c2)
        adj[c2].add(c1)
    todo, seen = [0], {0}
    while todo:
        for nb in adj[todo.pop()]:
            if nb not in seen:
                seen.add(nb)
                todo.append(nb)
    if len(seen) != n:
        raise MontyknotError("diagram is not connected")


def _faces(d):
    """Faces as orbits of (crossing, departure slot); face_of_gap[(c, g)] maps
    the corner between slots g and g+1 to its face id.  F = V + 2 is asserted,
    which pins the rotation system to a genuine planar embedding."""
    ends = d.endpoints()
    state_face = {}
    face_of_gap = {}
    nfaces = 0
    for c0 in range(len(d.crossings)):
        for s0 in range(4):
            if (c0, s0) in state_face:
                continue
            fid = nfaces
            nfaces += 1
            c, s = c0, s0
            while (c, s) not in state_face:
                state_face[(c, s)] = fid
                face_of_gap[(c, (s + 3) % 4)] = fid
                (c1, s1), (c2, s2) = ends[d.crossings[c].slots[s]]
                ac, as_ = (c2, s2) if (c1, s1) == (c, s) else (c1, s1)
                c, s = ac, (as_ + 1) % 4
    assert nfaces == len(d.crossings) + 2, "face count %d breaks Euler" % nfaces
    assert len(face_of_gap) == 4 * len(d.crossings)
    return nfaces, face_of_gap


def _two_color(nfaces, face_of_gap, ncross):
    color = {0: 0}
    todo = [0]
    adj = {f: set() for f in range(nfaces)}
    for c in range(ncross):
        for g in range(4):
            f1, f2 = face_of_gap[(c, g)], face_of_gap[(c, (g + 1) % 4)]
            adj[f1].add(f2)
            adj[f2].add(f1)
    while todo:
        f = todo.pop()
        for nb in adj[f]:
            if nb not in color:
                color[nb] = 1 - color[f]
                todo.append(nb)
            else:
                assert color[nb] != color[f], "checkerboard coloring failed"
    assert len(color) == nfaces
    return color


def goeritz_det(d, white_color=None):
    """|det| of a Goeritz matrix of the diagram; equals the link determinant.

    The checkerboard coloring is deterministic: white is the color class not
    containing the face at gap 0 of crossing 0 (white_color overrides this for
    cross-validation; the theorem makes both choices agree).  The deleted
    variable is the lowest-numbered white face incident to crossing 0.
    """
    if not d.crossings:
        return 1 if d.free_circles == 1 else 0
    if d.free_circles:
        return 0  # split diagram
    _assert_connected(d)
    nfaces, face_of_gap = _faces(d)
    color = _two_color(nfaces, face_of_gap, len(d.crossings))
    if white_color is None:
        white_color = 1 - color[face_of_gap[(0, 0)]]
    whites = sorted(f for f in range(nfaces) if color[f] == white_color)
    index = {f: i for i, f in enumerate(whites)}
    m = len(whites)
    g = [[0] * m for _ in range(m)]
    delete = None
    for c in range(len(d.crossings)):
        gaps = [gp for gp in range(4) if color[face_of_gap[(c, gp)]] == white_color]
        assert len(gaps) == 2 and (gaps[1] - gaps[0]) == 2, "white gaps not opposite"
        eta = 1 if gaps[0] == 1 else -1
        f1, f2 = face_of_gap[(c, gaps[0])], face_of_gap[(c, gaps[1])]
        if c == 0:
            delete = index[min(f1, f2)]
        if f1 == f2:
            continue
        i, j = index[f1], index[f2]
        g[i][j] -= eta
        g[j][i] -= eta
        g[i][i] += eta
        g[j][j] += eta
    rows = [
        [g[i][j] for j in range(m) if j != delete]
        for i in range(m)
        if i != delete
    ]
    return abs(det_int_matrix(rows))


def _orientations(d):
    """Trace strands; per crossing return (under_in_slot, over_in_slot)."""
    ends = d.endpoints()
    u_in = {}
    o_in = {}
    seen = set()
    for c0 in range(len(d.crossings)):
        for s0 in range(4):
            if (c0, s0) in seen:
                continue
            c, s = c0, s0
            while (c, s) not in seen:
                seen.add((c, s))
                if s % 2 == 0:
                    u_in[c] = s
                else:
                    o_in[c] = s
                out = (s + 2) % 4
                (c1, s1), (c2, s2) = ends[d.crossings[c].slots[out]]
                c, s = (c2, s2) if (c1, s1) == (c, out) else (c1, s1)
    return u_in, o_in


def alexander(d):
    """Alexander polynomial of a knot diagram, via Wirtinger and Fox calculus.

    The free-derivative matrix is assembled per crossing, one generator column
    and one redundant relation row are deleted, the Laurent determinant is
    divided by its integer content, and the result is normalized symmetric
    with positive leading coefficient.  |Delta(1)| = 1 is asserted.
    """
    if components(d) != 1:
        raise MultiComponentError("Alexander polynomial computed for knots only")
    n = len(d.crossings)
    if n <= 1:
        return LaurentPoly.one()
    _assert_connected(d)

    # Wirtinger arcs: diagram arcs merged across each over-passage
    dsu = _DSU()
    for _ in range(d.arcs):
        dsu.make()
    for c in d.crossings:
        dsu.union(c.slots[1], c.slots[3])
    warc = {}
    for a in range(d.arcs):
        warc.setdefault(dsu.find(a), len(warc))
    assert len(warc) == n, "knot diagram must have as many Wirtinger arcs as crossings"

    u_in, o_in = _orientations(d)
    t = LaurentPoly.t(1)
    one = LaurentPoly.one()
    rows = [[LaurentPoly.zero() for _ in range(n)] for _ in range(n)]
    for c in range(n):
        ui = u_in[c]
        sign = 1 if o_in[c] == (ui + 1) % 4 else -1
        cu_in = warc[dsu.find(d.crossings[c].slots[ui])]
        cu_out = warc[dsu.find(d.crossings[c].slots[(ui + 2) % 4])]
        cover = warc[dsu.find(d.crossings[c].slots[1])]
        if sign > 0:
            triples = ((cu_in, t), (cover, one - t), (cu_out, -one))
        else:
            triples = ((cu_in, one), (cover, t - one), (cu_out, -t))
        for col, val in triples:
            rows[c][col] = rows[c][col] + val
    minor = [row[: n - 1] for row in rows[: n - 1]]
    delta = PolyMatrix(minor).det().divide_content().normalize_symmetric()
    assert abs(delta.eval_int(1)) == 1, "Alexander normalization failed"
    return delta


def export_text(d):
    lines = []
    if d.provenance is not None:
        from .notation import print_expr

        lines.append("link %s" % print_expr(d.provenance))
    lines.append("crossings %d arcs %d free_circles %d" % (len(d.crossings), d.arcs, d.free_circles))
    for i, c in enumerate(d.crossings):
        lines.append("crossing %d: slots %d %d %d %d sign %+d" % ((i,) + c.slots + (c.sign,)))
    return "\n".join(lines)
