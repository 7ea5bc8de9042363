"""Singular cubes in a digital image and their normalized chain complex.

A singular q-cube is a continuous map from the digital unit q-cube I^q =
{0,1}^q into an image, stored as its full corner table: corner index c in
0..2^q-1 encodes the argument t by bit (i-1) of c = t_i, with t_1 the least
significant bit.  Continuity of the table means every one-bit pair of corners
maps to equal or c1-adjacent points.

The chain complex kept here is the normalized one: only nondegenerate cubes
are basis elements, and degenerate faces are dropped from boundaries.  The
coordinate operators (flip, transposition, positional shift, rotation) act by
permuting corner indices, so all of their algebra is exact bit manipulation.

Enumeration of all nondegenerate q-cubes is a depth-first search over corner
tables in lexicographic order, pruned by the common closed neighborhood of the
already-assigned one-bit predecessors of each corner.  A budget caps the
number of nondegenerate cubes produced; the top homology degree can be
streamed through the column reducer without materializing cube objects.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from .chain import (
    Chain,
    ChainComplex,
    FGAbelianGroup,
    SparseIntMatrix,
    ZERO_GROUP,
    _ColumnReducer,
    _invariant_factors_of_columns,
    homology,
)
from .errors import (
    BudgetExceeded,
    IndexOutOfRange,
    NoSuchFace,
    NotAComplex,
    NotCompatible,
    NotContinuous,
    NotInjective,
    PreconditionViolated,
    UnclassifiableCube,
)
from .image import adjacent

__all__ = [
    "DEFAULT_BUDGET",
    "SingularCube",
    "make_cube",
    "is_degenerate",
    "face",
    "boundary",
    "flip",
    "swap",
    "shift",
    "rotate",
    "apply_operator",
    "compatible",
    "append",
    "is_injective",
    "is_embedding",
    "degree_of_injectivity",
    "CubeType",
    "CubeClass",
    "classify",
    "OrientationData",
    "orientation",
    "enumerate_singular_cubes",
    "build_singular_complex",
    "singular_homology",
]

DEFAULT_BUDGET = 2_000_000


class _SpanSaturated(Exception):
    """Internal: the streamed column span already fills the cycle lattice."""


@dataclass(frozen=True)
class SingularCube:
    """A continuous map I^q -> Z^n as a corner table of length 2^q."""

    q: int
    corners: tuple

    @property
    def ambient_dim(self):
        return len(self.corners[0])

    def __str__(self):
        return f"I^{self.q}->{list(self.corners)}"


def make_cube(points):
    """Build a SingularCube from its corner table, checking continuity.

    The table length fixes q; a one-bit pair of corners mapping to distinct
    non-adjacent points raises NotContinuous carrying that pair.
    """
    corners = [tuple(p) for p in points]
    total = len(corners)
    if total == 0 or total & (total - 1):
        raise ValueError(f"corner table length {total} is not a power of two")
    q = total.bit_length() - 1
    n = len(corners[0])
    for p in corners:
        if len(p) != n:
            raise ValueError(f"corner {p} has {len(p)} coordinates, expected {n}")
        for c in p:
            if type(c) is not int:
                raise ValueError(f"non-integer coordinate {c!r}")
    for c in range(total):
        for b in range(q):
            bit = 1 << b
            if c & bit:
                continue
            x, y = corners[c], corners[c | bit]
            if x != y and not adjacent(x, y):
                raise NotContinuous(
                    f"corners {x} and {y} differ across t_{b + 1} "
                    "but are neither equal nor adjacent",
                    pair=(x, y),
                )
    return SingularCube(q, tuple(corners))


def is_degenerate(sigma):
    """True iff the cube does not depend on some coordinate t_i."""
    corners, q = sigma.corners, sigma.q
    total = 1 << q
    for b in range(q):
        bit = 1 << b
        if all(corners[c] == corners[c | bit] for c in range(total) if not c & bit):
            return True
    return False


# --- faces and boundary -----------------------------------------------------

@lru_cache(maxsize=None)
def _face_index_map(q, i, side_bit):
    """Corner-index table of the face fixing t_i = side_bit in a q-cube.

    Entry c' of the result is the parent corner index obtained by inserting
    side_bit at bit position i-1 of c'.
    """
    low_mask = (1 << (i - 1)) - 1
    out = []
    for c in range(1 << (q - 1)):
        low = c & low_mask
        high = c >> (i - 1)
        out.append(low | (side_bit << (i - 1)) | (high << i))
    return tuple(out)


def face(sigma, side, i):
    """The face of sigma with t_i frozen; side is 'front' (0) or 'back' (1)."""
    if side not in ("front", "back"):
        raise ValueError(f"side must be 'front' or 'back', got {side!r}")
    if not 1 <= i <= sigma.q:
        raise NoSuchFace(f"no coordinate {i} in a {sigma.q}-cube")
    fmap = _face_index_map(sigma.q, i, 0 if side == "front" else 1)
    return SingularCube(sigma.q - 1, tuple(sigma.corners[c] for c in fmap))


def boundary(sigma):
    """Normalized boundary: alternating sum of faces, degenerate ones dropped.

    The coefficient of the front face in direction i is (-1)^i, of the back
    face -(-1)^i.  Coinciding faces merge, possibly to zero.
    """
    acc = {}
    for i in range(1, sigma.q + 1):
        s = (-1) ** i
        for side, sgn in (("front", s), ("back", -s)):
            f = face(sigma, side, i)
            if is_degenerate(f):
                continue
            v = acc.get(f, 0) + sgn
            if v:
                acc[f] = v
            else:
                del acc[f]
    return Chain(sigma.q - 1, acc)


# --- coordinate operators ---------------------------------------------------

def _check_index(q, i):
    if type(i) is not int or not 1 <= i <= q:
        raise IndexOutOfRange(f"coordinate index {i!r} outside 1..{q}")


def flip(sigma, j):
    """Precompose with the reflection t_j -> 1 - t_j."""
    _check_index(sigma.q, j)
    bit = 1 << (j - 1)
    corners = sigma.corners
    return SingularCube(sigma.q, tuple(corners[c ^ bit] for c in range(len(corners))))


def swap(sigma, i, j):
    """Precompose with the transposition of t_i and t_j."""
    _check_index(sigma.q, i)
    _check_index(sigma.q, j)
    if i == j:
        return sigma
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    both = bi | bj
    corners = sigma.corners
    out = []
    for c in range(len(corners)):
        masked = c & both
        if masked == 0 or masked == both:
            out.append(corners[c])
        else:
            out.append(corners[c ^ both])
    return SingularCube(sigma.q, tuple(out))


def shift(sigma, i, j):
    """Precompose with the cycle moving t_i into slot j.

    For i < j the variables strictly between slide down one slot; for i > j
    they slide up.  Equal indices give the identity.
    """
    q = sigma.q
    _check_index(q, i)
    _check_index(q, j)
    if i == j:
        return sigma
    # source bit position feeding each output bit b (0-based)
    src = list(range(q))
    if i < j:
        for b in range(i - 1, j - 1):
            src[b] = b + 1
        src[j - 1] = i - 1
    else:
        for b in range(j, i):
            src[b] = b - 1
        src[j - 1] = i - 1
    corners = sigma.corners
    out = []
    for c in range(len(corners)):
        m = 0
        for b in range(q):
            m |= ((c >> src[b]) & 1) << b
        out.append(corners[m])
    return SingularCube(q, tuple(out))


def rotate(sigma, i, j):
    """Precompose with the quarter-turn: reflect t_j, then transpose t_i, t_j.

    With i == j this degenerates to the flip of t_i.
    """
    _check_index(sigma.q, i)
    _check_index(sigma.q, j)
    return swap(flip(sigma, j), i, j)


_OPERATORS = {"F": (flip, 1), "C": (swap, 2), "S": (shift, 2), "R": (rotate, 2)}


def apply_operator(sigma, op):
    """Apply an operator tag ('F', j), ('C', i, j), ('S', i, j) or ('R', i, j)."""
    if not op or op[0] not in _OPERATORS:
        raise ValueError(f"unknown operator {op!r}")
    fn, arity = _OPERATORS[op[0]]
    if len(op) != arity + 1:
        raise ValueError(f"operator {op[0]} takes {arity} indices, got {len(op) - 1}")
    return fn(sigma, *op[1:])


# --- append -----------------------------------------------------------------

def compatible(sigma, gamma):
    """True iff the two q-cubes can bound a (q+1)-cube: matching corners are
    equal or adjacent pointwise."""
    if sigma.q != gamma.q or sigma.ambient_dim != gamma.ambient_dim:
        return False
    for x, y in zip(sigma.corners, gamma.corners):
        if x != y and not adjacent(x, y):
            return False
    return True


def append(sigma, gamma):
    """The (q+1)-cube running from sigma (t_{q+1}=0) to gamma (t_{q+1}=1)."""
    if sigma.q != gamma.q or sigma.ambient_dim != gamma.ambient_dim:
        raise NotCompatible("cubes differ in degree or ambient dimension")
    for x, y in zip(sigma.corners, gamma.corners):
        if x != y and not adjacent(x, y):
            raise NotCompatible(f"corners {x} and {y} are neither equal nor adjacent")
    return SingularCube(sigma.q + 1, sigma.corners + gamma.corners)


# --- injectivity, classification, orientation --------------------------------

def is_injective(sigma):
    return len(set(sigma.corners)) == len(sigma.corners)


def is_embedding(sigma):
    """True iff the cube maps I^q bijectively onto an elementary q-cube."""
    if not is_injective(sigma):
        return False
    pts = sigma.corners
    n = sigma.ambient_dim
    lo = tuple(min(p[k] for p in pts) for k in range(n))
    hi = tuple(max(p[k] for p in pts) for k in range(n))
    spread = 0
    for k in range(n):
        d = hi[k] - lo[k]
        if d > 1:
            return False
        spread += d
    if spread != sigma.q:
        return False
    for p in pts:
        for k in range(n):
            if p[k] != lo[k] and p[k] != hi[k]:
                return False
    return True


@lru_cache(maxsize=65536)
def _degree_of_injectivity(q, corners):
    if len(set(corners)) == len(corners):
        return q
    # q >= 1 here: a noninjective 0-cube is impossible
    best = 0
    for i in range(1, q + 1):
        for side_bit in (0, 1):
            fmap = _face_index_map(q, i, side_bit)
            d = _degree_of_injectivity(q - 1, tuple(corners[c] for c in fmap))
            if d > best:
                best = d
                if best == q - 1:
                    return best
    return best


def degree_of_injectivity(sigma):
    """q for injective cubes, else the largest degree of injectivity of a face;
    a 0-cube has degree 0."""
    return _degree_of_injectivity(sigma.q, sigma.corners)


class CubeType(enum.Enum):
    TYPE1 = 1
    TYPE2 = 2
    TYPE3 = 3


@dataclass(frozen=True)
class CubeClass:
    """Shape of a nondegenerate cube one short of injectivity.

    kind TYPE1: all four faces in coordinates coords=(i, j) are injective.
    kind TYPE2: exactly the two faces (one per coordinate of coords) are.
    kind TYPE3: exactly the front and back face in the single coords=(i,) are.
    """

    kind: CubeType
    coords: tuple


def classify(sigma):
    """Classify a nondegenerate q-cube of injectivity degree q-1, q >= 2.

    Violated preconditions raise PreconditionViolated; a face pattern outside
    the three recognized shapes raises UnclassifiableCube.
    """
    q = sigma.q
    if q < 2:
        raise PreconditionViolated(f"classification needs q >= 2, got q={q}")
    if is_degenerate(sigma):
        raise PreconditionViolated("cube is degenerate")
    d = degree_of_injectivity(sigma)
    if d != q - 1:
        raise PreconditionViolated(f"degree of injectivity is {d}, expected {q - 1}")
    inj = []
    for i in range(1, q + 1):
        for side in ("front", "back"):
            if is_injective(face(sigma, side, i)):
                inj.append((i, side))
    coords = sorted({i for i, _ in inj})
    if len(inj) == 4 and len(coords) == 2:
        # both faces in each of two coordinates
        return CubeClass(CubeType.TYPE1, tuple(coords))
    if len(inj) == 2 and len(coords) == 2:
        return CubeClass(CubeType.TYPE2, tuple(coords))
    if len(inj) == 2 and len(coords) == 1:
        return CubeClass(CubeType.TYPE3, tuple(coords))
    raise UnclassifiableCube(
        f"injective faces {inj} fit no recognized pattern for {sigma}"
    )


@dataclass(frozen=True)
class OrientationData:
    """Edge data of an injective cube.

    k[i-1] is the ambient coordinate (1-based) in which the edge from corner 0
    to corner theta^i moves, edge_signs[i-1] its direction, and o the overall
    sign: the parity of the permutation ranking k times the product of the
    edge directions.
    """

    k: tuple
    edge_signs: tuple
    o: int


def orientation(sigma):
    if not is_injective(sigma):
        raise NotInjective(f"{sigma} is not injective")
    corners = sigma.corners
    base = corners[0]
    ks = []
    signs = []
    for i in range(1, sigma.q + 1):
        tip = corners[1 << (i - 1)]
        moved = [(pos, tip[pos] - base[pos]) for pos in range(len(base)) if tip[pos] != base[pos]]
        if len(moved) != 1 or moved[0][1] not in (-1, 1):
            raise RuntimeError(f"edge {i} of {sigma} is not a unit step")
        ks.append(moved[0][0] + 1)
        signs.append(moved[0][1])
    if len(set(ks)) != len(ks):
        raise RuntimeError(f"repeated edge direction in injective cube {sigma}")
    inv = 0
    for a in range(len(ks)):
        for b in range(a + 1, len(ks)):
            if ks[a] > ks[b]:
                inv += 1
    o = (-1) ** inv
    for s in signs:
        o *= s
    return OrientationData(k=tuple(ks), edge_signs=tuple(signs), o=o)


# --- enumeration ------------------------------------------------------------

def _neighbor_tables(X):
    pts = X.sorted_points
    index = {p: i for i, p in enumerate(pts)}
    nb_list = []
    nb_set = []
    for p in pts:
        ids = sorted([index[p]] + [index[t] for t in X.neighbors(p)])
        nb_list.append(ids)
        nb_set.append(frozenset(ids))
    return pts, nb_list, nb_set


def _enumerate_nondegenerate(X, q, budget, emit):
    """Drive emit(assign) for every nondegenerate q-cube on X, in lex order.

    assign is a tuple of indices into X.sorted_points, one per corner index.
    Raises BudgetExceeded as soon as more than budget cubes have been emitted.
    """
    pts, nb_list, nb_set = _neighbor_tables(X)
    npts = len(pts)
    if npts == 0:
        return
    if q == 0:
        if npts > budget:
            raise BudgetExceeded(0, budget)
        for i in range(npts):
            emit((i,))
        return
    total = 1 << q
    preds = [[c ^ (1 << b) for b in range(q) if (c >> b) & 1] for c in range(total)]
    bits = [1 << b for b in range(q)]
    assign = [0] * total
    count = 0

    def nondegenerate():
        for bit in bits:
            for c in range(total):
                if not c & bit and assign[c] != assign[c | bit]:
                    break
            else:
                return False  # constant across this coordinate
        return True

    def rec(c):
        nonlocal count
        if c == total:
            if nondegenerate():
                count += 1
                if count > budget:
                    raise BudgetExceeded(q, budget)
                emit(tuple(assign))
            return
        ps = preds[c]
        if not ps:
            cands = range(npts)
        else:
            cands = nb_list[assign[ps[0]]]
            if len(ps) > 1:
                rest = [nb_set[assign[p]] for p in ps[1:]]
                cands = [v for v in cands if all(v in s for s in rest)]
        nxt = c + 1
        for v in cands:
            assign[c] = v
            rec(nxt)

    rec(0)


def enumerate_singular_cubes(X, q, budget=DEFAULT_BUDGET):
    """All nondegenerate singular q-cubes on X, lexicographic in corner tables."""
    if q < 0:
        raise ValueError("q must be nonnegative")
    pts = X.sorted_points
    out = []
    _enumerate_nondegenerate(
        X, q, budget, lambda assign: out.append(
            SingularCube(q, tuple(pts[a] for a in assign))
        )
    )
    return out


def build_singular_complex(X, max_q, budget=DEFAULT_BUDGET):
    """The normalized singular chain complex of X through degree max_q + 1.

    One extra degree is materialized so homology through max_q is exact.
    """
    if max_q < 0:
        raise ValueError("max_q must be nonnegative")
    top = max_q + 1
    bases = [tuple(enumerate_singular_cubes(X, q, budget)) for q in range(top + 1)]
    mats = []
    for q in range(1, top + 1):
        rowindex = {s.corners: r for r, s in enumerate(bases[q - 1])}
        fmaps = [
            (_face_index_map(q, i, sb), -((-1) ** i) if sb else (-1) ** i)
            for i in range(1, q + 1)
            for sb in (0, 1)
        ]
        cols = []
        for s in bases[q]:
            corners = s.corners
            col = {}
            for fmap, sgn in fmaps:
                fc = tuple(corners[c] for c in fmap)
                r = rowindex.get(fc)
                if r is None:
                    continue  # degenerate face, dropped by normalization
                v = col.get(r, 0) + sgn
                if v:
                    col[r] = v
                else:
                    del col[r]
            cols.append(col)
        mats.append(SparseIntMatrix(len(bases[q - 1]), len(bases[q]), cols))
    return ChainComplex(bases, mats)


def singular_homology(X, max_q, budget=DEFAULT_BUDGET):
    """[H_0, ..., H_max_q] of the normalized singular complex.

    Degrees 0..max_q are materialized; degree max_q+1 is streamed column by
    column through the integer reducer, so its cubes are never stored.  If the
    enumeration budget is exhausted at degree j, every group needing that
    degree (q >= j-1) comes back as None instead of a group.
    """
    if max_q < 0:
        raise ValueError("max_q must be nonnegative")
    if len(X) == 0:
        return [ZERO_GROUP] * (max_q + 1)
    bases = []
    fail_at = None
    for q in range(max_q + 1):
        try:
            bases.append(tuple(enumerate_singular_cubes(X, q, budget)))
        except BudgetExceeded as e:
            fail_at = e.degree
            break
    m = len(bases) - 1  # top materialized degree
    if m < 0:
        return [None] * (max_q + 1)
    mats = []
    for q in range(1, m + 1):
        rowindex = {s.corners: r for r, s in enumerate(bases[q - 1])}
        fmaps = [
            (_face_index_map(q, i, sb), -((-1) ** i) if sb else (-1) ** i)
            for i in range(1, q + 1)
            for sb in (0, 1)
        ]
        cols = []
        for s in bases[q]:
            corners = s.corners
            col = {}
            for fmap, sgn in fmaps:
                fc = tuple(corners[c] for c in fmap)
                r = rowindex.get(fc)
                if r is None:
                    continue
                v = col.get(r, 0) + sgn
                if v:
                    col[r] = v
                else:
                    del col[r]
            cols.append(col)
        mats.append(SparseIntMatrix(len(bases[q - 1]), len(bases[q]), cols))
    trunc = ChainComplex(bases, mats)
    if not trunc.is_complex():
        raise NotAComplex("boundary composed with boundary is nonzero")

    groups = [None] * (max_q + 1)
    if fail_at is not None:
        # H_q computable only when degrees q and q+1 both materialized
        for q in range(max(0, fail_at - 1)):
            groups[q] = homology(trunc, q)
        return groups

    for q in range(m):
        groups[q] = homology(trunc, q)

    # stream degree m+1
    q1 = m + 1
    pts = X.sorted_points
    pindex = {p: a for a, p in enumerate(pts)}
    rowindex = {tuple(pindex[p] for p in s.corners): r for r, s in enumerate(bases[m])}
    fmaps = [
        (_face_index_map(q1, i, sb), -((-1) ** i) if sb else (-1) ** i)
        for i in range(1, q1 + 1)
        for sb in (0, 1)
    ]
    dm = trunc.boundary_matrix(m)
    rank_m, _ = trunc._reduction(m)
    # im d_{m+1} lives inside ker d_m; once the streamed span reaches that
    # rank with an all-unit pivot set it IS the kernel lattice, no further
    # column can move the quotient, and enumeration may stop
    kernel_dim = len(bases[m]) - rank_m
    red = _ColumnReducer()
    streamed = 0

    def emit(assign, reduce_all):
        nonlocal streamed
        col = {}
        for fmap, sgn in fmaps:
            fc = tuple(assign[c] for c in fmap)
            r = rowindex.get(fc)
            if r is None:
                continue
            v = col.get(r, 0) + sgn
            if v:
                col[r] = v
            else:
                del col[r]
        streamed += 1
        if streamed <= 64 or streamed % 1024 == 0:
            acc = {}
            for r, v in col.items():
                for rr, w in dm.columns[r].items():
                    s = acc.get(rr, 0) + v * w
                    if s:
                        acc[rr] = s
                    else:
                        del acc[rr]
            if acc:
                raise NotAComplex("streamed boundary column is not a cycle")
        if not col:
            return
        if not reduce_all:
            # cheap pass: claim an unclaimed minimal row or improve a
            # non-unit pivot; columns falling on a unit pivot are dropped
            # (they cannot change the span unless the cheap pass ends short,
            # and then the full pass below reduces every column anyway)
            p = red.pivots.get(min(col))
            if p is not None and p[min(col)] == 1:
                return
        red.add(col)
        if red.rank == kernel_dim and red.nonunit == 0:
            raise _SpanSaturated

    saturated = False
    try:
        _enumerate_nondegenerate(X, q1, budget, lambda a: emit(a, False))
    except BudgetExceeded:
        return groups  # H_m stays None
    except _SpanSaturated:
        saturated = True
    if not saturated:
        try:
            _enumerate_nondegenerate(X, q1, budget, lambda a: emit(a, True))
        except BudgetExceeded:
            return groups
        except _SpanSaturated:
            pass
    rank_top = red.rank
    factors_top = _invariant_factors_of_columns(red.pivots.values())
    free = len(bases[m]) - rank_m - rank_top
    groups[m] = FGAbelianGroup(free, tuple(t for t in factors_top if t > 1))
    return groups
