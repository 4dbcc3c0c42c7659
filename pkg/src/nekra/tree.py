"""Combinatorics of the rooted d-ary tree.

Vertices are tuples of 1-based letters; the empty tuple is the root.  A
cone is always represented by its address vertex.  Antichains are ordered
tuples of pairwise incomparable vertices; a complete antichain is one
whose cone weights d^(-|w|) sum to exactly 1 (checked with Fraction, so
no depth limit applies).
"""

from fractions import Fraction

from .errors import BadLetterError, IncompleteAntichainError, NotAntichainError

Vertex = tuple[int, ...]

ROOT: Vertex = ()


def check_degree(d: int) -> int:
    if not isinstance(d, int) or d < 2:
        raise BadLetterError(f"degree must be an integer >= 2, got {d!r}")
    return d


def check_vertex(d: int, v) -> Vertex:
    v = tuple(v)
    for letter in v:
        if not isinstance(letter, int) or not (1 <= letter <= d):
            raise BadLetterError(f"letter {letter!r} out of range 1..{d}")
    return v


def is_prefix(u: Vertex, v: Vertex) -> bool:
    """True iff u is a (non-strict) prefix of v."""
    return len(u) <= len(v) and v[: len(u)] == u


def comparable(u: Vertex, v: Vertex) -> bool:
    return is_prefix(u, v) or is_prefix(v, u)


def check_incomparable(vs) -> None:
    vs = list(vs)
    for i, u in enumerate(vs):
        for v in vs[i + 1 :]:
            if comparable(u, v):
                raise NotAntichainError(f"{list(u)} and {list(v)} are comparable")


def check_complete_antichain(d: int, vs) -> tuple[Vertex, ...]:
    """Validate that vs is a complete antichain over degree d.

    Returns the antichain (order preserved).  Raises NotAntichainError on a
    prefix violation and IncompleteAntichainError when the exact rational
    cone weights do not sum to 1.
    """
    check_degree(d)
    vs = tuple(check_vertex(d, v) for v in vs)
    check_incomparable(vs)
    total = sum(Fraction(1, d ** len(v)) for v in vs)
    if total != 1:
        raise IncompleteAntichainError(f"cone weights sum to {total}, not 1")
    return vs


def common_refinement(d: int, a, b) -> tuple[Vertex, ...]:
    """Coarsest complete antichain refining both a and b.

    Every returned vertex extends exactly one vertex of a and one of b.
    Ordered by a's order, then b's order within a split cone.
    """
    a = check_complete_antichain(d, a)
    b = check_complete_antichain(d, b)
    out: list[Vertex] = []
    for u in a:
        if any(is_prefix(w, u) for w in b):
            # u already lives inside a single cone of b
            out.append(u)
        else:
            out.extend(w for w in b if is_prefix(u, w))
    return tuple(out)


def cone_complement(d: int, vs) -> tuple[Vertex, ...]:
    """Vertices whose cones fill the boundary not covered by vs.

    vs must be pairwise incomparable (completeness not required).  The
    result is disjoint from vs and vs + result is a complete antichain.
    """
    check_degree(d)
    vs = tuple(check_vertex(d, v) for v in vs)
    check_incomparable(vs)

    def walk(prefix: Vertex) -> list[Vertex]:
        if prefix in vs:
            return []
        if not any(is_prefix(prefix, v) for v in vs):
            return [prefix]
        out: list[Vertex] = []
        for j in range(1, d + 1):
            out.extend(walk(prefix + (j,)))
        return out

    if not vs:
        return (ROOT,)
    return tuple(walk(ROOT))


def vertices_of_depth(d: int, depth: int):
    """All vertices of exactly the given depth, in lexicographic order."""
    if depth == 0:
        yield ROOT
        return
    for v in vertices_of_depth(d, depth - 1):
        for j in range(1, d + 1):
            yield v + (j,)


def vertices_up_to_depth(d: int, depth: int):
    for k in range(depth + 1):
        yield from vertices_of_depth(d, k)
