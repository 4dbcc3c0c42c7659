"""Constructive embeddings into commutator subgroups of V_d(G).

Pieces: the single-cone inclusion of G, conjugation of an element into a
cone, the finite-group prefix-replacement action (with parity fix), the
wreath-product embedding, the Kaloujnine-Krasner step through a finite
abelian quotient, and the end-to-end pipeline producing, for a finitely
presented self-similar group, an embedding into the simple commutator
subgroup of a Rover-Nekrashevych group with finite abelianization.
"""

from dataclasses import dataclass, field
from itertools import permutations

from .abelian import (AbClass, FinAbPresentation, abelianize_V, duplicate,
                      find_even_m, perm_sign)
from .errors import (AbelianizationStillInfiniteError, InfiniteQuotientError,
                     NekraError, NotInCommutatorError, TransversalNotFoundError)
from .rovernek import VElement, in_commutator, make_velement, v_compose, v_identity
from .ssgroup import IDENTITY_WORD, SSPresentation, Word, single
from .tree import Vertex, cone_complement


@dataclass(frozen=True)
class FiniteGroupTable:
    """Finite group as a multiplication table over indices 0..n-1.

    table[x][y] is the product xy.  The identity is required to be index 0
    (the factories below arrange this)."""

    table: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return 0

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inv(self, x: int) -> int:
        return self.table[x].index(0)


def make_group_table(table) -> FiniteGroupTable:
    table = tuple(tuple(row) for row in table)
    n = len(table)
    if any(len(row) != n for row in table):
        raise NekraError("multiplication table is not square")
    if any(table[0][y] != y or table[y][0] != y for y in range(n)):
        raise NekraError("index 0 is not a two-sided identity")
    for x in range(n):
        if sorted(table[x]) != list(range(n)) or sorted(r[x] for r in table) != list(range(n)):
            raise NekraError("table rows/columns are not permutations")
        if 0 not in table[x]:
            raise NekraError(f"element {x} has no inverse")
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if table[table[x][y]][z] != table[x][table[y][z]]:
                    raise NekraError("multiplication table is not associative")
    return FiniteGroupTable(table)


def cyclic_table(n: int) -> FiniteGroupTable:
    return make_group_table([[(x + y) % n for y in range(n)] for x in range(n)])


def symmetric_table(n: int) -> FiniteGroupTable:
    """S_n as a table; identity permutation gets index 0."""
    elems = sorted(permutations(range(n)), key=lambda p: p != tuple(range(n)))
    index = {p: i for i, p in enumerate(elems)}
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in elems] for p in elems]
    return make_group_table(table)


def embed_generator(G: SSPresentation, w: Word) -> VElement:
    """Single-cone inclusion of G into V_d(G)."""
    return make_velement(G, ((),), ((),), (G.check_word(w),))


def into_cone(e: VElement, w) -> VElement:
    """Conjugate e to be supported on the cone at w, identity elsewhere."""
    G = e.group
    w = tuple(w)
    domain = [w + v for v in e.domain]
    range_ = [w + v for v in e.range_]
    decs = list(e.decorations)
    for c in cone_complement(G.degree, (w,)):
        domain.append(c)
        range_.append(c)
        decs.append(IDENTITY_WORD)
    return make_velement(G, domain, range_, decs)


def spine_cone(i: int) -> Vertex:
    """The cone address 1^i 2 used to pack countably many disjoint cones."""
    return (1,) * i + (2,)


def finite_prefix_action(F: FiniteGroupTable, G: SSPresentation) -> list[VElement]:
    """Image of each f in F permuting the cones 1^i 2 by left translation.

    Elements whose cone permutation is odd additionally transpose two
    spare cones further down the 1-spine, so every image is an even
    permutation of cones and lands in the commutator subgroup.
    Indexed by element index (identity is index 0 and cone 1^1 2).
    """
    n = F.order
    cones = [spine_cone(i) for i in range(1, n + 1)]
    parity_cones = [spine_cone(n + 1), spine_cone(n + 2)]
    out = []
    for f in range(n):
        # element at position x (cone x+1) moves to the position of f*x
        perm = tuple(F.mul(f, x) + 1 for x in range(n))
        odd = perm_sign(perm) == 1
        domain = list(cones)
        range_ = [cones[F.mul(f, x)] for x in range(n)]
        used = list(cones)
        if odd:
            domain += parity_cones
            range_ += [parity_cones[1], parity_cones[0]]
            used += parity_cones
        for c in cone_complement(G.degree, used):
            domain.append(c)
            range_.append(c)
        decs = [IDENTITY_WORD] * len(domain)
        out.append(make_velement(G, domain, range_, decs))
    return out


def wreath_embed(F: FiniteGroupTable, images: list[VElement], f: int,
                 check_Q: FinAbPresentation,
                 prefix_action: list[VElement] | None = None) -> VElement:
    """Image of the wreath element (f; images) under the embedding of
    F wr [V,V] into [V,V].

    Every bottom entry must have trivial abelianization class; the top
    part composes on the left (acting group on the left), the bottom
    entries go into the disjoint cones 1^(x+1) 2.
    """
    if prefix_action is None:
        prefix_action = finite_prefix_action(F, images[0].group)
    result = prefix_action[f]
    for x, v in enumerate(images):
        if not in_commutator(v, check_Q):
            raise NotInCommutatorError(f"bottom entry {x} has nonzero class")
        result = v_compose(result, into_cone(v, spine_cone(x + 1)))
    return result


@dataclass(frozen=True)
class WreathElem:
    """Element (top; bottom) of F wr H with bottom entries as words,
    indexed by the elements of F."""

    top: int
    bottom: tuple[Word, ...]


def wreath_mul(F: FiniteGroupTable, u: WreathElem, v: WreathElem) -> WreathElem:
    """(f, a)(f', b) = (ff', x -> a_{f'x} b_x), acting group on the left."""
    bottom = tuple(u.bottom[F.mul(v.top, x)] * v.bottom[x] for x in range(F.order))
    return WreathElem(F.mul(u.top, v.top), bottom)


@dataclass
class KKContext:
    """Finite quotient data for the Kaloujnine-Krasner step.

    F is the image of G in Q (as an abstract table over the class list),
    transversal[x] is the BFS-shortest word mapping to class x."""

    group: SSPresentation
    Q: FinAbPresentation
    F: FiniteGroupTable
    classes: list[AbClass]
    transversal: list[Word]

    def class_index(self, c: AbClass) -> int:
        return self.classes.index(c)

    def word_class_index(self, w: Word) -> int:
        return self.class_index(self.Q.word_class(self.group, w))


def kk_context(G: SSPresentation, Q: FinAbPresentation, max_len: int = 64) -> KKContext:
    if not Q.is_finite():
        raise InfiniteQuotientError("quotient has positive free rank")
    zero = Q.zero()
    gen_classes = [Q.gen_images[name] for name in G.gen_names]
    # subgroup of Q generated by the generator images
    classes = [zero]
    frontier = [zero]
    while frontier:
        c = frontier.pop()
        for g in gen_classes:
            for nxt in (c + g, c + (-g)):
                if nxt not in classes:
                    classes.append(nxt)
                    frontier.append(nxt)
    index = {c: i for i, c in enumerate(classes)}
    table = [[index[x + y] for y in classes] for x in classes]
    F = make_group_table(table)
    # transversal of shortest words, BFS by length with lexicographic
    # tie-break over tokens (gen 0 first, positive sign before negative)
    transversal: list[Word | None] = [None] * len(classes)
    transversal[0] = IDENTITY_WORD
    found = 1
    queue = [IDENTITY_WORD]
    tokens = [(g, s) for g in range(G.n_gens) for s in (1, -1)]
    length = 0
    while found < len(classes):
        length += 1
        if length > max_len:
            raise TransversalNotFoundError("transversal BFS budget exhausted")
        nxt = []
        for w in queue:
            for g, s in tokens:
                w2 = w * single(g, s)
                if len(w2) != length:
                    continue
                nxt.append(w2)
                i = index[Q.word_class(G, w2)]
                if transversal[i] is None:
                    transversal[i] = w2
                    found += 1
        queue = nxt
        if not queue:
            raise TransversalNotFoundError("word tree exhausted before all cosets found")
    return KKContext(G, Q, F, classes, transversal)


def kk_embed(ctx: KKContext, g: Word) -> WreathElem:
    """Kaloujnine-Krasner image of g in (G/H) wr H for H = ker(G -> Q):
    top is the class of g, bottom[x] = t_{class(g)+x}^-1 g t_x."""
    G = ctx.group
    top = ctx.word_class_index(g)
    bottom = []
    for x in range(ctx.F.order):
        tx = ctx.transversal[x]
        t_out = ctx.transversal[ctx.F.mul(top, x)]
        w = t_out.inv() * g * tx
        if not ctx.Q.word_class(G, w).is_zero():
            raise NekraError("KK bottom entry fell outside the kernel")
        bottom.append(w)
    return WreathElem(top, tuple(bottom))


@dataclass
class PipelineResult:
    """Output of the end-to-end embedding pipeline."""

    d_prime: int
    m: int
    group: SSPresentation  # the (possibly duplicated) presentation
    Q: FinAbPresentation
    kk: KKContext | None  # None when Q is trivial (direct single-cone route)
    prefix_action: list[VElement] | None = None

    @property
    def index_H(self) -> int:
        return 1 if self.kk is None else self.kk.F.order

    def embed(self, w: Word) -> VElement:
        """Image of the word w in the commutator subgroup of V_{d'}(G)."""
        if self.kk is None:
            return embed_generator(self.group, w)
        we = kk_embed(self.kk, w)
        images = [embed_generator(self.group, b) for b in we.bottom]
        return wreath_embed(self.kk.F, images, we.top, self.Q, self.prefix_action)


def bh_pipeline(G: SSPresentation) -> PipelineResult:
    """End-to-end pipeline: duplicate until the V-abelianization Q is
    finite, then embed G through (G/H) wr H into the commutator subgroup.

    When Q is already finite no duplication happens (m = 1); when Q is
    trivial the embedding is the plain single-cone inclusion.
    """
    Q = abelianize_V(G)
    if Q.is_finite():
        m = 1
        Gp = G
    else:
        m = find_even_m(G)
        Gp = duplicate(G, m)
        Q = abelianize_V(Gp)
        if not Q.is_finite():
            raise AbelianizationStillInfiniteError(
                "duplicated presentation still has infinite V-abelianization")
    if Q.is_trivial():
        return PipelineResult(Gp.degree, m, Gp, Q, None)
    ctx = kk_context(Gp, Q)
    pa = finite_prefix_action(ctx.F, Gp)
    return PipelineResult(Gp.degree, m, Gp, Q, ctx, pa)
