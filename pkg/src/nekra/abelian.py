"""Exact integer linear algebra and abelianization machinery.

Everything here is arbitrary-precision integer arithmetic: Smith normal
form with unimodular transforms, finite(ly generated) abelian quotients
presented by invariant factors plus free rank, the V_d(G)-abelianization
relation matrix, the even-m determinant search, and m-fold duplication of
a self-similar presentation.
"""

from dataclasses import dataclass

from .errors import InfiniteQuotientError
from .ssgroup import SSPresentation, Word, WreathRecursion

Matrix = list[list[int]]


def mat_identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)]
            for i in range(len(a))]


def mat_det(a: Matrix) -> int:
    """Fraction-free Bareiss determinant; exact for integer matrices."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass
class SNFResult:
    """U @ A @ V == S with U, V unimodular and S in Smith normal form."""

    U: Matrix
    S: Matrix
    V: Matrix


def snf(A: Matrix) -> SNFResult:
    """Smith normal form by row/column reduction, tracking transforms.

    Diagonal entries are nonnegative and form a divisibility chain
    (nonzero entries first, then zeros).
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    S = [row[:] for row in A]
    U = mat_identity(rows)
    V = mat_identity(cols)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row dst += q * row src
        S[dst] = [x + q * y for x, y in zip(S[dst], S[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for row in S:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    def negate_row(i):
        S[i] = [-x for x in S[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero absolute value in S[t:, t:]
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if S[i][j] != 0 and (pivot is None or abs(S[i][j]) < abs(S[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        # clear row and column t
        while True:
            dirty = False
            for i in range(t + 1, rows):
                if S[i][t] != 0:
                    q = S[i][t] // S[t][t]
                    add_row(t, i, -q)
                    if S[i][t] != 0:
                        swap_rows(t, i)
                    dirty = True
            for j in range(t + 1, cols):
                if S[t][j] != 0:
                    q = S[t][j] // S[t][t]
                    add_col(t, j, -q)
                    if S[t][j] != 0:
                        swap_cols(t, j)
                    dirty = True
            if not dirty:
                break
        # enforce divisibility of the remaining block by the pivot
        bad = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if S[i][j] % S[t][t] != 0:
                    bad = (i, j)
                    break
            if bad:
                break
        if bad:
            add_row(bad[0], t, 1)
            continue  # redo elimination at the same t
        if S[t][t] < 0:
            negate_row(t)
        t += 1
    return SNFResult(U, S, V)


@dataclass(frozen=True)
class AbClass:
    """Element class in a finite(ly generated) abelian presentation.

    coords lists torsion coordinates (one per invariant factor, reduced to
    canonical range) followed by free coordinates.
    """

    factors: tuple[int, ...]
    free_rank: int
    coords: tuple[int, ...]

    @staticmethod
    def make(factors, free_rank, raw):
        factors = tuple(factors)
        raw = list(raw)
        coords = tuple(
            raw[i] % factors[i] if i < len(factors) else raw[i]
            for i in range(len(factors) + free_rank)
        )
        return AbClass(factors, free_rank, coords)

    def __add__(self, other: "AbClass") -> "AbClass":
        return AbClass.make(self.factors, self.free_rank,
                            [x + y for x, y in zip(self.coords, other.coords)])

    def __neg__(self) -> "AbClass":
        return AbClass.make(self.factors, self.free_rank, [-x for x in self.coords])

    def scale(self, k: int) -> "AbClass":
        return AbClass.make(self.factors, self.free_rank, [k * x for x in self.coords])

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)


@dataclass(frozen=True)
class FinAbPresentation:
    """Abelian group as invariant factors (> 1) plus free rank, with the
    images of the source generators (and of the extra odd-degree sign
    generator, when present)."""

    invariant_factors: tuple[int, ...]
    free_rank: int
    gen_images: dict
    sign_image: AbClass | None = None

    def zero(self) -> AbClass:
        return AbClass.make(self.invariant_factors, self.free_rank,
                            [0] * (len(self.invariant_factors) + self.free_rank))

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def order(self) -> int | None:
        if not self.is_finite():
            return None
        n = 1
        for f in self.invariant_factors:
            n *= f
        return n

    def word_class(self, G: SSPresentation, w: Word) -> AbClass:
        out = self.zero()
        for g, k in w.syllables:
            out = out + self.gen_images[G.gen_names[g]].scale(k)
        return out


def quotient_presentation(n: int, rows: list[list[int]], names: list[str]) -> FinAbPresentation:
    """Z^n modulo the row span, with images of the n basis vectors.

    `names` labels the basis vectors; coordinates are read off through the
    SNF column transform.
    """
    if not rows:
        rows = [[0] * n] if n else []
    res = snf([row[:] for row in rows]) if rows else SNFResult([], [], mat_identity(n))
    diag = [res.S[j][j] for j in range(min(len(res.S), n))] if rows else []
    elementary = []  # (kind, position): kind in {'t', 'f'} for torsion/free
    factors = []
    for j in range(n):
        s = diag[j] if j < len(diag) else 0
        if s == 0:
            elementary.append(("f", j))
        elif s > 1:
            factors.append(s)
            elementary.append(("t", j))
        # s == 1: coordinate dies
    # order: torsion coords (in divisibility order) then free coords
    torsion_keep = [j for kind, j in elementary if kind == "t"]
    free_keep = [j for kind, j in elementary if kind == "f"]
    keep = torsion_keep + free_keep
    rank = len(free_keep)
    images = {}
    for i, name in enumerate(names):
        # image of basis vector e_i in the new coordinates y = x V
        row = res.V[i]
        images[name] = AbClass.make(factors, rank, [row[j] for j in keep])
    return FinAbPresentation(tuple(factors), rank, images)


def word_exponents(G: SSPresentation, w: Word, n: int | None = None) -> list[int]:
    out = [0] * (n if n is not None else G.n_gens)
    for g, k in w.syllables:
        out[g] += k
    return out


def abelianize_group(G: SSPresentation) -> FinAbPresentation:
    """Abelianization of G from its relator exponent matrix (via SNF)."""
    n = G.n_gens
    rows = [word_exponents(G, r, n) for r in G.relators]
    return quotient_presentation(n, rows, list(G.gen_names))


def perm_sign(perm: tuple[int, ...]) -> int:
    """Parity of a 1-based array-form permutation: 0 even, 1 odd."""
    seen = [False] * len(perm)
    sign = 0
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j] - 1
            length += 1
        sign ^= (length - 1) & 1
    return sign


SIGN_GEN = "__sign__"


def v_relation_rows(G: SSPresentation) -> tuple[int, list[list[int]]]:
    """Relation matrix presenting the abelianization of V_d(G).

    Returns (number of coordinates, rows).  For odd degree there is one
    extra coordinate for the sign generator of order 2.
    """
    n = G.n_gens
    odd = G.degree % 2 == 1
    width = n + 1 if odd else n
    rows = []
    for rel in G.relators:
        rows.append(word_exponents(G, rel, width))
    for i, rec in enumerate(G.recursions):
        row = [0] * width
        row[i] += 1
        for state in rec.states:
            for g, k in state.syllables:
                row[g] -= k
        if odd:
            row[n] -= perm_sign(rec.perm)
        rows.append(row)
    if odd:
        row = [0] * width
        row[n] = 2
        rows.append(row)
    return width, rows


def abelianize_V(G: SSPresentation) -> FinAbPresentation:
    """Abelianization of the Rover-Nekrashevych group V_d(G).

    Even d: quotient of the abelianization of G by g = g_1 + ... + g_d for
    every generator.  Odd d: same over (abelianization of G) + Z/2, with
    the permutation sign entering the extra coordinate.
    """
    width, rows = v_relation_rows(G)
    names = list(G.gen_names)
    odd = width == G.n_gens + 1
    if odd:
        names = names + [SIGN_GEN]
    pres = quotient_presentation(width, rows, names)
    sign_image = None
    gen_images = dict(pres.gen_images)
    if odd:
        sign_image = gen_images.pop(SIGN_GEN)
    return FinAbPresentation(pres.invariant_factors, pres.free_rank, gen_images, sign_image)


def state_sum_matrix(G: SSPresentation) -> Matrix:
    """n-by-n matrix whose column i is the abelianized sum of the level-1
    states of generator i, over the free abelian group on the generators."""
    n = G.n_gens
    A = [[0] * n for _ in range(n)]
    for i, rec in enumerate(G.recursions):
        for state in rec.states:
            for g, k in state.syllables:
                A[g][i] += k
    return A


def find_even_m(G: SSPresentation) -> int:
    """Smallest even m >= 2 with det(I - m*A) != 0 (relators ignored)."""
    n = G.n_gens
    A = state_sum_matrix(G)
    m = 2
    while True:
        M = [[(1 if i == j else 0) - m * A[i][j] for j in range(n)] for i in range(n)]
        if mat_det(M) != 0:
            return m
        m += 2


def duplicate(G: SSPresentation, m: int) -> SSPresentation:
    """m-fold duplicated presentation on the md-ary tree.

    Each generator permutation acts blockwise on m copies of {1..d}; the
    state list is repeated m times; relators carry over unchanged.
    """
    if m < 1:
        raise InfiniteQuotientError(f"duplication factor must be >= 1, got {m}")
    if m == 1:
        return G
    d = G.degree
    recursions = []
    for rec in G.recursions:
        perm = tuple(rec.perm[i] + block * d for block in range(m) for i in range(d))
        states = rec.states * m
        recursions.append(WreathRecursion(perm, states))
    return SSPresentation(d * m, G.gen_names, tuple(recursions), G.relators)
