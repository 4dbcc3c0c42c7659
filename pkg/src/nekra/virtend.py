"""Self-similar actions of R^n x| GL_n(R) from virtual endomorphisms,
for R = Z or Z[1/m], with ideal J = pR for a prime p not dividing m.

Ring elements are kept exact as num / m^exp with m not dividing num (or
exp = 0).  The tree of cosets is never materialized: the level-1 state
map is realized directly on affine elements, and vertices of the p^n-ary
tree are identified with sequences over the transversal {0..p-1}^n via a
mixed-radix letter bijection.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadLetterError, IdentityInputError, NekraError
from .ssgroup import SSPresentation
from .ssgroup import act as ss_act
from .tree import Vertex, check_vertex, vertices_up_to_depth


@dataclass(frozen=True)
class RingElem:
    """num / m^exp in Z[1/m]; the ring parameter m lives in the Ring."""

    num: int
    exp: int = 0


class Ring:
    """Exact arithmetic in Z[1/m] (m = 1 gives Z)."""

    def __init__(self, m: int):
        if m < 1:
            raise NekraError(f"ring parameter must be >= 1, got {m}")
        self.m = m

    def elem(self, num: int, exp: int = 0) -> RingElem:
        return self.normalize(num, exp)

    def normalize(self, num: int, exp: int) -> RingElem:
        if num == 0:
            return RingElem(0, 0)
        if self.m == 1:
            return RingElem(num, 0)
        while exp > 0 and num % self.m == 0:
            num //= self.m
            exp -= 1
        if exp < 0:
            num *= self.m ** (-exp)
            exp = 0
        return RingElem(num, exp)

    def zero(self) -> RingElem:
        return RingElem(0, 0)

    def one(self) -> RingElem:
        return RingElem(1, 0)

    def add(self, x: RingElem, y: RingElem) -> RingElem:
        e = max(x.exp, y.exp)
        num = x.num * self.m ** (e - x.exp) + y.num * self.m ** (e - y.exp)
        return self.normalize(num, e)

    def neg(self, x: RingElem) -> RingElem:
        return RingElem(-x.num, x.exp)

    def sub(self, x: RingElem, y: RingElem) -> RingElem:
        return self.add(x, self.neg(y))

    def mul(self, x: RingElem, y: RingElem) -> RingElem:
        return self.normalize(x.num * y.num, x.exp + y.exp)

    def to_fraction(self, x: RingElem) -> Fraction:
        return Fraction(x.num, self.m ** x.exp)

    def from_fraction(self, q: Fraction) -> RingElem:
        """Inverse of to_fraction; raises when q is not in Z[1/m]."""
        den = q.denominator
        if den == 1:
            return self.normalize(q.numerator, 0)
        if self.m == 1:
            raise NekraError(f"{q} is not an integer")
        exp = 0
        rem = den
        while rem > 1:
            g = math.gcd(rem, self.m)
            if g == 1:
                raise NekraError(f"{q} does not lie in Z[1/{self.m}]")
            rem //= g
            exp += 1
        # smallest exp with den | m^exp may exceed the step count; grow it
        while self.m ** exp % den != 0:
            exp += 1
        return self.normalize(q.numerator * (self.m ** exp // den), exp)

    def p_valuation(self, x: RingElem, p: int) -> int | None:
        """Largest k with x in p^k R; None for 0.  Requires p prime to m."""
        if x.num == 0:
            return None
        num = x.num
        k = 0
        while num % p == 0:
            num //= p
            k += 1
        return k

    def mod_p(self, x: RingElem, p: int) -> int:
        """Reduction into Z/p via the inverse of m mod p."""
        minv = pow(self.m, -1, p)
        return x.num * pow(minv, x.exp, p) % p

    def div_p(self, x: RingElem, p: int) -> RingElem:
        """Exact division by p (requires p | num after normalization)."""
        if x.num == 0:
            return x
        if x.num % p != 0:
            raise NekraError(f"{x} is not divisible by {p}")
        return self.normalize(x.num // p, x.exp)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class VirtEndSpec:
    """Parameters of the virtual endomorphism x = p on R^n for R = Z[1/m]:
    the ideal is pR, the transversal is {0..p-1}^n, the tree degree p^n."""

    m: int
    p: int
    n: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise NekraError(f"p = {self.p} is not prime")
        if math.gcd(self.p, self.m) != 1 or self.m < 1:
            raise NekraError(f"require gcd(p, m) = 1 and m >= 1, got p={self.p}, m={self.m}")
        if self.n < 1:
            raise NekraError("dimension must be >= 1")

    @property
    def ring(self) -> Ring:
        return Ring(self.m)

    @property
    def degree(self) -> int:
        return self.p ** self.n


Vec = tuple[RingElem, ...]
Mat = tuple[tuple[RingElem, ...], ...]


@dataclass(frozen=True)
class AffineElem:
    """Element (a, gamma) of R^n x| GL_n(R)."""

    a: Vec
    gamma: Mat


def _det(ring: Ring, gamma: Mat) -> Fraction:
    n = len(gamma)
    rows = [[ring.to_fraction(x) for x in row] for row in gamma]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if rows[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            det = -det
        det *= rows[k][k]
        for i in range(k + 1, n):
            f = rows[i][k] / rows[k][k]
            rows[i] = [x - f * y for x, y in zip(rows[i], rows[k])]
    return det


def _is_unit(ring: Ring, q: Fraction) -> bool:
    """True iff q = +-m^k for some integer k (unit of Z[1/m] up to sign)."""
    if q == 0:
        return False
    num, den = abs(q.numerator), q.denominator
    if ring.m == 1:
        return num == 1 and den == 1

    def power_of_m(x: int) -> bool:
        while x % ring.m == 0 and x > 1:
            x //= ring.m
        return x == 1

    return power_of_m(num) and power_of_m(den)


def make_affine(ring: Ring, a, gamma) -> AffineElem:
    a = tuple(ring.normalize(x.num, x.exp) for x in a)
    gamma = tuple(tuple(ring.normalize(x.num, x.exp) for x in row) for row in gamma)
    det = _det(ring, gamma)
    if not _is_unit(ring, det):
        raise NekraError(f"matrix determinant {det} is not a unit of Z[1/{ring.m}]")
    return AffineElem(a, gamma)


def affine_identity(ring: Ring, n: int) -> AffineElem:
    one, zero = ring.one(), ring.zero()
    return AffineElem(tuple(zero for _ in range(n)),
                      tuple(tuple(one if i == j else zero for j in range(n))
                            for i in range(n)))


def is_affine_identity(ring: Ring, e: AffineElem) -> bool:
    return e == affine_identity(ring, len(e.a))


def mat_vec(ring: Ring, gamma: Mat, v: Vec) -> Vec:
    return tuple(
        _sum(ring, (ring.mul(gamma[i][j], v[j]) for j in range(len(v))))
        for i in range(len(gamma))
    )


def _sum(ring: Ring, xs) -> RingElem:
    out = ring.zero()
    for x in xs:
        out = ring.add(out, x)
    return out


def affine_mul(ring: Ring, e1: AffineElem, e2: AffineElem) -> AffineElem:
    """(a1, g1)(a2, g2) = (a1 + g1 a2, g1 g2)."""
    n = len(e1.a)
    a = tuple(ring.add(e1.a[i], mat_vec(ring, e1.gamma, e2.a)[i]) for i in range(n))
    g = tuple(
        tuple(_sum(ring, (ring.mul(e1.gamma[i][k], e2.gamma[k][j]) for k in range(n)))
              for j in range(n))
        for i in range(n)
    )
    return AffineElem(a, g)


def affine_inv(ring: Ring, e: AffineElem) -> AffineElem:
    """(a, g)^-1 = (-g^-1 a, g^-1), computed exactly via Gauss-Jordan."""
    n = len(e.a)
    rows = [[ring.to_fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(e.gamma)]
    for k in range(n):
        piv = next(i for i in range(k, n) if rows[i][k] != 0)
        rows[k], rows[piv] = rows[piv], rows[k]
        rows[k] = [x / rows[k][k] for x in rows[k]]
        for i in range(n):
            if i != k and rows[i][k] != 0:
                f = rows[i][k]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[k])]
    ginv = tuple(tuple(ring.from_fraction(rows[i][n + j]) for j in range(n))
                 for i in range(n))
    a = tuple(ring.neg(x) for x in mat_vec(ring, ginv, e.a))
    return AffineElem(a, ginv)


def affine_pow(ring: Ring, e: AffineElem, k: int) -> AffineElem:
    if k < 0:
        return affine_pow(ring, affine_inv(ring, e), -k)
    out = affine_identity(ring, len(e.a))
    for _ in range(k):
        out = affine_mul(ring, out, e)
    return out


# --- the self-similar action -------------------------------------------------

T = tuple[int, ...]  # transversal element, entries in 0..p-1


def affine_state(spec: VirtEndSpec, e: AffineElem, t: T) -> tuple[T, AffineElem]:
    """Image transversal letter and level-1 state of e at letter t.

    t' = (a + gamma t) mod p componentwise, state = ((a + gamma t - t')/p,
    gamma); the matrix part survives because right-scaling by p commutes
    with left matrix multiplication.
    """
    ring = spec.ring
    tvec = tuple(ring.elem(x) for x in t)
    u = tuple(ring.add(e.a[i], mat_vec(ring, e.gamma, tvec)[i]) for i in range(spec.n))
    t_out = tuple(ring.mod_p(x, spec.p) for x in u)
    a = tuple(ring.div_p(ring.sub(u[i], ring.elem(t_out[i])), spec.p) for i in range(spec.n))
    return t_out, AffineElem(a, e.gamma)


def letter_to_t(spec: VirtEndSpec, letter: int) -> T:
    """Mixed-radix bijection: letter l in 1..p^n to digits of l-1 base p,
    most significant coordinate first."""
    if not (1 <= letter <= spec.degree):
        raise BadLetterError(f"letter {letter} out of range 1..{spec.degree}")
    value = letter - 1
    digits = []
    for _ in range(spec.n):
        value, r = divmod(value, spec.p)
        digits.append(r)
    return tuple(reversed(digits))


def t_to_letter(spec: VirtEndSpec, t: T) -> int:
    value = 0
    for digit in t:
        value = value * spec.p + digit
    return value + 1


def affine_act(spec: VirtEndSpec, e: AffineElem, v) -> Vertex:
    """Left action on vertices of the p^n-ary tree (length preserved)."""
    v = check_vertex(spec.degree, v)
    out = []
    cur = e
    for letter in v:
        t_out, cur = affine_state(spec, cur, letter_to_t(spec, letter))
        out.append(t_to_letter(spec, t_out))
    return tuple(out)


MOVED = "Moved"
UNKNOWN = "Unknown"


def faithfulness_search(spec: VirtEndSpec, e: AffineElem, max_depth: int):
    """First moved vertex, breadth-first by depth with lexicographic
    tie-break; (UNKNOWN, None) past max_depth.

    Memoized per (element, remaining depth) so self-similar subtrees (all
    children sharing one state, as for pure translations) stay cheap.
    """
    ring = spec.ring
    if is_affine_identity(ring, e):
        raise IdentityInputError("faithfulness search needs a nontrivial element")
    memo: dict = {}

    def min_moved(elem: AffineElem, depth: int):
        """(depth, path) of the shallowest (then lex-first) moved vertex
        below elem, or None within this depth."""
        if depth <= 0 or is_affine_identity(ring, elem):
            return None
        key = (elem, depth)
        if key in memo:
            return memo[key]
        best = None
        children = []
        for letter in range(1, spec.degree + 1):
            t = letter_to_t(spec, letter)
            t_out, state = affine_state(spec, elem, t)
            if t_out != t:
                best = (1, (letter,))
                break
            children.append((letter, state))
        if best is None:
            for letter, state in children:
                sub = min_moved(state, depth - 1)
                if sub is not None:
                    cand = (sub[0] + 1, (letter,) + sub[1])
                    if best is None or cand[0] < best[0]:
                        best = cand
                if best is not None and best[0] == 2:
                    break
        memo[key] = best
        return best

    found = min_moved(e, max_depth)
    if found is None:
        return UNKNOWN, None
    return MOVED, found[1]


def properness_valuation(spec: VirtEndSpec, a) -> int | None:
    """Largest k with a in (p^k R)^n; None for the zero vector."""
    ring = spec.ring
    vals = [ring.p_valuation(x, spec.p) for x in a]
    vals = [v for v in vals if v is not None]
    return min(vals) if vals else None


@dataclass
class CrosscheckReport:
    checked: int
    mismatches: list

    @property
    def ok(self) -> bool:
        return not self.mismatches


def crosscheck_symbolic(spec: VirtEndSpec, gens: dict, sym: SSPresentation,
                        depth: int) -> CrosscheckReport:
    """Compare the affine action with a symbolic wreath-recursion
    presentation, generator by generator, on all vertices to the given
    depth (under the mixed-radix letter bijection)."""
    if spec.degree != sym.degree:
        raise NekraError(f"degree mismatch: p^n = {spec.degree}, presentation {sym.degree}")
    mismatches = []
    checked = 0
    for name, elem in gens.items():
        word = sym.word(name)
        for v in vertices_up_to_depth(sym.degree, depth):
            if not v:
                continue
            checked += 1
            got = affine_act(spec, elem, v)
            want = ss_act(sym, word, v)
            if got != want:
                mismatches.append((name, v, got, want))
    return CrosscheckReport(checked, mismatches)


# --- presentation relators for Z[1/m]^n x| GL_n(Z[1/m]) ----------------------


def translation(ring: Ring, n: int, j: int, value: RingElem | None = None) -> AffineElem:
    """Translation by value * e_j (default e_j)."""
    ident = affine_identity(ring, n)
    a = list(ident.a)
    a[j] = value if value is not None else ring.one()
    return AffineElem(tuple(a), ident.gamma)


def scaling_matrix(ring: Ring, n: int, j: int) -> AffineElem:
    """Diagonal matrix with 1/m in the jth entry, 1 elsewhere."""
    ident = affine_identity(ring, n)
    rows = [list(r) for r in ident.gamma]
    rows[j][j] = ring.elem(1, 1)  # 1/m
    return AffineElem(ident.a, tuple(tuple(r) for r in rows))


def elementary_matrix(ring: Ring, n: int, i: int, j: int, value: RingElem | None = None) -> AffineElem:
    ident = affine_identity(ring, n)
    rows = [list(r) for r in ident.gamma]
    rows[i][j] = value if value is not None else ring.one()
    return AffineElem(ident.a, tuple(tuple(r) for r in rows))


def default_gl_generators(ring: Ring, n: int) -> dict:
    gens = {}
    for j in range(n):
        gens[f"scale_{j + 1}"] = scaling_matrix(ring, n, j)
    for i in range(n):
        for j in range(n):
            if i != j:
                gens[f"elem_{i + 1}{j + 1}"] = elementary_matrix(ring, n, i, j)
    return gens


@dataclass
class RelatorReport:
    results: list  # (family, label, is_identity)

    @property
    def ok(self) -> bool:
        return all(flag for _, _, flag in self.results)


def relator_verify(spec: VirtEndSpec, gl_gens: dict | None = None) -> RelatorReport:
    """Evaluate the relator families of the finite presentation of
    R^n x| GL_n(R) exactly in the concrete affine group:

    (1) scale_j x0(j)^m scale_j^-1 = x0(j),
    (2) everything at index j commutes with everything at index l != j,
    (3) gamma x0(j) gamma^-1 = translation by gamma e_j.

    The finitely many GL_n-internal relators (family 4) are out of scope.
    """
    ring = spec.ring
    n = spec.n
    m = max(spec.m, 1)
    if gl_gens is None:
        gl_gens = default_gl_generators(ring, n)
    x0 = [translation(ring, n, j) for j in range(n)]
    scale = [scaling_matrix(ring, n, j) for j in range(n)]
    results = []

    def check(family, label, lhs, rhs):
        diff = affine_mul(ring, lhs, affine_inv(ring, rhs))
        results.append((family, label, is_affine_identity(ring, diff)))

    for j in range(n):
        lhs = affine_mul(ring, affine_mul(ring, scale[j], affine_pow(ring, x0[j], m)),
                         affine_inv(ring, scale[j]))
        check(1, f"scale_{j + 1} x0({j + 1})^{m} scale_{j + 1}^-1 = x0({j + 1})", lhs, x0[j])
    for j in range(n):
        for l in range(n):
            if j == l:
                continue
            for uname, u in ((f"scale_{j + 1}", scale[j]), (f"x0({j + 1})", x0[j])):
                for vname, v in ((f"scale_{l + 1}", scale[l]), (f"x0({l + 1})", x0[l])):
                    check(2, f"[{uname}, {vname}] = 1",
                          affine_mul(ring, u, v), affine_mul(ring, v, u))
    for gname, gamma in gl_gens.items():
        for j in range(n):
            lhs = affine_mul(ring, affine_mul(ring, gamma, x0[j]), affine_inv(ring, gamma))
            ej = tuple(ring.one() if i == j else ring.zero() for i in range(n))
            rhs = AffineElem(mat_vec(ring, gamma.gamma, ej), affine_identity(ring, n).gamma)
            check(3, f"{gname} x0({j + 1}) {gname}^-1 = {gname}*e_{j + 1}", lhs, rhs)
    return RelatorReport(results)
