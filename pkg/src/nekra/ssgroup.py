"""Self-similar group presentations and the wreath-recursion calculus.

Convention: the tree action is a left action with g(i.u) = sigma(i).g_i(u),
so products recurse as (gh) <-> sigma*tau with state_i = g_{tau(i)} h_i and
inverses as g^-1 <-> sigma^-1 with state_i = (g_{sigma^-1(i)})^-1.

Words are stored run-length encoded: a syllable (gen, k) with k a nonzero
integer stands for gen^k.  This lets `act` handle huge powers of a single
generator (e.g. the odometer a^k for k ~ 10^6) in time logarithmic in k
per tree level, by walking permutation cycles instead of expanding.
"""

from dataclasses import dataclass, field

from .errors import BadLetterError, UnknownGeneratorError, WordBudgetError
from .tree import Vertex, check_degree, check_vertex

Syllable = tuple[int, int]  # (generator index, exponent != 0)

# letters a syllable expansion may produce before we give up
MAX_EXPANSION = 10 ** 6


@dataclass(frozen=True)
class Word:
    """Freely reduced word in generators and their inverses."""

    syllables: tuple[Syllable, ...] = ()

    def __len__(self) -> int:
        return sum(abs(k) for _, k in self.syllables)

    def is_identity(self) -> bool:
        return not self.syllables

    def inv(self) -> "Word":
        return Word(tuple((g, -k) for g, k in reversed(self.syllables)))

    def __mul__(self, other: "Word") -> "Word":
        return reduce_syllables(self.syllables + other.syllables)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inv() ** (-n)
        out = IDENTITY_WORD
        for _ in range(n):
            out = out * self
        return out


IDENTITY_WORD = Word()


def reduce_syllables(syllables) -> Word:
    """Merge adjacent syllables of the same generator, dropping zeros."""
    stack: list[list[int]] = []
    for g, k in syllables:
        if k == 0:
            continue
        if stack and stack[-1][0] == g:
            stack[-1][1] += k
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([g, k])
    return Word(tuple((g, k) for g, k in stack))


def word_from_syllables(syllables) -> Word:
    return reduce_syllables(syllables)


def single(gen: int, exp: int = 1) -> Word:
    return reduce_syllables(((gen, exp),))


@dataclass(frozen=True)
class WreathRecursion:
    """Root permutation plus level-1 states.

    perm is in array form, 1-based: perm[i-1] is the image of letter i.
    """

    perm: tuple[int, ...]
    states: tuple[Word, ...]

    def __post_init__(self):
        d = len(self.perm)
        if sorted(self.perm) != list(range(1, d + 1)):
            raise BadLetterError(f"perm {self.perm} is not a bijection of 1..{d}")
        if len(self.states) != d:
            raise BadLetterError("state count does not match degree")


@dataclass(frozen=True)
class SSPresentation:
    """A self-similar group: degree, named generators, one wreath recursion
    per generator, optional relators."""

    degree: int
    gen_names: tuple[str, ...]
    recursions: tuple[WreathRecursion, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        check_degree(self.degree)
        if len(self.recursions) != len(self.gen_names):
            raise UnknownGeneratorError("one recursion required per generator")
        for rec in self.recursions:
            if len(rec.perm) != self.degree:
                raise BadLetterError("recursion degree mismatch")
            for state in rec.states:
                self.check_word(state)
        for rel in self.relators:
            self.check_word(rel)

    @property
    def n_gens(self) -> int:
        return len(self.gen_names)

    def gen_index(self, name: str) -> int:
        try:
            return self.gen_names.index(name)
        except ValueError:
            raise UnknownGeneratorError(f"unknown generator {name!r}") from None

    def check_word(self, w: Word) -> Word:
        for g, _ in w.syllables:
            if not (0 <= g < len(self.gen_names)):
                raise UnknownGeneratorError(f"generator index {g} out of range")
        return w

    def word(self, text: str) -> Word:
        """Parse 'a b^-1 a^3' style text into a Word."""
        return parse_word(self, text)


def parse_word(G: SSPresentation, text: str) -> Word:
    tokens = text.replace(",", " ").split()
    return word_from_tokens(G, tokens)


def word_from_tokens(G: SSPresentation, tokens) -> Word:
    syllables = []
    for tok in tokens:
        name, sep, exp = tok.partition("^")
        k = int(exp) if sep else 1
        syllables.append((G.gen_index(name), k))
    return G.check_word(reduce_syllables(syllables))


def word_tokens(G: SSPresentation, w: Word) -> list[str]:
    """Expand a word to unit tokens 'g' / 'g^-1'."""
    if len(w) > MAX_EXPANSION:
        raise WordBudgetError("word too long to expand to tokens")
    out = []
    for g, k in w.syllables:
        tok = G.gen_names[g] if k > 0 else G.gen_names[g] + "^-1"
        out.extend([tok] * abs(k))
    return out


def _perm_inverse(perm: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, j in enumerate(perm, start=1):
        inv[j - 1] = i
    return tuple(inv)


def _gen_step(G: SSPresentation, gen: int, sign: int, i: int) -> tuple[int, Word]:
    """Image letter and state word of gen^sign at input letter i."""
    rec = G.recursions[gen]
    if sign > 0:
        return rec.perm[i - 1], rec.states[i - 1]
    j = rec.perm.index(i) + 1  # sigma^-1(i)
    return j, rec.states[j - 1].inv()


def _syllable_step(G: SSPresentation, gen: int, k: int, i: int) -> tuple[int, list[Syllable]]:
    """Image letter and state syllables of gen^k at input letter i.

    Walks the cycle of i under the (possibly inverted) generator
    permutation, so the cost is O(d) plus the size of the emitted state,
    independent of |k| whenever the cycle product collapses to a power of
    a single generator.
    """
    sign = 1 if k > 0 else -1
    count = abs(k)
    # walk the orbit of i, recording the state at each stop
    letters = [i]
    states: list[Word] = []
    j = i
    while True:
        j2, s = _gen_step(G, gen, sign, j)
        states.append(s)
        if j2 == i:
            break
        letters.append(j2)
        j = j2
    c = len(letters)
    image = letters[count % c]
    q, r = divmod(count, c)
    # total state = (S_{r-1} ... S_0) * (S_{c-1} ... S_0)^q, leftmost applied last
    partial: list[Syllable] = []
    for t in range(r - 1, -1, -1):
        partial.extend(states[t].syllables)
    if q:
        cycle: list[Syllable] = []
        for t in range(c - 1, -1, -1):
            cycle.extend(states[t].syllables)
        cycle_word = reduce_syllables(cycle)
        if not cycle_word.syllables:
            pass
        elif len(cycle_word.syllables) == 1:
            g2, e2 = cycle_word.syllables[0]
            partial.append((g2, e2 * q))
        else:
            if q * len(cycle_word) > MAX_EXPANSION:
                raise WordBudgetError("state expansion exceeds budget")
            partial.extend(cycle_word.syllables * q)
    return image, partial


def _word_step(G: SSPresentation, w: Word, i: int) -> tuple[int, Word]:
    """Image letter and state of the element of w at input letter i.

    Syllables are processed right to left (rightmost acts first under the
    left-action convention); each contributes its state on the left.
    """
    parts: list[Syllable] = []
    j = i
    for gen, k in reversed(w.syllables):
        j, contrib = _syllable_step(G, gen, k, j)
        parts = contrib + parts
    return j, reduce_syllables(parts)


def word_recursion(G: SSPresentation, w: Word) -> WreathRecursion:
    """Wreath recursion (perm, states) of the element represented by w."""
    G.check_word(w)
    perm = []
    states = []
    images = {}
    for i in range(1, G.degree + 1):
        j, state = _word_step(G, w, i)
        images[i] = j
        states.append(state)
    perm = tuple(images[i] for i in range(1, G.degree + 1))
    return WreathRecursion(perm, tuple(states))


def act(G: SSPresentation, w: Word, v) -> Vertex:
    """Apply the element of w to vertex v; returns a vertex of equal length."""
    G.check_word(w)
    v = check_vertex(G.degree, v)
    out = []
    cur = w
    for letter in v:
        j, cur_next = _word_step(G, cur, letter)
        out.append(j)
        cur = cur_next
    return tuple(out)


@dataclass(frozen=True)
class Portrait:
    """Depth-k truncation of a tree automorphism: root perm + child portraits."""

    perm: tuple[int, ...]
    children: tuple["Portrait", ...] = ()

    @property
    def depth(self) -> int:
        return 0 if not self.children else 1 + self.children[0].depth


def portrait(G: SSPresentation, w: Word, depth: int) -> Portrait:
    rec = word_recursion(G, w)
    if depth <= 0:
        return Portrait(rec.perm)
    return Portrait(rec.perm, tuple(portrait(G, s, depth - 1) for s in rec.states))


@dataclass(frozen=True)
class Budget:
    """Limits for the word-problem semidecision."""

    max_words: int = 10_000
    max_len: int = 512


DEFAULT_BUDGET = Budget()

TRIVIAL = "Trivial"
NONTRIVIAL = "Nontrivial"
UNKNOWN = "Unknown"
EQUAL = "Equal"
DISTINCT = "Distinct"

_IDENTITY_PERMS: dict[int, tuple[int, ...]] = {}


def identity_perm(d: int) -> tuple[int, ...]:
    if d not in _IDENTITY_PERMS:
        _IDENTITY_PERMS[d] = tuple(range(1, d + 1))
    return _IDENTITY_PERMS[d]


def is_trivial_bounded(G: SSPresentation, w: Word, budget: Budget = DEFAULT_BUDGET) -> str:
    """Semidecide triviality of w by exploring its closure under states.

    Memoized on freely reduced words (no cyclic reduction: conjugates have
    different states).  Nontrivial iff some reachable state has a
    nontrivial root permutation; Trivial iff the closure is exhausted with
    all root permutations trivial; Unknown when the budget runs out.
    """
    w = reduce_syllables(G.check_word(w).syllables)
    ident = identity_perm(G.degree)
    seen = {w.syllables}
    stack = [w]
    while stack:
        u = stack.pop()
        if len(u) > budget.max_len:
            return UNKNOWN
        try:
            rec = word_recursion(G, u)
        except WordBudgetError:
            return UNKNOWN
        if rec.perm != ident:
            return NONTRIVIAL
        for state in rec.states:
            if state.syllables not in seen:
                if len(seen) >= budget.max_words:
                    return UNKNOWN
                seen.add(state.syllables)
                stack.append(state)
    return TRIVIAL


def equal_bounded(G: SSPresentation, u: Word, v: Word, budget: Budget = DEFAULT_BUDGET) -> str:
    result = is_trivial_bounded(G, u * v.inv(), budget)
    return {TRIVIAL: EQUAL, NONTRIVIAL: DISTINCT, UNKNOWN: UNKNOWN}[result]
