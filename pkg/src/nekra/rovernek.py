"""Rover-Nekrashevych element arithmetic.

A VElement is a pair of complete antichains (domain and range cones,
paired by index) with one decoration word per pair: cone w_i maps to cone
w'_i via prefix replacement twisted by the decoration.  Composition works
by expanding both factors until the inner range and outer domain
antichains coincide as sets, exactly like tree-pair multiplication in
Thompson's V.
"""

from dataclasses import dataclass

from . import ssgroup
from .abelian import FinAbPresentation, perm_sign
from .errors import NekraError, UnresolvedVertexError
from .ssgroup import (IDENTITY_WORD, Budget, DEFAULT_BUDGET, DISTINCT, EQUAL,
                      NONTRIVIAL, SSPresentation, TRIVIAL, UNKNOWN, Word,
                      is_trivial_bounded, word_recursion)
from .tree import Vertex, check_complete_antichain, check_vertex, is_prefix


@dataclass(frozen=True)
class VElement:
    group: SSPresentation
    domain: tuple[Vertex, ...]
    range_: tuple[Vertex, ...]
    decorations: tuple[Word, ...]

    @property
    def n_cones(self) -> int:
        return len(self.domain)


def make_velement(G: SSPresentation, domain, range_, decorations) -> VElement:
    domain = check_complete_antichain(G.degree, domain)
    range_ = check_complete_antichain(G.degree, range_)
    decorations = tuple(G.check_word(w) for w in decorations)
    if not (len(domain) == len(range_) == len(decorations)):
        raise NekraError("domain, range and decoration counts differ")
    return VElement(G, domain, range_, decorations)


def v_identity(G: SSPresentation) -> VElement:
    return VElement(G, ((),), ((),), (IDENTITY_WORD,))


def v_expand(e: VElement, i: int) -> VElement:
    """Split cone pair i one level using the decoration's wreath recursion.

    Pair (w_i, g_i, w'_i) becomes the d pairs (w_i.j, (g_i)_j, w'_i.sigma(j)).
    Represents the same homeomorphism.
    """
    if not (0 <= i < e.n_cones):
        raise IndexError(f"cone index {i} out of range")
    G = e.group
    rec = word_recursion(G, e.decorations[i])
    domain = list(e.domain[:i])
    range_ = list(e.range_[:i])
    decs = list(e.decorations[:i])
    for j in range(1, G.degree + 1):
        domain.append(e.domain[i] + (j,))
        range_.append(e.range_[i] + (rec.perm[j - 1],))
        decs.append(rec.states[j - 1])
    domain.extend(e.domain[i + 1 :])
    range_.extend(e.range_[i + 1 :])
    decs.extend(e.decorations[i + 1 :])
    return VElement(G, tuple(domain), tuple(range_), tuple(decs))


def v_invert(e: VElement) -> VElement:
    return VElement(e.group, e.range_, e.domain,
                    tuple(w.inv() for w in e.decorations))


def v_compose(p: VElement, q: VElement) -> VElement:
    """p after q.  Expands both until q's range equals p's domain as a set,
    then chains pair by pair (decoration of p on the left, per the left
    action convention)."""
    if p.group is not q.group and p.group != q.group:
        raise NekraError("elements live over different groups")
    while True:
        expanded = False
        for i, r in enumerate(q.range_):
            if any(is_prefix(r, w) and r != w for w in p.domain):
                q = v_expand(q, i)
                expanded = True
                break
        if expanded:
            continue
        for k, w in enumerate(p.domain):
            if any(is_prefix(w, r) and w != r for r in q.range_):
                p = v_expand(p, k)
                expanded = True
                break
        if not expanded:
            break
    index_p = {w: k for k, w in enumerate(p.domain)}
    domain = []
    range_ = []
    decs = []
    for i, r in enumerate(q.range_):
        k = index_p[r]
        domain.append(q.domain[i])
        range_.append(p.range_[k])
        decs.append(p.decorations[k] * q.decorations[i])
    return VElement(p.group, tuple(domain), tuple(range_), tuple(decs))


def v_apply(e: VElement, v) -> Vertex:
    """Image of vertex v: if v = w_i.u then w'_i . act(g_i, u)."""
    v = check_vertex(e.group.degree, v)
    for i, w in enumerate(e.domain):
        if is_prefix(w, v):
            u = v[len(w) :]
            return e.range_[i] + ssgroup.act(e.group, e.decorations[i], u)
    raise UnresolvedVertexError(f"vertex {list(v)} is shorter than the domain antichain")


def _lex_pairing_sign(e: VElement) -> int:
    """Parity of the permutation pairing the lex-sorted domain antichain
    with the range antichain compared in lex order (0 even, 1 odd)."""
    order = sorted(range(e.n_cones), key=lambda i: e.domain[i])
    ranges = [e.range_[i] for i in order]
    ranking = sorted(range(len(ranges)), key=lambda t: ranges[t])
    # perm in array form: position t (sorted domain) -> lex rank of its range
    perm = [0] * len(ranges)
    for rank, t in enumerate(ranking):
        perm[t] = rank + 1
    return perm_sign(tuple(perm))


def v_ab_class(e: VElement, Q: FinAbPresentation):
    """Class of e in the abelianization of V_d(G).

    Sum of the decoration classes; for odd degree the sign of the
    lex-pairing permutation contributes the extra order-2 generator.
    """
    out = Q.zero()
    for w in e.decorations:
        out = out + Q.word_class(e.group, w)
    if Q.sign_image is not None and _lex_pairing_sign(e):
        out = out + Q.sign_image
    return out


def in_commutator(e: VElement, Q: FinAbPresentation) -> bool:
    return v_ab_class(e, Q).is_zero()


def v_equal_bounded(e1: VElement, e2: VElement, depth: int = 8,
                    budget: Budget = DEFAULT_BUDGET) -> str:
    """Equal / Distinct / Unknown for two elements of the same group.

    Works on e1 e2^-1: a cone pair with different domain and range vertex
    moves some point of the cone, so any such pair gives Distinct;
    otherwise each decoration is fed to the word-problem semidecision.
    The depth parameter is kept for symmetry with the action-sampling
    view; the pair analysis already decides everything the sampled action
    could, at every depth.
    """
    c = v_compose(e1, v_invert(e2))
    unknown = False
    for w, r, g in zip(c.domain, c.range_, c.decorations):
        if w != r:
            return DISTINCT
        res = is_trivial_bounded(c.group, g, budget)
        if res == NONTRIVIAL:
            return DISTINCT
        if res == UNKNOWN:
            unknown = True
    return UNKNOWN if unknown else EQUAL


def v_reduce(e: VElement) -> VElement:
    """Best-effort reduction: merge d sibling pairs carrying empty
    decorations whose ranges are aligned siblings.  Never required for
    correctness."""
    d = e.group.degree
    changed = True
    while changed:
        changed = False
        pairs = {w: (r, g) for w, r, g in zip(e.domain, e.range_, e.decorations)}
        for w in list(pairs):
            if not w:
                continue
            parent = w[:-1]
            children = [parent + (j,) for j in range(1, d + 1)]
            if not all(c in pairs for c in children):
                continue
            rs = [pairs[c] for c in children]
            if any(not g.is_identity() for _, g in rs):
                continue
            r0 = rs[0][0]
            if not r0 or r0[-1] != 1:
                continue
            rparent = r0[:-1]
            if [r for r, _ in rs] != [rparent + (j,) for j in range(1, d + 1)]:
                continue
            for c in children:
                del pairs[c]
            pairs[parent] = (rparent, IDENTITY_WORD)
            dom = sorted(pairs)
            e = VElement(e.group, tuple(dom),
                         tuple(pairs[x][0] for x in dom),
                         tuple(pairs[x][1] for x in dom))
            changed = True
            break
    return e
