import random
from fractions import Fraction

import pytest

from nekra.errors import (BadLetterError, IdentityInputError, NekraError)
from nekra.ssgroup import SSPresentation, WreathRecursion, Word, single
from nekra.virtend import (MOVED, UNKNOWN, AffineElem, Ring, RingElem,
                           VirtEndSpec, affine_act, affine_identity,
                           affine_inv, affine_mul, affine_pow, affine_state,
                           crosscheck_symbolic, default_gl_generators,
                           elementary_matrix, faithfulness_search,
                           is_affine_identity, letter_to_t, make_affine,
                           properness_valuation, relator_verify,
                           scaling_matrix, t_to_letter, translation)
from nekra.tree import vertices_of_depth


R6 = Ring(6)


def frac_vec(ring, v):
    return tuple(ring.to_fraction(x) for x in v)


class TestRing:
    def test_normalize(self):
        assert R6.elem(12, 1) == RingElem(2, 0)
        assert R6.elem(5, 2) == RingElem(5, 2)
        assert R6.elem(0, 3) == RingElem(0, 0)

    def test_add_frozen_example(self):
        # 1/6 + (-1) = -5/6
        assert R6.add(R6.elem(1, 1), R6.elem(-1)) == RingElem(-5, 1)

    def test_mod_p_frozen_example(self):
        # 1/6 = 6^-1 = 1 in Z/5
        assert R6.mod_p(R6.elem(1, 1), 5) == 1

    def test_p_valuation(self):
        assert R6.p_valuation(R6.elem(20), 5) == 1
        assert R6.p_valuation(R6.elem(3), 5) == 0
        assert R6.p_valuation(R6.elem(0), 5) is None

    def test_from_fraction(self):
        x = R6.from_fraction(Fraction(5, 12))
        assert R6.to_fraction(x) == Fraction(5, 12)
        assert x == RingElem(15, 2)
        with pytest.raises(NekraError):
            R6.from_fraction(Fraction(1, 5))
        with pytest.raises(NekraError):
            Ring(1).from_fraction(Fraction(1, 2))

    def test_field_laws_random(self):
        rng = random.Random(131)
        for _ in range(100):
            xs = [R6.elem(rng.randint(-30, 30), rng.randint(0, 3)) for _ in range(3)]
            x, y, z = xs
            fx, fy, fz = (R6.to_fraction(t) for t in xs)
            assert R6.to_fraction(R6.add(x, y)) == fx + fy
            assert R6.to_fraction(R6.mul(x, y)) == fx * fy
            assert R6.to_fraction(R6.sub(x, y)) == fx - fy
            assert R6.mul(x, R6.add(y, z)) == R6.add(R6.mul(x, y), R6.mul(x, z))

    def test_mod_p_is_ring_hom(self):
        rng = random.Random(137)
        p = 5
        for _ in range(60):
            x = R6.elem(rng.randint(-40, 40), rng.randint(0, 3))
            y = R6.elem(rng.randint(-40, 40), rng.randint(0, 3))
            assert R6.mod_p(R6.add(x, y), p) == (R6.mod_p(x, p) + R6.mod_p(y, p)) % p
            assert R6.mod_p(R6.mul(x, y), p) == (R6.mod_p(x, p) * R6.mod_p(y, p)) % p

    def test_div_p(self):
        assert R6.div_p(R6.elem(10, 1), 5) == RingElem(2, 1)
        with pytest.raises(NekraError):
            R6.div_p(R6.elem(3), 5)


class TestSpecValidation:
    def test_p_must_be_prime(self):
        with pytest.raises(NekraError):
            VirtEndSpec(6, 4, 1)

    def test_p_coprime_to_m(self):
        with pytest.raises(NekraError):
            VirtEndSpec(6, 3, 1)

    def test_degree(self):
        assert VirtEndSpec(6, 5, 2).degree == 25
        assert VirtEndSpec(1, 2, 1).degree == 2


class TestAffineGroup:
    def test_make_affine_rejects_nonunit(self):
        with pytest.raises(NekraError):
            make_affine(R6, (R6.zero(),), ((R6.elem(5),),))

    def test_make_affine_accepts_m_powers(self):
        make_affine(R6, (R6.zero(),), ((R6.elem(6),),))
        make_affine(R6, (R6.zero(),), ((R6.elem(1, 1),),))
        make_affine(Ring(1), (Ring(1).zero(),), ((Ring(1).elem(-1),),))

    def random_elem(self, rng, ring, n):
        gens = list(default_gl_generators(ring, n).values())
        gens += [translation(ring, n, j, ring.elem(rng.randint(-3, 3)))
                 for j in range(n)]
        e = affine_identity(ring, n)
        for _ in range(rng.randint(1, 6)):
            g = rng.choice(gens)
            if rng.random() < 0.5:
                g = affine_inv(ring, g)
            e = affine_mul(ring, e, g)
        return e

    def test_inverse_two_sided(self):
        rng = random.Random(139)
        for _ in range(25):
            e = self.random_elem(rng, R6, 2)
            i = affine_inv(R6, e)
            assert is_affine_identity(R6, affine_mul(R6, e, i))
            assert is_affine_identity(R6, affine_mul(R6, i, e))

    def test_associative(self):
        rng = random.Random(149)
        for _ in range(15):
            a, b, c = (self.random_elem(rng, R6, 2) for _ in range(3))
            left = affine_mul(R6, affine_mul(R6, a, b), c)
            right = affine_mul(R6, a, affine_mul(R6, b, c))
            assert left == right

    def test_pow(self):
        t = translation(R6, 1, 0)
        assert affine_pow(R6, t, 5).a == (R6.elem(5),)
        assert affine_pow(R6, t, -3).a == (R6.elem(-3),)
        assert is_affine_identity(R6, affine_pow(R6, t, 0))


class TestLetterBijection:
    def test_round_trip(self):
        spec = VirtEndSpec(6, 5, 2)
        for letter in range(1, spec.degree + 1):
            t = letter_to_t(spec, letter)
            assert all(0 <= x < 5 for x in t)
            assert t_to_letter(spec, t) == letter

    def test_msb_first(self):
        spec = VirtEndSpec(6, 5, 2)
        assert letter_to_t(spec, 1) == (0, 0)
        assert letter_to_t(spec, 2) == (0, 1)
        assert letter_to_t(spec, 6) == (1, 0)

    def test_bad_letter(self):
        spec = VirtEndSpec(1, 2, 1)
        with pytest.raises(BadLetterError):
            letter_to_t(spec, 3)


class TestAffineState:
    def test_translation_carry(self):
        # translation by 1 at t = p-1 carries: t' = 0, state translates by 1
        spec = VirtEndSpec(6, 5, 1)
        e = translation(R6, 1, 0)
        t_out, state = affine_state(spec, e, (4,))
        assert t_out == (0,)
        assert state.a == (R6.one(),)

    def test_translation_no_carry(self):
        spec = VirtEndSpec(6, 5, 1)
        e = translation(R6, 1, 0)
        t_out, state = affine_state(spec, e, (2,))
        assert t_out == (3,)
        assert state.a == (R6.zero(),)

    def test_matrix_part_preserved(self):
        spec = VirtEndSpec(6, 5, 2)
        g = scaling_matrix(R6, 2, 0)
        e = affine_mul(R6, translation(R6, 2, 1), g)
        for letter in range(1, spec.degree + 1):
            _, state = affine_state(spec, e, letter_to_t(spec, letter))
            assert state.gamma == e.gamma

    def test_fractional_translation(self):
        # translation by 1/6: u = 1/6 + t, mod 5 uses 6^-1 = 1
        spec = VirtEndSpec(6, 5, 1)
        e = translation(R6, 1, 0, R6.elem(1, 1))
        t_out, state = affine_state(spec, e, (0,))
        assert t_out == (1,)
        # state = (1/6 - 1)/5 = -1/6
        assert state.a == (RingElem(-1, 1),)


def digits_oracle(spec, e, v):
    """Integer-only oracle for the action when m = 1: act on the mixed-radix
    digit vectors mod p^depth, least significant letter first."""
    p, n, depth = spec.p, spec.n, len(v)
    x = [0] * n
    for k, letter in enumerate(v):
        t = letter_to_t(spec, letter)
        for j in range(n):
            x[j] += t[j] * p ** k
    a = [int(c.num) for c in e.a]
    g = [[int(c.num) for c in row] for row in e.gamma]
    y = [(a[i] + sum(g[i][j] * x[j] for j in range(n))) % p ** depth
         for i in range(n)]
    out = []
    for k in range(depth):
        t = tuple((y[j] // p ** k) % p for j in range(n))
        out.append(t_to_letter(spec, t))
    return tuple(out)


class TestAffineAct:
    def test_odometer_increment(self):
        spec = VirtEndSpec(1, 2, 1)
        e = translation(Ring(1), 1, 0)
        assert affine_act(spec, e, (2, 2, 1)) == (1, 1, 2)

    def test_left_action_law(self):
        spec = VirtEndSpec(6, 5, 2)
        rng = random.Random(151)
        helper = TestAffineGroup()
        for _ in range(8):
            e1 = helper.random_elem(rng, R6, 2)
            e2 = helper.random_elem(rng, R6, 2)
            prod = affine_mul(R6, e1, e2)
            for v in vertices_of_depth(spec.degree, 2):
                assert affine_act(spec, prod, v) == affine_act(spec, e1, affine_act(spec, e2, v))

    def test_matches_digit_oracle(self):
        ring = Ring(1)
        spec = VirtEndSpec(1, 3, 2)
        rng = random.Random(157)
        for _ in range(10):
            a = tuple(ring.elem(rng.randint(-5, 5)) for _ in range(2))
            gamma = ((ring.one(), ring.elem(rng.randint(-3, 3))),
                     (ring.zero(), ring.elem(rng.choice((1, -1)))))
            e = make_affine(ring, a, gamma)
            for v in vertices_of_depth(spec.degree, 3):
                assert affine_act(spec, e, v) == digits_oracle(spec, e, v)


class TestFaithfulness:
    def test_identity_rejected(self):
        spec = VirtEndSpec(6, 5, 1)
        with pytest.raises(IdentityInputError):
            faithfulness_search(spec, affine_identity(R6, 1), 5)

    def test_translation_depth_one(self):
        spec = VirtEndSpec(6, 5, 1)
        status, path = faithfulness_search(spec, translation(R6, 1, 0), 5)
        assert status == MOVED
        assert path == (1,)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_p_power_translation_depth(self, k):
        # translation by p^k fixes levels 1..k and moves at depth k + 1
        spec = VirtEndSpec(6, 5, 1)
        e = translation(R6, 1, 0, R6.elem(5 ** k))
        status, path = faithfulness_search(spec, e, k + 2)
        assert status == MOVED
        assert path == (1,) * k + (1,)

    def test_unknown_when_too_shallow(self):
        spec = VirtEndSpec(6, 5, 1)
        e = translation(R6, 1, 0, R6.elem(25))
        status, path = faithfulness_search(spec, e, 2)
        assert status == UNKNOWN and path is None

    def test_deep_search_is_fast(self):
        # memoization keeps translation by p^40 tractable
        spec = VirtEndSpec(6, 5, 1)
        e = translation(R6, 1, 0, R6.elem(5 ** 40))
        status, path = faithfulness_search(spec, e, 45)
        assert status == MOVED
        assert len(path) == 41

    def test_scaling_moved(self):
        spec = VirtEndSpec(6, 5, 2)
        status, path = faithfulness_search(spec, scaling_matrix(R6, 2, 0), 6)
        assert status == MOVED


class TestProperness:
    def test_examples(self):
        spec = VirtEndSpec(6, 5, 2)
        assert properness_valuation(spec, (R6.elem(50), R6.elem(75))) == 2
        assert properness_valuation(spec, (R6.elem(5), R6.elem(3))) == 0
        assert properness_valuation(spec, (R6.zero(), R6.zero())) is None

    def test_matches_fraction_oracle(self):
        spec = VirtEndSpec(6, 5, 2)
        rng = random.Random(163)
        for _ in range(40):
            a = tuple(R6.elem(rng.randint(-100, 100), rng.randint(0, 2))
                      for _ in range(2))
            got = properness_valuation(spec, a)
            fracs = [R6.to_fraction(x) for x in a if x.num != 0]
            if not fracs:
                assert got is None
                continue

            def val5(q):
                k = 0
                num = abs(q.numerator)
                while num % 5 == 0:
                    num //= 5
                    k += 1
                return k

            assert got == min(val5(q) for q in fracs)


class TestCrosscheck:
    def test_odometer_positive(self, odometer):
        spec = VirtEndSpec(1, 2, 1)
        gens = {"a": translation(Ring(1), 1, 0)}
        report = crosscheck_symbolic(spec, gens, odometer, 5)
        assert report.ok
        assert report.checked == 62

    def test_negative_control(self):
        # wrong recursion a = (1 2)(a, 1) disagrees at depth 2
        spec = VirtEndSpec(1, 2, 1)
        wrong = SSPresentation(2, ("a",),
                               (WreathRecursion((2, 1), (single(0), Word())),))
        gens = {"a": translation(Ring(1), 1, 0)}
        report = crosscheck_symbolic(spec, gens, wrong, 4)
        assert not report.ok
        assert all(name == "a" for name, _, _, _ in report.mismatches)

    def test_degree_mismatch(self, odometer):
        spec = VirtEndSpec(6, 5, 1)
        with pytest.raises(NekraError):
            crosscheck_symbolic(spec, {}, odometer, 2)


class TestRelators:
    def test_m6_n2_all_identity(self):
        spec = VirtEndSpec(6, 5, 2)
        report = relator_verify(spec)
        assert report.ok
        assert len(report.results) == 18

    def test_n1_integer_ring(self):
        report = relator_verify(VirtEndSpec(1, 2, 1))
        assert report.ok

    def test_families_covered(self):
        report = relator_verify(VirtEndSpec(6, 5, 2))
        families = {fam for fam, _, _ in report.results}
        assert families == {1, 2, 3}

    def test_custom_gl_generators(self):
        # family 3 holds for arbitrary unit matrices, not just the defaults
        spec = VirtEndSpec(6, 5, 2)
        g = affine_mul(R6, elementary_matrix(R6, 2, 0, 1, R6.elem(2)),
                       scaling_matrix(R6, 2, 1))
        report = relator_verify(spec, {"g": g})
        assert report.ok
