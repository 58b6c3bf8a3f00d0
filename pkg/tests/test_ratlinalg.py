import random
from fractions import Fraction
from itertools import permutations

import pytest

from futakizero.ratlinalg import (LinAlgError, QMatrix, fixed_subspace,
                                  in_column_span, kernel_basis, solve)


def permutation_matrix(perm):
    n = len(perm)
    return QMatrix(n, n, [Fraction(int(perm[j] == i)) for i in range(n) for j in range(n)])


class TestKernelBasis:
    def test_stacked_constraints_have_trivial_kernel(self):
        # rows encode F1 = -F1-F2 and F2 = -F1-F2 for a rank-2 character
        a_sigma_t = QMatrix.from_rows([[-1, -1], [0, 1]])
        a_tau_t = QMatrix.from_rows([[1, 0], [-1, -1]])
        stacked = (a_sigma_t - QMatrix.identity(2)).stack(a_tau_t - QMatrix.identity(2))
        assert kernel_basis(stacked) == []

    def test_zero_matrix_full_kernel(self):
        assert kernel_basis(QMatrix.zero(2, 2)) == [(1, 0), (0, 1)]

    def test_single_relation(self):
        assert kernel_basis(QMatrix.from_rows([[1, 1]])) == [(1, -1)]

    def test_kernel_vectors_annihilate(self):
        rng = random.Random(11)
        for _ in range(40):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 4)
            m = QMatrix(rows, cols,
                        [Fraction(rng.randint(-3, 3)) for _ in range(rows * cols)])
            for v in kernel_basis(m):
                assert all(x == 0 for x in m.apply(list(v)))

    def test_rank_nullity_against_bareiss(self):
        rng = random.Random(5)
        for _ in range(60):
            rows = rng.randint(1, 5)
            cols = rng.randint(1, 5)
            entries = [Fraction(rng.randint(-4, 4)) for _ in range(rows * cols)]
            m = QMatrix(rows, cols, entries)
            assert len(kernel_basis(m)) + _bareiss_rank(m.row_list()) == cols


def _bareiss_rank(rows):
    """Fraction-free elimination, an independent rank oracle."""
    rows = [[Fraction(x) for x in r] for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    prev = Fraction(1)
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i == r:
                continue
            rows[i] = [(rows[r][c] * rows[i][j] - rows[i][c] * rows[r][j]) / prev
                       for j in range(ncols)]
        prev = rows[r][c]
        rank += 1
        r += 1
        if r == len(rows):
            break
    return rank


class TestFixedSubspace:
    def test_swap_has_symmetric_vector(self):
        m = permutation_matrix((1, 0))
        assert fixed_subspace(m) == [(1, 1)]

    def test_identity_is_all_fixed(self):
        assert len(fixed_subspace(QMatrix.identity(3))) == 3

    def test_slot_one_three_swap(self):
        # the action on the three pullback classes of the triple-product case
        m = permutation_matrix((2, 1, 0))
        assert fixed_subspace(m) == [(0, 1, 0), (1, 0, 1)]

    def test_requires_square(self):
        with pytest.raises(LinAlgError):
            fixed_subspace(QMatrix.zero(2, 3))

    def test_dimension_counts_cycles_exhaustively(self):
        for n in range(1, 6):
            for perm in permutations(range(n)):
                m = permutation_matrix(perm)
                assert len(fixed_subspace(m)) == _cycle_count(perm)


def _cycle_count(perm):
    seen = set()
    cycles = 0
    for start in range(len(perm)):
        if start in seen:
            continue
        cycles += 1
        i = start
        while i not in seen:
            seen.add(i)
            i = perm[i]
    return cycles


class TestExactArithmetic:
    def test_inverse_product_with_wide_integers(self):
        rng = random.Random(3)
        for _ in range(50):
            a = rng.getrandbits(80) + 1
            b = rng.getrandbits(80) + 1
            q = Fraction(a, b)
            assert q * (1 / q) == 1

    def test_solve_and_span(self):
        m = QMatrix.from_rows([[2, 0], [1, 1]])
        assert solve(m, [4, 3]) == [Fraction(2), Fraction(1)]
        assert in_column_span([(1, 0), (1, 1)], (3, 2)) == [Fraction(1), Fraction(2)]
        assert in_column_span([(1, 0)], (0, 1)) is None

    def test_matrix_product_and_transpose(self):
        a = QMatrix.from_rows([[1, 2], [3, 4]])
        b = QMatrix.from_rows([[0, 1], [1, 0]])
        assert (a @ b).row_list() == [[2, 1], [4, 3]]
        assert a.transpose().row_list() == [[1, 3], [2, 4]]
