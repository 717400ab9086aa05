"""
Matrix factorizations over a polynomial ring, their Hom and End complexes,
Koszul and unit factorizations, tensor products, duals and the derivative
operators lambda_t = ∂_t d.

A factorization of rank (r0|r1) is stored as one square matrix `d` of size
r0 + r1 over the basis e_0..e_{r0-1} (even) followed by r1 odd vectors;
d[i][j] is the coefficient of e_i in d(e_j). The block d0 (even to odd) is
r1 x r0 and d1 (odd to even) is r0 x r1.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass

from mfdk.errors import InputError, UnknownVariableError
from mfdk.graded_core import GradedVar, SemifreeModule, polynomial_algebra
from mfdk.poly_core import Polynomial, difference_quotient

logger = logging.getLogger(__name__)


# matrices of polynomials


def zero_matrix(table, rows, columns):
    return [[Polynomial(table) for _ in range(columns)] for _ in range(rows)]


def identity_matrix(table, size, value=1):
    matrix = zero_matrix(table, size, size)
    for i in range(size):
        matrix[i][i] = value if isinstance(value, Polynomial) else Polynomial.constant(table, value)
    return matrix


def matrix_product(A, B, table):
    if A and B and len(A[0]) != len(B):
        raise InputError(f"Cannot multiply a {len(A)}x{len(A[0])} by a {len(B)}x{len(B[0])} matrix")
    columns = len(B[0]) if B else 0
    result = zero_matrix(table, len(A), columns)
    for i, row in enumerate(A):
        for k, entry in enumerate(row):
            if not entry:
                continue
            for j in range(columns):
                if B[k][j]:
                    result[i][j] = result[i][j] + entry * B[k][j]
    return result


def matrix_sum(A, B, sign=1):
    return [[a + b if sign > 0 else a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matrix_scale(A, value):
    return [[entry * value for entry in row] for row in A]


def transpose(A):
    return [list(column) for column in zip(*A)] if A else []


def matrix_partial(A, name):
    return [[entry.partial(name) for entry in row] for row in A]


def matrices_equal(A, B):
    return len(A) == len(B) and all(
        len(ra) == len(rb) and all(a == b for a, b in zip(ra, rb)) for ra, rb in zip(A, B)
    )


def first_difference(A, B):
    """1-based (row, column) of the first differing entry, or None."""
    for i, (ra, rb) in enumerate(zip(A, B)):
        for j, (a, b) in enumerate(zip(ra, rb)):
            if a != b:
                return i + 1, j + 1
    return None


def _read_entry(table, value):
    if isinstance(value, Polynomial):
        if value.table != table:
            return value.to_table(table)
        return value
    if isinstance(value, str):
        return Polynomial.parse(value, table)
    return Polynomial.constant(table, value)


class MatrixFactorization(object):
    """
    table       VarTable of the ring
    potential   Polynomial V with d^2 = V * id
    d0, d1      blocks (r1 x r0 and r0 x r1); entries may be Polynomials,
                expression strings or numbers
    labels      optional basis labels (tuples); tensor products concatenate them
    degenerate  marks the rank (1|0) unit with no exterior generators
    """

    def __init__(self, table, potential, d0, d1, labels=None, degenerate=False, name=None):
        self.table = table
        self.potential = _read_entry(table, potential)
        d0 = [[_read_entry(table, e) for e in row] for row in d0]
        d1 = [[_read_entry(table, e) for e in row] for row in d1]
        self.r1 = len(d0)
        self.r0 = len(d1)
        for row in d0:
            if len(row) != self.r0:
                raise InputError(f"Block d0 must be {self.r1}x{self.r0}")
        for row in d1:
            if len(row) != self.r1:
                raise InputError(f"Block d1 must be {self.r0}x{self.r1}")
        size = self.r0 + self.r1
        self.d = zero_matrix(table, size, size)
        for i in range(self.r1):
            for j in range(self.r0):
                self.d[self.r0 + i][j] = d0[i][j]
        for i in range(self.r0):
            for j in range(self.r1):
                self.d[i][self.r0 + j] = d1[i][j]
        self.labels = tuple(labels) if labels is not None else tuple((k,) for k in range(size))
        if len(self.labels) != size:
            raise InputError("Need one label per basis vector")
        self.degenerate = degenerate
        self.name = name
        self.factor_pairs = None

    @classmethod
    def from_full(cls, table, potential, matrix, parities, labels=None, degenerate=False):
        """Builds a factorization from a full matrix over a basis with arbitrary parity order."""
        size = len(parities)
        labels = labels if labels is not None else [(k,) for k in range(size)]
        order = [k for k in range(size) if parities[k] == 0] + [k for k in range(size) if parities[k] == 1]
        r0 = sum(1 for p in parities if p == 0)
        evens, odds = order[:r0], order[r0:]
        d0 = [[matrix[i][j] for j in evens] for i in odds]
        d1 = [[matrix[i][j] for j in odds] for i in evens]
        mf = cls(table, potential, d0, d1, [labels[k] for k in order], degenerate)
        return mf, order

    @property
    def size(self):
        return self.r0 + self.r1

    @property
    def ranks(self):
        return self.r0, self.r1

    def parity(self, index):
        return 0 if index < self.r0 else 1

    def parities(self):
        return [self.parity(k) for k in range(self.size)]

    @property
    def d0(self):
        return [[self.d[self.r0 + i][j] for j in range(self.r0)] for i in range(self.r1)]

    @property
    def d1(self):
        return [[self.d[i][self.r0 + j] for j in range(self.r1)] for i in range(self.r0)]

    def to_table(self, table, rename=None):
        """The same factorization over a larger table, optionally renaming variables."""
        convert = lambda p: p.to_table(table, rename)  # noqa: E731
        mf = MatrixFactorization(
            table,
            convert(self.potential),
            [[convert(e) for e in row] for row in self.d0],
            [[convert(e) for e in row] for row in self.d1],
            self.labels,
            self.degenerate,
            self.name,
        )
        mf.factor_pairs = self.factor_pairs
        return mf

    def to_json(self):
        return {
            "vars": list(self.table.names),
            "weights": list(self.table.weights),
            "potential": str(self.potential),
            "d0": [[str(e) for e in row] for row in self.d0],
            "d1": [[str(e) for e in row] for row in self.d1],
        }

    def __repr__(self):
        return f"MatrixFactorization(rank {self.r0}|{self.r1} of {self.potential})"


@dataclass(frozen=True)
class MFVerdict:
    holds: bool
    block: str = None
    entry: tuple = None
    message: str = ""

    def __bool__(self):
        return self.holds


def verify_mf(M):
    """Checks d1*d0 = V*Id and d0*d1 = V*Id exactly; reports the first failing entry (1-based)."""
    table = M.table
    for label, left, right, size in (
        ("d1*d0", M.d1, M.d0, M.r0),
        ("d0*d1", M.d0, M.d1, M.r1),
    ):
        product = matrix_product(left, right, table) if left and right else zero_matrix(table, size, size)
        expected = identity_matrix(table, size, M.potential)
        where = first_difference(product, expected)
        if where is not None:
            i, j = where
            message = (
                f"{label} entry ({i},{j}) is {product[i - 1][j - 1]}, expected {expected[i - 1][j - 1]}"
            )
            return MFVerdict(False, label, where, message)
    return MFVerdict(True)


def rank_one_mf(table, p, q):
    return MatrixFactorization(table, p * q, [[p]], [[q]])


def tensor_mf(M, N):
    """
    M ⊗ N over the shared ring: basis pairs in lexicographic order (evens of
    the product first), D = d_M ⊗ 1 + (-1)^{|left|} 1 ⊗ d_N.
    """
    if M.table != N.table:
        raise InputError("Tensor product needs both factorizations over one table")
    table = M.table
    pairs = list(itertools.product(range(M.size), range(N.size)))
    position = {pair: k for k, pair in enumerate(pairs)}
    matrix = zero_matrix(table, len(pairs), len(pairs))
    for (i, j), column in position.items():
        for i2 in range(M.size):
            entry = M.d[i2][i]
            if entry:
                row = position[(i2, j)]
                matrix[row][column] = matrix[row][column] + entry
        sign = -1 if M.parity(i) else 1
        for j2 in range(N.size):
            entry = N.d[j2][j]
            if entry:
                row = position[(i, j2)]
                matrix[row][column] = matrix[row][column] + entry.scale(sign)
    parities = [(M.parity(i) + N.parity(j)) & 1 for i, j in pairs]
    labels = [M.labels[i] + N.labels[j] for i, j in pairs]
    result, order = MatrixFactorization.from_full(
        table, M.potential + N.potential, matrix, parities, labels, M.degenerate and N.degenerate
    )
    result.factor_pairs = tuple(pairs[k] for k in order)
    return result


def koszul_mf(pairs, table=None):
    """Tensor product of the rank (1|1) factorizations (p_i, q_i) of Σ p_i q_i."""
    pairs = list(pairs)
    if not pairs:
        raise InputError("A Koszul factorization needs at least one pair")
    if table is None:
        table = next((x.table for pair in pairs for x in pair if isinstance(x, Polynomial)), None)
    if table is None:
        raise InputError("Cannot infer the ring of the Koszul factorization")
    result = None
    for p, q in pairs:
        factor = rank_one_mf(table, _read_entry(table, p), _read_entry(table, q))
        result = factor if result is None else tensor_mf(result, factor)
    return result


def primed_names(names):
    return tuple(f"{name}'" for name in names)


def unit_mf(x, y, a, V, primes=None):
    """
    I_{(a,V)} over 𝕂[x y a a'] ⊗ Λ(θ_1..θ_k) in the θ-monomial basis, with
    d = Σ p_i (θ_i ∧ -) + (a_i' - a_i) ι_i and potential V(x y a') - V(x y a).
    With no extra variables this is the rank (1|0) factorization of 0.
    """
    a = tuple(a)
    for name in tuple(x) + tuple(y) + a:
        if name not in V.table:
            raise UnknownVariableError(name, "potential ring")
    if set(V.variables()) - set(x) - set(y) - set(a):
        raise InputError("Potential involves variables outside x, y and a")
    if not a:
        return MatrixFactorization(V.table, Polynomial(V.table), [], [[]], labels=[()], degenerate=True)
    primes = tuple(primes) if primes is not None else primed_names(a)
    clashes = [name for name in primes if name in V.table]
    if clashes:
        raise InputError(f"Primed variable `{clashes[0]}` already exists in the ring")
    table = V.table.extend(list(primes), [V.table.weight(name) for name in a])
    V = V.to_table(table)
    k = len(a)
    quotients = [difference_quotient(V, a, primes, i + 1) for i in range(k)]
    gaps = [Polynomial.variable(table, primes[i]) - Polynomial.variable(table, a[i]) for i in range(k)]

    subsets = [s for size in range(k + 1) for s in itertools.combinations(range(k), size)]
    position = {s: n for n, s in enumerate(subsets)}
    matrix = zero_matrix(table, len(subsets), len(subsets))
    for s, column in position.items():
        for i in range(k):
            before = sum(1 for m in s if m < i)
            sign = -1 if before & 1 else 1
            if i in s:
                target = tuple(m for m in s if m != i)
                entry = gaps[i]
            else:
                target = tuple(sorted(s + (i,)))
                entry = quotients[i]
            if entry:
                row = position[target]
                matrix[row][column] = matrix[row][column] + entry.scale(sign)
    parities = [len(s) & 1 for s in subsets]
    substituted = V.substitute({name: Polynomial.variable(table, p) for name, p in zip(a, primes)}, table)
    mf, _ = MatrixFactorization.from_full(table, substituted - V, matrix, parities, [tuple(s) for s in subsets])
    return mf


def dual_mf(M):
    """M^∨ with blocks (d1)^T and -(d0)^T, a factorization of -V."""
    return MatrixFactorization(
        M.table,
        -M.potential,
        transpose(M.d1) if M.r1 and M.r0 else [[] for _ in range(M.r1)],
        matrix_scale(transpose(M.d0), -1) if M.r1 and M.r0 else [[] for _ in range(M.r0)],
        labels=[("*",) + label for label in M.labels],
        degenerate=M.degenerate,
    )


def lambda_operator(M, t):
    """The odd endomorphism ∂_t d of M as a full matrix."""
    M.table.index(t)
    return matrix_partial(M.d, t)


@dataclass(frozen=True)
class WitnessVerdict:
    holds: bool
    homotopy: list
    entry: tuple = None

    def __bool__(self):
        return self.holds


def conjugation_witness(P, d1, d2, t):
    """
    For P d1 = d2 P, checks P λ1 - λ2 P = d2 H - H d1 with λ = ∂_t d and the
    homotopy H = ∂_t P. P is taken to be invertible; this is not checked.
    """
    table = _matrix_table(P, d1, d2)
    if not matrices_equal(matrix_product(P, d1, table), matrix_product(d2, P, table)):
        raise InputError("P does not intertwine the two differentials")
    homotopy = matrix_partial(P, t)
    lhs = matrix_sum(
        matrix_product(P, matrix_partial(d1, t), table), matrix_product(matrix_partial(d2, t), P, table), -1
    )
    rhs = matrix_sum(matrix_product(d2, homotopy, table), matrix_product(homotopy, d1, table), -1)
    where = first_difference(lhs, rhs)
    return WitnessVerdict(where is None, homotopy, where)


def _matrix_table(*matrices):
    for matrix in matrices:
        for row in matrix:
            for entry in row:
                return entry.table
    raise InputError("Cannot infer the ring of empty matrices")


# grading


@dataclass(frozen=True)
class MFGrading:
    scale: int
    step: int
    weights: tuple


def mf_grading(M):
    """
    Basis weights u with u_i + wt(d[i][j]) = u_j + s, s half the potential's
    weight (variable weights doubled when that is odd). None when the entries
    are not compatible with any such grading.
    """
    if M.potential:
        degree = M.potential.homogeneous_weight()
        if degree is None:
            return None
    else:
        degree = 0
    scale = 2 if degree % 2 else 1
    step = scale * degree // 2
    weights = [None] * M.size
    neighbours = [[] for _ in range(M.size)]
    for i in range(M.size):
        for j in range(M.size):
            entry = M.d[i][j]
            if not entry:
                continue
            entry_weight = entry.homogeneous_weight()
            if entry_weight is None:
                return None
            shift = step - scale * entry_weight
            neighbours[j].append((i, shift))
            neighbours[i].append((j, -shift))
    for root in range(M.size):
        if weights[root] is not None:
            continue
        weights[root] = 0
        queue = deque([root])
        while queue:
            j = queue.popleft()
            for i, shift in neighbours[j]:
                value = weights[j] + shift
                if weights[i] is None:
                    weights[i] = value
                    queue.append(i)
                elif weights[i] != value:
                    return None
    return MFGrading(scale, step, tuple(weights))


# Hom and End complexes


def matrix_delta(M, N, phi, parity):
    """δφ = d_N φ - (-1)^{|φ|} φ d_M for a homogeneous matrix φ: M -> N."""
    table = M.table
    left = matrix_product(N.d, phi, table)
    right = matrix_product(phi, M.d, table)
    return matrix_sum(left, right, -1 if parity == 0 else 1)


class HomComplex(object):
    """
    Hom(M, N) as a semifree module over the polynomial ring, one generator
    E{i}_{j} per matrix unit e_j -> e_i, of parity |i| + |j|.
    """

    def __init__(self, M, N):
        if M.table != N.table:
            raise InputError("Hom complex needs both factorizations over one table")
        if M.potential != N.potential:
            raise InputError(f"Hom complex needs equal potentials, got {M.potential} and {N.potential}")
        self.source = M
        self.target = N
        grading_m, grading_n = mf_grading(M), mf_grading(N)
        if grading_m is None or grading_n is None:
            self.grading = None
            scale = 1
            u_m, u_n = (0,) * M.size, (0,) * N.size
        else:
            self.grading = grading_n
            scale = grading_n.scale
            u_m, u_n = grading_m.weights, grading_n.weights
        self.base = polynomial_algebra(M.table.scaled(scale))
        self.index = {}
        generators = []
        for i in range(N.size):
            for j in range(M.size):
                name = f"E{i}_{j}"
                self.index[name] = (i, j)
                generators.append(GradedVar(name, (N.parity(i) + M.parity(j)) & 1, u_n[i] - u_m[j]))
        differential = {}
        for name, (i, j) in self.index.items():
            parity = (N.parity(i) + M.parity(j)) & 1
            row = {}
            for k in range(N.size):
                if N.d[k][i]:
                    row[f"E{k}_{j}"] = N.d[k][i]
            sign = 1 if parity else -1
            for l in range(M.size):
                if M.d[j][l]:
                    key = f"E{i}_{l}"
                    row[key] = row[key] + M.d[j][l].scale(sign) if key in row else M.d[j][l].scale(sign)
            differential[name] = {k: v for k, v in row.items() if v}
        self.module = SemifreeModule(self.base, generators, differential)

    def generator(self, i, j):
        return f"E{i}_{j}"

    def element_from_matrix(self, phi):
        """Module element {generator name: coefficient} of a matrix M -> N."""
        element = {}
        for i, row in enumerate(phi):
            for j, entry in enumerate(row):
                if entry:
                    element[self.generator(i, j)] = self.base.from_polynomial(entry)
        return element

    def to_matrix(self, element):
        table = self.source.table
        matrix = zero_matrix(table, self.target.size, self.source.size)
        for name, coefficient in element.items():
            i, j = self.index[name]
            matrix[i][j] = matrix[i][j] + coefficient.to_polynomial(table)
        return matrix

    def dimension(self):
        return len(self.index)


def hom_complex(M, N):
    return HomComplex(M, N)


def end_complex(M):
    return HomComplex(M, M)


# evaluation and duality data


@dataclass(frozen=True)
class EvaluationData:
    tensor: MatrixFactorization
    dual: MatrixFactorization
    pairing_is_chain_map: bool
    iso_is_chain_map: bool

    def __bool__(self):
        return self.pairing_is_chain_map and self.iso_is_chain_map


def end_as_tensor(M):
    """
    Checks that e_i ⊗ e_j^* -> δ_ij is a chain map M ⊗ M^∨ -> ring and that
    e_i ⊗ e_j^* -> (-1)^{|j|} E_ij is a chain isomorphism M ⊗ M^∨ -> End(M).
    """
    dual = dual_mf(M)
    tensor = tensor_mf(M, dual)
    table = M.table
    pairs = tensor.factor_pairs

    pairing_ok = True
    for column, (i, j) in enumerate(pairs):
        total = Polynomial(table)
        for row, (k, l) in enumerate(pairs):
            if k == l:
                total = total + tensor.d[row][column]
        if total:
            pairing_ok = False
            break

    def iso(column):
        i, j = pairs[column]
        phi = zero_matrix(table, M.size, M.size)
        phi[i][j] = Polynomial.constant(table, -1 if M.parity(j) else 1)
        return phi, (M.parity(i) + M.parity(j)) & 1

    iso_ok = True
    for column in range(tensor.size):
        phi, parity = iso(column)
        lhs = matrix_delta(M, M, phi, parity)
        rhs = zero_matrix(table, M.size, M.size)
        for row in range(tensor.size):
            entry = tensor.d[row][column]
            if entry:
                image, _ = iso(row)
                rhs = matrix_sum(rhs, matrix_scale(image, entry))
        if not matrices_equal(lhs, rhs):
            iso_ok = False
            break
    return EvaluationData(tensor, dual, pairing_ok, iso_ok)


def same_up_to_basis_order(M, N):
    """True when N is M with its basis permuted, matched by basis labels."""
    if M.table != N.table or M.potential != N.potential or M.ranks != N.ranks:
        return False
    if sorted(M.labels) != sorted(N.labels) or len(set(M.labels)) != len(M.labels):
        return False
    where = {label: k for k, label in enumerate(N.labels)}
    permutation = [where[label] for label in M.labels]
    for i in range(M.size):
        if M.parity(i) != N.parity(permutation[i]):
            return False
        for j in range(M.size):
            if M.d[i][j] != N.d[permutation[i]][permutation[j]]:
                return False
    return True


def double_dual_matches(M):
    """M^∨∨ equals M after negating the odd basis vectors."""
    double = dual_mf(dual_mf(M))
    for i in range(M.size):
        for j in range(M.size):
            sign = (-1 if M.parity(i) else 1) * (-1 if M.parity(j) else 1)
            if double.d[i][j] != M.d[i][j].scale(sign):
                return False
    return double.potential == M.potential
