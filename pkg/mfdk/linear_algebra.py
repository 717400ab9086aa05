"""
Exact sparse linear algebra over the rationals. Vectors are dicts from
comparable, hashable keys to nonzero Fractions; the key order decides pivots.
"""

from fractions import Fraction


def _axpy(target, factor, source):
    """target -= factor * source, in place."""
    for key, value in source.items():
        updated = target.get(key, 0) - factor * value
        if updated:
            target[key] = updated
        else:
            target.pop(key, None)


def clean(vector):
    return {k: Fraction(v) for k, v in vector.items() if v}


class EchelonBasis(object):
    """
    Row echelon basis of a subspace. Each row is stored under its pivot (its
    smallest key) with pivot coefficient 1. Reducing a vector eliminates every
    pivot key, which yields a canonical representative modulo the subspace.
    """

    def __init__(self, vectors=()):
        self._rows = {}
        for vector in vectors:
            self.add(vector)

    def copy(self):
        other = EchelonBasis()
        other._rows = dict(self._rows)
        return other

    @property
    def rank(self):
        return len(self._rows)

    def __len__(self):
        return len(self._rows)

    def reduce(self, vector):
        remainder = dict(vector)
        rows = self._rows
        while True:
            hits = [key for key in remainder if key in rows]
            if not hits:
                return remainder
            pivot = min(hits)
            _axpy(remainder, remainder[pivot], rows[pivot])

    def contains(self, vector):
        return not self.reduce(vector)

    def add(self, vector):
        """Adds `vector`; returns True when it was independent of the rows so far."""
        remainder = self.reduce(vector)
        if not remainder:
            return False
        pivot = min(remainder)
        scale = remainder[pivot]
        self._rows[pivot] = {k: v / scale for k, v in remainder.items()}
        return True


class LinearMap(object):
    """
    A linear map given by the images of source basis vectors (`columns`, one
    sparse vector per source key). Elimination tracks how each stored row is
    combined from the columns, which gives a kernel basis and preimages.
    """

    def __init__(self, columns):
        # columns: sequence of (source_key, image_vector)
        self._rows = {}
        self.kernel = []
        self.source_keys = []
        for key, image in columns:
            self.add_column(key, image)

    @property
    def rank(self):
        return len(self._rows)

    def add_column(self, key, image):
        self.source_keys.append(key)
        self._absorb(key, image)

    def _reduce(self, vector, combination):
        rows = self._rows
        while True:
            hits = [key for key in vector if key in rows]
            if not hits:
                return vector, combination
            pivot = min(hits)
            factor = vector[pivot]
            row, row_combination = rows[pivot]
            _axpy(vector, factor, row)
            _axpy(combination, factor, row_combination)

    def _absorb(self, key, image):
        vector, combination = self._reduce(dict(image), {key: Fraction(1)})
        if not vector:
            self.kernel.append(combination)
            return
        pivot = min(vector)
        scale = vector[pivot]
        self._rows[pivot] = (
            {k: v / scale for k, v in vector.items()},
            {k: v / scale for k, v in combination.items()},
        )

    def image_basis(self):
        return EchelonBasis(row for row, _ in self._rows.values())

    def preimage(self, target):
        """Some source vector mapping to `target`, or None outside the image."""
        vector, combination = self._reduce(dict(target), {})
        if vector:
            return None
        return {k: -v for k, v in combination.items() if v}


def rank_of(vectors):
    return EchelonBasis(vectors).rank


def independent_modulo(subspace, candidates):
    """Candidates that extend a basis of `subspace` (an EchelonBasis), greedily in order."""
    basis = subspace.copy()
    return [vector for vector in candidates if basis.add(vector)]


def combine(combination, vectors):
    """Sum of coefficient * vectors[key] over a combination dict."""
    total = {}
    for key, coefficient in combination.items():
        _axpy(total, -coefficient, vectors[key])
    return total
