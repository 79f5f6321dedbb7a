"""Words over a finite alphabet, admissible index sets, and the
polynomial combinatorics built on them.

Conventions used throughout the package:

* generators are numbered 1..n and the neutral (empty) word plays the
  role of a unit, so a word is just a tuple of letters;
* ``sigma <= alpha`` means sigma is a *prefix* of alpha, in which case
  ``alpha = sigma * tau`` and we call tau the prefix quotient of alpha
  by sigma;
* the canonical order on words is by length first, then lexicographic
  on letters.  Every matrix indexed by words (or by factorization
  pairs) uses this order, so serialized artifacts are reproducible.

Serialized form of a word: letters joined by dots, e.g. ``"1.2.1"``;
the empty word serializes to the empty string.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import (
    NotAdmissible,
    NotHomogeneous,
    SigmaTooLarge,
    ZeroLambda,
)

#: hard ceiling on the number of words an expanded commutative index
#: set may contain (see :func:`sigma_pi`)
DEFAULT_SIGMA_CAP = 2000


@dataclass(frozen=True)
class Word:
    """An element of the free semigroup with ``n`` generators.

    ``letters`` is a tuple of integers in ``1..n``; the empty tuple is
    the neutral element.
    """

    letters: tuple[int, ...]
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one generator, got n={self.n}")
        for a in self.letters:
            if not 1 <= a <= self.n:
                raise ValueError(f"letter {a} outside alphabet 1..{self.n}")

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return ".".join(str(a) for a in self.letters)

    def __repr__(self):
        return f"Word({'.'.join(map(str, self.letters)) or 'e'}, n={self.n})"

    @property
    def sort_key(self):
        return (len(self.letters), self.letters)

    def concat(self, other: "Word") -> "Word":
        assert self.n == other.n
        return Word(self.letters + other.letters, self.n)

    def suffixes(self):
        """All suffixes, including the word itself and the empty word."""
        return [Word(self.letters[i:], self.n) for i in range(len(self.letters) + 1)]


def empty_word(n: int) -> Word:
    return Word((), n)


def generator(i: int, n: int) -> Word:
    return Word((i,), n)


def word_key(w: Word) -> str:
    """Serialize a word to its dotted string form."""
    return str(w)


def parse_word_key(key: str, n: int) -> Word:
    """Inverse of :func:`word_key`."""
    if key == "":
        return empty_word(n)
    return Word(tuple(int(part) for part in key.split(".")), n)


def prefix_quotient(sigma: Word, alpha: Word) -> Word | None:
    """Return tau with ``sigma == alpha * tau`` if alpha is a prefix of
    sigma, else None."""
    if sigma.n != alpha.n:
        raise ValueError("words over different alphabets")
    k = len(alpha)
    if len(sigma) < k or sigma.letters[:k] != alpha.letters:
        return None
    return Word(sigma.letters[k:], sigma.n)


def words_up_to(n: int, length: int):
    """Yield every word over ``1..n`` of length at most ``length`` in
    canonical order."""
    for ell in range(length + 1):
        for letters in itertools.product(range(1, n + 1), repeat=ell):
            yield Word(letters, n)


class AdmissibleSet:
    """A finite, suffix-closed set of words.

    Suffix closure is what makes the factorization pairs and the
    associated kernels well defined, so it is enforced at construction
    time.  Instances are immutable; the sorted word list and the pair
    list are computed once and cached.
    """

    def __init__(self, n: int, words):
        self.n = n
        self.words = frozenset(words)
        for w in self.words:
            if w.n != n:
                raise NotAdmissible(f"word {w!r} not over alphabet of size {n}")
            for s in w.suffixes():
                if s not in self.words:
                    raise NotAdmissible(
                        f"set is not suffix closed: {w!r} present, suffix {s!r} missing"
                    )
        self.sorted_words: tuple[Word, ...] = tuple(
            sorted(self.words, key=lambda w: w.sort_key)
        )
        # factorization pairs (alpha, beta) with alpha*beta in the set;
        # distinct pairs for distinct splittings, ordered canonically
        pairs = []
        for w in self.sorted_words:
            for i in range(len(w) + 1):
                pairs.append((Word(w.letters[:i], n), Word(w.letters[i:], n)))
        pairs.sort(key=lambda p: (p[0].sort_key, p[1].sort_key))
        self.lambda_pairs: tuple[tuple[Word, Word], ...] = tuple(pairs)

    def __contains__(self, w: Word):
        return w in self.words

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.sorted_words)

    def __eq__(self, other):
        return isinstance(other, AdmissibleSet) and (self.n, self.words) == (
            other.n,
            other.words,
        )

    def __hash__(self):
        return hash((self.n, self.words))

    def __repr__(self):
        return f"AdmissibleSet(n={self.n}, {len(self.words)} words)"

    def max_length(self) -> int:
        return max((len(w) for w in self.words), default=0)


def suffix_closure(words) -> AdmissibleSet:
    """Smallest admissible set containing the given nonempty iterable of
    words."""
    words = list(words)
    if not words:
        raise ValueError("need at least one word")
    n = words[0].n
    closed = set()
    for w in words:
        closed.update(w.suffixes())
    return AdmissibleSet(n, closed)


def full_truncation(n: int, depth: int) -> AdmissibleSet:
    """All words of length at most ``depth``."""
    return AdmissibleSet(n, words_up_to(n, depth))


def build_lambda_set(sigma: AdmissibleSet):
    """The set of factorization pairs (alpha, beta) with alpha*beta in
    sigma.  Its cardinality is sum(len(w) + 1 for w in sigma)."""
    return set(sigma.lambda_pairs)


# ---------------------------------------------------------------------------
# multi-indices and the abelianization map


def abelianize(w: Word) -> tuple[int, ...]:
    """Letter-count image of a word in Z_+^n."""
    k = [0] * w.n
    for a in w.letters:
        k[a - 1] += 1
    return tuple(k)


def multiindex_to_word(k: tuple[int, ...], n: int) -> Word:
    """The canonical (sorted) word mapping to ``k``: generator 1
    repeated k_1 times, then generator 2, and so on."""
    if len(k) != n:
        raise ValueError(f"multi-index of length {len(k)} for n={n}")
    letters = []
    for i, ki in enumerate(k, start=1):
        if ki < 0:
            raise ValueError(f"negative entry in multi-index {k}")
        letters.extend([i] * ki)
    return Word(tuple(letters), n)


def weight(k) -> int:
    return sum(k)


def is_downward_closed(pi, n: int) -> bool:
    """True iff ``pi`` is closed under decreasing any coordinate."""
    pi = set(pi)
    for k in pi:
        for i in range(n):
            if k[i] > 0:
                below = k[:i] + (k[i] - 1,) + k[i + 1:]
                if below not in pi:
                    return False
    return True


def _multiset_permutations(counts):
    """Distinct permutations of the multiset {letter i with multiplicity
    counts[i-1]}, generated without duplicates."""
    total = sum(counts)
    if total == 0:
        yield ()
        return
    counts = list(counts)
    for i, c in enumerate(counts):
        if c > 0:
            counts[i] -= 1
            for rest in _multiset_permutations(counts):
                yield (i + 1,) + rest
            counts[i] += 1


def sigma_pi(pi, n: int, cap: int = DEFAULT_SIGMA_CAP) -> AdmissibleSet:
    """Expand a downward-closed set of multi-indices into the full word
    preimage under abelianization.

    Downward closure of ``pi`` is exactly what makes the preimage suffix
    closed.  The total word count is checked against ``cap`` before any
    enumeration happens because it grows multinomially.
    """
    pi = {tuple(k) for k in pi}
    for k in pi:
        if len(k) != n or any(ki < 0 for ki in k):
            raise NotAdmissible(f"bad multi-index {k} for n={n}")
    if not is_downward_closed(pi, n):
        raise NotAdmissible("multi-index set is not downward closed")
    total = 0
    for k in pi:
        total += math.factorial(weight(k)) // math.prod(
            math.factorial(ki) for ki in k
        )
    if total > cap:
        raise SigmaTooLarge(
            f"index set expands to {total} words (cap {cap}); "
            "raise the cap explicitly if this is intended"
        )
    words = set()
    for k in pi:
        for letters in _multiset_permutations(k):
            words.add(Word(letters, n))
    return AdmissibleSet(n, words)


# ---------------------------------------------------------------------------
# deformation coefficients and word signatures


class LambdaSpec:
    """Deformation coefficients lambda_{ji} for pairs j > i.

    Encodes the exchange relations "generator j times generator i equals
    lambda_{ji} times (i then j)".  Missing entries default to 1, which
    recovers plain commutativity.
    """

    def __init__(self, n: int, entries=None):
        self.n = n
        self.entries = {}
        for (j, i), v in (entries or {}).items():
            if not (1 <= i < j <= n):
                raise ValueError(f"lambda index ({j},{i}) must satisfy j > i >= 1")
            self.entries[(j, i)] = complex(v)

    def __call__(self, j: int, i: int) -> complex:
        if not (1 <= i < j <= self.n):
            raise ValueError(f"lambda index ({j},{i}) must satisfy j > i >= 1")
        return self.entries.get((j, i), 1.0 + 0.0j)

    def is_trivial(self) -> bool:
        return all(v == 1 for v in self.entries.values())

    def __repr__(self):
        body = ", ".join(f"{j}.{i}={v}" for (j, i), v in sorted(self.entries.items()))
        return f"LambdaSpec(n={self.n}{', ' + body if body else ''})"


def _signature_bubble(letters, lam: LambdaSpec) -> complex:
    """Signature via explicit adjacent-transposition sort."""
    letters = list(letters)
    eps = 1.0 + 0.0j
    m = len(letters)
    for _ in range(m):
        swapped = False
        for p in range(m - 1):
            if letters[p] > letters[p + 1]:
                eps *= lam(letters[p], letters[p + 1])
                letters[p], letters[p + 1] = letters[p + 1], letters[p]
                swapped = True
        if not swapped:
            break
    return eps


def _signature_inversions(letters, lam: LambdaSpec) -> complex:
    """Signature as a product over inversion pairs."""
    eps = 1.0 + 0.0j
    for p in range(len(letters)):
        for q in range(p + 1, len(letters)):
            if letters[p] > letters[q]:
                eps *= lam(letters[p], letters[q])
    return eps


def signature(w: Word, lam: LambdaSpec) -> complex:
    """Product of deformation coefficients picked up when sorting ``w``
    into its canonical word.

    The value is independent of the particular sequence of adjacent
    swaps; we compute it two ways (bubble sort and inversion count) and
    require agreement, which guards against bookkeeping regressions.
    """
    for (j, i), v in lam.entries.items():
        if v == 0:
            raise ZeroLambda(f"lambda_{{{j}{i}}} = 0; signatures are undefined")
    a = _signature_bubble(w.letters, lam)
    b = _signature_inversions(w.letters, lam)
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a)), (
        f"signature mismatch between sort strategies: {a} vs {b}"
    )
    return a


# ---------------------------------------------------------------------------
# free polynomials


@dataclass(frozen=True)
class FreePolynomial:
    """A finite complex combination of words, kept in canonical term
    order with distinct words."""

    terms: tuple[tuple[complex, Word], ...]

    def __post_init__(self):
        seen = set()
        for coeff, w in self.terms:
            if w in seen:
                raise ValueError(f"duplicate word {w!r} in polynomial")
            seen.add(w)

    @staticmethod
    def from_terms(terms) -> "FreePolynomial":
        """Build from (coeff, word) pairs, merging duplicates and
        dropping zeros."""
        acc: dict[Word, complex] = {}
        for coeff, w in terms:
            acc[w] = acc.get(w, 0.0 + 0.0j) + complex(coeff)
        cleaned = [(c, w) for w, c in acc.items() if c != 0]
        cleaned.sort(key=lambda t: t[1].sort_key)
        return FreePolynomial(tuple(cleaned))

    @property
    def n(self) -> int:
        return self.terms[0][1].n if self.terms else 0

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        lengths = {len(w) for _, w in self.terms}
        return len(lengths) <= 1

    def degree(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no degree")
        return max(len(w) for _, w in self.terms)

    def words(self):
        return [w for _, w in self.terms]

    def __repr__(self):
        if self.is_zero():
            return "FreePolynomial(0)"
        body = " + ".join(f"({c})*{w or 'e'}" for c, w in self.terms)
        return f"FreePolynomial({body})"


def commutator_polynomial(i: int, j: int, n: int, lam: LambdaSpec | None = None):
    """The exchange relation polynomial g_j g_i - lambda_{ji} g_i g_j
    for i < j (plain commutator when lambda is trivial)."""
    if not (1 <= i < j <= n):
        raise ValueError("need 1 <= i < j <= n")
    coeff = lam(j, i) if lam is not None else 1.0 + 0.0j
    return FreePolynomial.from_terms(
        [(1.0, Word((j, i), n)), (-coeff, Word((i, j), n))]
    )


def all_commutators(n: int, lam: LambdaSpec | None = None):
    return [
        commutator_polynomial(i, j, n, lam)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    ]


def evaluate(p: FreePolynomial, mats) -> np.ndarray:
    """Evaluate a polynomial on a tuple of matrices (index 0 is
    generator 1).  The empty word evaluates to the identity."""
    if not mats:
        raise ValueError("need at least one matrix")
    dim = mats[0].shape[0]
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, w in p.terms:
        out += coeff * word_product(mats, w)
    return out


def word_product(mats, w: Word) -> np.ndarray:
    """The product of matrices along a word (identity for the empty
    word)."""
    dim = mats[0].shape[0]
    if len(w) == 0:
        return np.eye(dim, dtype=complex)
    return reduce(np.matmul, (mats[a - 1] for a in w.letters))


def multiindex_product(mats, k) -> np.ndarray:
    """T_1^{k_1} ... T_n^{k_n}."""
    dim = mats[0].shape[0]
    out = np.eye(dim, dtype=complex)
    for i, ki in enumerate(k):
        for _ in range(ki):
            out = out @ mats[i]
    return out


# ---------------------------------------------------------------------------
# compatibility of a word set with homogeneous relations


def is_compatible(sigma: AdmissibleSet, p: FreePolynomial) -> bool:
    """Whether every two-sided translate of ``p`` lands either entirely
    inside sigma or entirely outside it.

    Only translates that could meet sigma matter, so the enumeration is
    cut off at the maximum word length occurring in sigma minus the
    shortest word of ``p``; longer translates are disjoint from sigma
    automatically.
    """
    if p.is_zero() or len(sigma) == 0:
        return True
    n = sigma.n
    max_len = sigma.max_length()
    min_deg = min(len(w) for _, w in p.terms)
    budget = max_len - min_deg
    if budget < 0:
        return True
    for total in range(budget + 1):
        for la in range(total + 1):
            lb = total - la
            for left in itertools.product(range(1, n + 1), repeat=la):
                for right in itertools.product(range(1, n + 1), repeat=lb):
                    hits = [
                        Word(left + w.letters + right, n) in sigma
                        for _, w in p.terms
                    ]
                    if any(hits) and not all(hits):
                        return False
    return True


def is_admissible_pair(sigma: AdmissibleSet, polys) -> bool:
    """Suffix-closed sigma together with polynomials it is compatible
    with.  (Closure is a type invariant of AdmissibleSet, so only
    compatibility needs checking here.)"""
    return all(is_compatible(sigma, p) for p in polys)


# ---------------------------------------------------------------------------
# homogeneous ideal slices


def ideal_span_basis(polys, degree: int, pivot_tol: float = 1e-10):
    """Linearly independent spanning set of the degree-``degree`` slice
    of the two-sided ideal generated by homogeneous polynomials.

    Enumerates all products (word) * p * (word) of the right total
    degree, writes them as coefficient vectors over the degree-``degree``
    word basis, and row-reduces with partial pivoting.
    """
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return []
    for p in polys:
        if not p.is_homogeneous():
            raise NotHomogeneous(f"{p!r} is not homogeneous")
    n = polys[0].n
    basis_words = [
        Word(t, n) for t in itertools.product(range(1, n + 1), repeat=degree)
    ]
    col_of = {w: c for c, w in enumerate(basis_words)}
    rows = []
    for p in polys:
        d = p.degree()
        if d > degree:
            continue
        for la in range(degree - d + 1):
            lb = degree - d - la
            for left in itertools.product(range(1, n + 1), repeat=la):
                for right in itertools.product(range(1, n + 1), repeat=lb):
                    vec = np.zeros(len(basis_words), dtype=complex)
                    for coeff, w in p.terms:
                        vec[col_of[Word(left + w.letters + right, n)]] += coeff
                    rows.append(vec)
    if not rows:
        return []
    mat = np.array(rows)
    # Gaussian elimination with partial pivoting; rows below pivot_tol
    # in magnitude are treated as dependent and dropped.
    nrows, ncols = mat.shape
    rank = 0
    for col in range(ncols):
        pivot = rank + np.argmax(np.abs(mat[rank:, col])) if rank < nrows else None
        if pivot is None or abs(mat[pivot, col]) <= pivot_tol:
            continue
        mat[[rank, pivot]] = mat[[pivot, rank]]
        mat[rank] = mat[rank] / mat[rank, col]
        for r in range(nrows):
            if r != rank and mat[r, col] != 0:
                mat[r] = mat[r] - mat[r, col] * mat[rank]
        rank += 1
        if rank == nrows:
            break
    out = []
    for r in range(rank):
        terms = [
            (mat[r, c], basis_words[c])
            for c in range(ncols)
            if abs(mat[r, c]) > pivot_tol
        ]
        out.append(FreePolynomial.from_terms(terms))
    return out
