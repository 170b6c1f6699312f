"""Exact dense linear algebra over Q and F_p.

Matrices over F_p are int64 arrays of residues.  Matrices over Q are object
arrays holding Python ``int`` or ``fractions.Fraction`` values (an ``int`` is
a rational in lowest terms with denominator 1).

Over Q, rank/kernel/solve run modular elimination (``_kernels.rref_mod_p``)
and then *certify* the answer with exact integer arithmetic:

* rank_p(A) <= rank_Q(A) for an integer matrix A, since a nonzero minor mod p
  is a nonzero integer;
* the kernel vectors obtained by rational reconstruction are checked to
  satisfy A K = 0 exactly, which bounds rank_Q(A) from above.

If certification fails for every prime tried, plain Fraction Gauss-Jordan
elimination takes over.  Results are therefore always exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from ._kernels import rref_mod_p
from .errors import DimensionMismatch

_LARGE_PRIMES = (2147483647, 2147483629, 2147483587)
_FLOAT_EXACT = 2**53
_INT64_SAFE = 2**62


class Field:
    name: str
    dtype: type

    def __call__(self, x):
        raise NotImplementedError

    def __repr__(self):
        return f"<{self.name}>"


class RationalField(Field):
    name = "Q"
    dtype = object
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, (bool, np.bool_)):
            return int(x)
        if isinstance(x, (int, np.integer)):
            return int(x)
        if isinstance(x, str):
            x = Fraction(x.strip())
        elif not isinstance(x, Fraction):
            x = Fraction(x)
        return int(x) if x.denominator == 1 else x

    def array(self, values) -> np.ndarray:
        arr = np.array(values, dtype=object)
        flat = arr.reshape(-1)
        for i, v in enumerate(flat):
            flat[i] = self(v)
        return arr

    def zeros(self, shape) -> np.ndarray:
        arr = np.empty(shape, dtype=object)
        arr.fill(0)
        return arr

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return arr

    def inv(self, x):
        return self(Fraction(1) / Fraction(x))

    def random(self, rng, size=None, bound: int = 3):
        vals = rng.integers(-bound, bound + 1, size=size)
        if size is None:
            return int(vals)
        return np.array(vals, dtype=np.int64).astype(object)

    def to_json(self, x):
        x = self(x)
        return x if isinstance(x, int) else str(x)


class PrimeField(Field):
    dtype = np.int64

    def __init__(self, p: int):
        if not 2 <= p < 2**31 or not _is_prime(p):
            raise ValueError(f"Fp requires a prime below 2**31, got {p}")
        self.p = p
        self.characteristic = p
        self.name = f"Fp:{p}"

    def __call__(self, x):
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def array(self, values) -> np.ndarray:
        arr = np.array(values, dtype=object)
        flat = arr.reshape(-1)
        out = np.array([self(v) for v in flat], dtype=np.int64)
        return out.reshape(arr.shape)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return np.mod(arr, self.p)

    def inv(self, x):
        return pow(int(x), -1, self.p)

    def random(self, rng, size=None, bound: int | None = None):
        vals = rng.integers(0, self.p, size=size)
        if size is None:
            return int(vals)
        return np.asarray(vals, dtype=np.int64)

    def to_json(self, x):
        return int(x)


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(tag: str) -> Field:
    if tag == "Q":
        return QQ
    if tag.startswith("Fp:"):
        return GF(int(tag[3:]))
    raise ValueError(f"unknown field tag {tag!r}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# raw array helpers


def matmul(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of two field arrays."""
    if a.shape[-1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if isinstance(field, PrimeField):
        return _matmul_mod(a, b, field.p)
    return _matmul_q(a, b)


def _matmul_mod(a, b, p):
    k = a.shape[-1]
    if k == 0:
        return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    if k * (p - 1) ** 2 < 2**63:
        return (a @ b) % p
    if (p - 1) ** 2 * k < _FLOAT_EXACT:  # pragma: no cover - unreachable for large p
        return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % p
    lo = b & 0xFFFF
    hi = b >> 16
    if k * (p - 1) * 0xFFFF >= 2**63:
        return np.array(np.dot(a.astype(object), b.astype(object)) % p, dtype=np.int64)
    r_lo = (a @ lo) % p
    r_hi = (a @ hi) % p
    return (r_hi * 65536 % p + r_lo) % p


def _all_int(arr: np.ndarray) -> bool:
    return set(map(type, arr.flat)) <= {int}


def _as_int64(arr: np.ndarray) -> np.ndarray | None:
    """int64 copy of an object array of Python ints, or None (fractions, overflow)."""
    if arr.dtype == np.int64:
        return arr
    if arr.size == 0:
        return np.zeros(arr.shape, dtype=np.int64)
    flat = arr.ravel().tolist()
    if not set(map(type, flat)) <= {int}:
        return None
    try:
        out = np.array(flat, dtype=np.int64)
    except OverflowError:
        return None
    if np.any(np.abs(out) > _INT64_SAFE):
        return None
    return out.reshape(arr.shape)


def _max_abs(arr: np.ndarray) -> int:
    if arr.dtype == np.int64:
        return int(np.abs(arr).max()) if arr.size else 0
    return max((abs(x) for x in arr.flat), default=0)


def _int_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of two integer arrays (int64 or object of Python ints)."""
    k = a.shape[-1]
    if k == 0 or a.size == 0 or b.size == 0:
        out = np.empty(a.shape[:-1] + b.shape[1:], dtype=object)
        out.fill(0)
        return out
    a64 = _as_int64(a)
    b64 = _as_int64(b) if a64 is not None else None
    if a64 is not None and b64 is not None:
        bound = _max_abs(a64) * _max_abs(b64) * k
        if bound < _FLOAT_EXACT:
            res = a64.astype(np.float64) @ b64.astype(np.float64)
            return res.astype(np.int64).astype(object)
    return np.dot(a.astype(object), b.astype(object))


def _row_denominators(a: np.ndarray) -> list[int]:
    dens = []
    for row in a:
        d = 1
        for x in row:
            if type(x) is Fraction:
                d = math.lcm(d, x.denominator)
        dens.append(d)
    return dens


def _matmul_q(a, b):
    if _all_int(a) and _all_int(b):
        return _int_matmul(a, b)
    # clear denominators row-wise in a and column-wise in b, multiply integers
    ra = _row_denominators(a) if a.ndim == 2 else None
    cb = _row_denominators(b.T) if b.ndim == 2 else None
    if ra is None or cb is None:
        return np.dot(a, b)
    ai = np.array([[int(x * d) for x in row] for row, d in zip(a, ra)], dtype=object).reshape(a.shape)
    bi = np.array([[int(x * d) for x in col] for col, d in zip(b.T, cb)], dtype=object).reshape(b.T.shape).T
    prod = _int_matmul(ai, bi)
    for i, di in enumerate(ra):
        for j, dj in enumerate(cb):
            if di * dj != 1:
                prod[i, j] = QQ(Fraction(int(prod[i, j]), di * dj))
    return prod


def _integer_rows(data: np.ndarray) -> np.ndarray:
    """Scale each row of a rational array to integers (row space preserved)."""
    fast = _as_int64(data)
    if fast is not None:
        return fast
    out = np.empty(data.shape, dtype=object)
    for i in range(data.shape[0]):
        row = data[i]
        den = 1
        for x in row:
            if type(x) is not int:
                den = math.lcm(den, x.denominator)
        if den == 1:
            out[i] = row
        else:
            out[i] = [int(x * den) for x in row]
    return out


def _to_residues(int_arr: np.ndarray, p: int) -> np.ndarray:
    if int_arr.size == 0:
        return np.zeros(int_arr.shape, dtype=np.int64)
    a64 = _as_int64(int_arr)
    if a64 is not None:
        return a64 % p
    return np.array(int_arr % p, dtype=np.int64)


def _ratrecon(a: int, p: int):
    """Rational reconstruction of a residue; ``None`` when no small fraction fits."""
    if a == 0:
        return 0
    bound = math.isqrt(p // 2)
    r0, r1 = p, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if math.gcd(r1, s1) != 1:
        return None
    return r1 if s1 == 1 else Fraction(r1, s1)


def _ratrecon_vec(a: np.ndarray, p: int):
    """Vectorised rational reconstruction of int64 residues mod p < 2**31.

    Returns (num, den, ok); entries with ``ok`` False have no fraction with
    numerator and denominator bounded by sqrt(p/2).
    """
    bound = math.isqrt(p // 2)
    r0 = np.full(a.shape, p, dtype=np.int64)
    r1 = a.astype(np.int64).copy()
    s0 = np.zeros(a.shape, dtype=np.int64)
    s1 = np.ones(a.shape, dtype=np.int64)
    active = r1 > bound
    while np.any(active):
        q = np.where(active, r0 // np.where(active, r1, 1), 0)
        r0, r1 = np.where(active, r1, r0), np.where(active, r0 - q * r1, r1)
        s0, s1 = np.where(active, s1, s0), np.where(active, s0 - q * s1, s1)
        active = r1 > bound
    neg = s1 < 0
    num = np.where(neg, -r1, r1)
    den = np.where(neg, -s1, s1)
    ok = (den != 0) & (den <= bound) & (np.gcd(num, den) == 1)
    ok |= a == 0
    den = np.where(a == 0, 1, den)
    return num, den, ok


@lru_cache(maxsize=None)
def _primes(count: int) -> tuple[int, ...]:
    """The ``count`` largest primes below 2**31, descending."""
    out = list(_LARGE_PRIMES)
    c = out[-1] - 2
    while len(out) < count:
        if _is_prime(c):
            out.append(c)
        c -= 2
    return tuple(out[:count])


_MAX_PRIMES = 24


def _reconstruct(res: np.ndarray, modulus: int):
    """Object array of rationals with the given residues mod ``modulus``, or None."""
    if modulus < 2**31:
        num, den, ok = _ratrecon_vec(res.astype(np.int64), modulus)
        if not np.all(ok):
            return None
        out = num.astype(object)
        for idx in zip(*np.nonzero(den != 1)):
            out[idx] = Fraction(int(num[idx]), int(den[idx]))
        return out
    out = np.empty(res.shape, dtype=object)
    half = modulus // 2
    for idx, v in np.ndenumerate(res):
        v = int(v)
        if v <= 2**40 or v >= modulus - 2**40:
            out[idx] = v if v <= half else v - modulus
            continue
        r = _ratrecon(v, modulus)
        if r is None:
            return None
        out[idx] = r
    return out


def _column_denominators(K: np.ndarray) -> list[int]:
    dens = []
    for t in range(K.shape[1]):
        d = 1
        for x in K[:, t]:
            if type(x) is Fraction:
                d = math.lcm(d, x.denominator)
        dens.append(d)
    return dens


def _vanishes(A: np.ndarray, K: np.ndarray) -> bool:
    """Certified test of A @ K == 0 for integer matrices.

    Each entry of A @ K is an integer of absolute value at most
    B = inner * max|A| * max|K|; it is zero iff it vanishes modulo a set of
    primes whose product exceeds 2B.
    """
    if A.size == 0 or K.size == 0:
        return True
    a64, k64 = _as_int64(A), _as_int64(K)
    if a64 is not None and k64 is not None:
        bound = _max_abs(a64) * _max_abs(k64) * A.shape[1]
        if bound < _FLOAT_EXACT:
            return not np.any(a64.astype(np.float64) @ k64.astype(np.float64))
    bound = _max_abs(A) * _max_abs(K) * A.shape[1]
    prod = 1
    for p in _primes(_MAX_PRIMES):
        if prod > 2 * bound:
            return True
        if np.any(_matmul_mod(_to_residues(A, p), _to_residues(K, p), p)):
            return False
        prod *= p
    if prod > 2 * bound:
        return True
    return not np.any(np.dot(A.astype(object), K.astype(object)))  # pragma: no cover


def _kernel_from_rref(R: np.ndarray, pivots: np.ndarray, n: int, p: int) -> np.ndarray:
    """Kernel basis (n x f) over F_p from an RREF."""
    piv = [int(c) for c in pivots]
    free = [c for c in range(n) if c not in set(piv)]
    K = np.zeros((n, len(free)), dtype=np.int64)
    for t, j in enumerate(free):
        K[j, t] = 1
        if piv:
            K[piv, t] = (-R[: len(piv), j]) % p
    return K


def _kernel_matrix(block: np.ndarray, piv: list[int], free: list[int], n: int) -> np.ndarray:
    K = np.empty((n, len(free)), dtype=object)
    K.fill(0)
    for t, j in enumerate(free):
        K[j, t] = 1
    if piv and free:
        K[np.ix_(piv, list(range(len(free))))] = block
    return K


def _column_integerise(K: np.ndarray) -> np.ndarray:
    if not K.size:
        return K
    dens = _column_denominators(K)
    if all(d == 1 for d in dens):
        return K
    out = K.copy()
    for t, d in enumerate(dens):
        if d != 1:
            out[:, t] = [int(x * d) for x in K[:, t]]
    return out


class _Certified:
    __slots__ = ("rank", "pivots", "kernel")

    def __init__(self, rank, pivots, kernel):
        self.rank = rank
        self.pivots = pivots
        self.kernel = kernel


def _identity_kernel(n: int) -> np.ndarray:
    K = np.empty((n, n), dtype=object)
    K.fill(0)
    for i in range(n):
        K[i, i] = 1
    return K


def _crt_kernel(ints: np.ndarray):
    """Certified (rank, pivots, kernel) by multi-prime reconstruction, or None."""
    m, n = ints.shape
    best = None  # (pivots, accumulated residues, modulus)
    for p in _primes(_MAX_PRIMES):
        R, pivots = rref_mod_p(_to_residues(ints, p), p)
        piv = [int(c) for c in pivots]
        free = [c for c in range(n) if c not in set(piv)]
        neg = (-R[: len(piv)][:, free]) % p if piv and free else np.zeros((len(piv), len(free)), dtype=np.int64)
        if best is not None and piv != best[0]:
            # the rational pivots are the lexicographically least of maximal rank
            if (len(piv), [-c for c in piv]) <= (len(best[0]), [-c for c in best[0]]):
                continue
            best = None
        if best is None:
            acc, mod = neg.astype(object), p
        else:
            acc0, mod = best[1], best[2]
            inv = pow(mod % p, -1, p)
            diff = ((neg.astype(object) - acc0) % p) * inv % p
            acc, mod = acc0 + mod * diff, mod * p
        best = (piv, acc, mod)
        block = _reconstruct(acc, mod) if acc.size else acc
        if block is None:
            continue
        K = _kernel_matrix(block, piv, free, n)
        if _vanishes(ints, _column_integerise(K)):
            return _Certified(len(piv), piv, K)
    return None


def _q_eliminate(ints: np.ndarray, want_kernel: bool = True) -> _Certified:
    """Certified rank / pivots / kernel of an integer matrix over Q."""
    m, n = ints.shape
    if m == 0 or n == 0:
        return _Certified(0, [], _identity_kernel(n))
    if not want_kernel:
        p = _LARGE_PRIMES[0]
        _, pivots = rref_mod_p(_to_residues(ints, p), p)
        r = len(pivots)
        if r == min(m, n):
            # rank_p <= rank_Q <= min(m, n)
            return _Certified(r, [int(c) for c in pivots], None)
        if m < n:
            cert = _crt_kernel(ints.T.copy())
            if cert is not None:
                return _Certified(cert.rank, None, None)
    cert = _crt_kernel(ints)
    if cert is not None:
        return cert
    return _fraction_eliminate(ints)


def _fraction_eliminate(data: np.ndarray) -> _Certified:
    """Reference Gauss-Jordan over Fractions; slow, always exact."""
    m, n = data.shape
    rows = [[Fraction(x) for x in data[i]] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in set(pivots)]
    K = np.empty((n, len(free)), dtype=object)
    K.fill(0)
    for t, j in enumerate(free):
        K[j, t] = 1
        for i, c in enumerate(pivots):
            K[c, t] = QQ(-rows[i][j])
    return _Certified(len(pivots), pivots, K)


# ---------------------------------------------------------------------------
# array-level API used throughout the package


def rank(field: Field, a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if isinstance(field, PrimeField):
        _, pivots = rref_mod_p(a, field.p)
        return len(pivots)
    return _q_eliminate(_integer_rows(a), want_kernel=False).rank


def kernel(field: Field, a: np.ndarray) -> np.ndarray:
    m, n = a.shape
    if isinstance(field, PrimeField):
        if m == 0:
            return np.eye(n, dtype=np.int64)
        R, pivots = rref_mod_p(a, field.p)
        return _kernel_from_rref(R, pivots, n, field.p)
    return _q_eliminate(_integer_rows(a)).kernel


def solve(field: Field, a: np.ndarray, b: np.ndarray):
    """Some x with a @ x = b (b may be 1-d or 2-d), or ``None``."""
    m, n = a.shape
    vec = b.ndim == 1
    B = b.reshape(m, -1) if vec else b
    if B.shape[0] != m:
        raise DimensionMismatch(f"right-hand side has {B.shape[0]} rows, matrix has {m}")
    k = B.shape[1]
    aug = np.concatenate([a, B], axis=1) if m else np.zeros((0, n + k), dtype=field.dtype)
    if isinstance(field, PrimeField):
        if m == 0:
            x = np.zeros((n, k), dtype=np.int64)
            return x.reshape(n) if vec else x
        R, pivots = rref_mod_p(aug, field.p)
        if any(int(c) >= n for c in pivots):
            return None
        x = np.zeros((n, k), dtype=np.int64)
        for i, c in enumerate(pivots):
            x[int(c)] = R[i, n:]
        return x.reshape(n) if vec else x
    x = _solve_q(aug, n, k)
    if x is None:
        return None
    return x.reshape(n) if vec else x


def _solve_q(aug: np.ndarray, n: int, k: int):
    m = aug.shape[0]
    zero = np.empty((n, k), dtype=object)
    zero.fill(0)
    if m == 0:
        return zero
    ints = _integer_rows(aug)
    A, B = ints[:, :n], ints[:, n:]
    for p in _LARGE_PRIMES:
        R, pivots = rref_mod_p(_to_residues(ints, p), p)
        piv = [int(c) for c in pivots]
        if any(c >= n for c in piv):
            # inconsistent mod p; certify rank_Q(A) = #pivots inside A, which
            # with rank_Q(aug) >= rank_p(aug) proves inconsistency over Q
            cert = _q_eliminate(A)
            if cert.rank == sum(1 for c in piv if c < n):
                return None
            continue
        x = zero.copy()
        ok = True
        for i, c in enumerate(piv):
            for j in range(k):
                v = _ratrecon(int(R[i, n + j]), p)
                if v is None:
                    ok = False
                    break
                x[c, j] = v
            if not ok:
                break
        if not ok:
            continue
        if np.all(_exact_q_product(A, x) == B):
            return x
    return _solve_fraction(aug, n, k)


def _exact_q_product(A: np.ndarray, x: np.ndarray) -> np.ndarray:
    if x.size == 0:
        return _int_matmul(A, np.zeros(x.shape, dtype=np.int64).astype(object))
    return np.dot(A, x) if not _all_int(x) else _int_matmul(A, x)


def _solve_fraction(aug: np.ndarray, n: int, k: int):
    cert = _fraction_eliminate(aug)
    if any(c >= n for c in cert.pivots):
        return None
    # redo the elimination keeping the reduced rows
    m = aug.shape[0]
    rows = [[Fraction(x) for x in aug[i]] for i in range(m)]
    r = 0
    x = np.empty((n, k), dtype=object)
    x.fill(0)
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    for i in range(r):
        c = next(j for j in range(n) if rows[i][j] != 0)
        for j in range(k):
            x[c, j] = QQ(rows[i][n + j])
    return x


# ---------------------------------------------------------------------------
# Mat value type


class Mat:
    """Immutable exact matrix over a prime field or Q."""

    __slots__ = ("field", "data")

    def __init__(self, field: Field, data):
        arr = data if isinstance(data, np.ndarray) else field.array(data)
        if arr.ndim != 2:
            raise DimensionMismatch("Mat data must be 2-dimensional")
        if isinstance(field, PrimeField):
            arr = np.mod(np.asarray(arr, dtype=np.int64), field.p)
        else:
            arr = np.asarray(arr, dtype=object)
        arr.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, key, value):
        raise AttributeError("Mat is immutable")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(field, 0, cols or 0)
        return cls(field, field.array(rows))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Mat":
        return cls(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        a = field.zeros((n, n))
        for i in range(n):
            a[i, i] = 1
        return cls(field, a)

    @classmethod
    def column(cls, field: Field, values: Iterable) -> "Mat":
        vals = list(values)
        return cls(field, field.array([[v] for v in vals]) if vals else field.zeros((0, 1)))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    def entries(self) -> list:
        return [self.field(x) for x in self.data.flat]

    def __getitem__(self, idx):
        return self.field(self.data[idx])

    def _check(self, other: "Mat"):
        if self.field != other.field:
            raise DimensionMismatch(f"field mismatch: {self.field.name} vs {other.field.name}")

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat(self.field, matmul(self.field, self.data, other.data))

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} vs {other.shape}")
        return Mat(self.field, self.field.reduce(self.data + other.data))

    def __sub__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} vs {other.shape}")
        return Mat(self.field, self.field.reduce(self.data - other.data))

    def __neg__(self) -> "Mat":
        return Mat(self.field, self.field.reduce(-self.data))

    def scale(self, c) -> "Mat":
        c = self.field(c)
        if isinstance(self.field, PrimeField):
            return Mat(self.field, (self.data * c) % self.field.p)
        return Mat(self.field, self.data * c)

    @property
    def T(self) -> "Mat":
        return Mat(self.field, self.data.T.copy())

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self.data == other.data))
        )

    def __hash__(self):
        return hash((self.field.name, self.shape, tuple(self.data.flat)))

    def is_zero(self) -> bool:
        return not np.any(self.data != 0)

    def __repr__(self):
        return f"Mat({self.field.name}, {self.rows}x{self.cols}, {self.data.tolist()})"


def hstack(field: Field, mats: Sequence[Mat], rows: int | None = None) -> Mat:
    if not mats:
        return Mat.zeros(field, rows or 0, 0)
    return Mat(field, np.concatenate([m.data for m in mats], axis=1))


def vstack(field: Field, mats: Sequence[Mat], cols: int | None = None) -> Mat:
    if not mats:
        return Mat.zeros(field, 0, cols or 0)
    return Mat(field, np.concatenate([m.data for m in mats], axis=0))


def mat_rank(M: Mat) -> int:
    return rank(M.field, M.data)


def mat_kernel(M: Mat) -> Mat:
    """Columns form a basis of the right null space of M."""
    return Mat(M.field, kernel(M.field, M.data))


def mat_solve(M: Mat, b) -> Mat | None:
    """Return a column x with M x = b, or ``None`` if the system is inconsistent.

    Raises DimensionMismatch when ``b`` does not have ``M.rows`` entries.
    """
    if isinstance(b, Mat):
        if b.cols != 1:
            raise DimensionMismatch("right-hand side must be a single column")
        vec = b.data[:, 0]
    else:
        vec = M.field.array(list(b)) if len(b) else M.field.zeros((0,))
    if vec.shape[0] != M.rows:
        raise DimensionMismatch(f"right-hand side has {vec.shape[0]} entries, matrix has {M.rows} rows")
    x = solve(M.field, M.data, np.asarray(vec, dtype=M.field.dtype))
    if x is None:
        return None
    return Mat(M.field, x.reshape(-1, 1))
