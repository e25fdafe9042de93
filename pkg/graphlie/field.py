"""Exact scalar arithmetic over the rationals and over odd prime fields.

Scalars are plain Python values owned by a field object: ``Fraction`` for the
rationals and ``int`` residues in ``[0, p)`` for ``F_p``. Every other module
does its arithmetic through a field handle, so nothing is ever rounded.
Matrix elimination is delegated to sympy's ``DomainMatrix`` over ``QQ`` or
``GF(p)``; the field handle converts scalars in and out of that domain.
"""

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from .utils import FieldError, SingularMatrixError

MAX_PRIME = 2**31
_RATIONAL_PATTERN = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$", re.ASCII)
_MODULUS_PATTERN = re.compile(r"[0-9]+")


class FieldKind(Enum):
    RATIONALS = "q"
    PRIME = "fp"


@dataclass(frozen=True)
class FieldSpec:
    """Which field to compute over: ``"q"`` or ``"fp:<p>"`` with ``p`` an odd prime.

    >>> str(FieldSpec.parse("fp:3"))
    'fp:3'
    >>> FieldSpec.parse("q").kind
    <FieldKind.RATIONALS: 'q'>
    """

    kind: FieldKind
    p: int | None = None

    def __post_init__(self):
        if self.kind is FieldKind.RATIONALS:
            if self.p is not None:
                raise FieldError("the rational field takes no modulus")
            return
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise FieldError(f"prime field needs an integer modulus, got {self.p!r}")
        if self.p == 2:
            raise FieldError("characteristic two not allowed")
        if self.p > MAX_PRIME:
            raise FieldError(f"modulus {self.p} exceeds 2^31")
        if not isprime(self.p):
            raise FieldError(f"modulus {self.p} is not prime")

    @classmethod
    def parse(cls, text):
        text = text.strip().lower()
        if text == "q":
            return cls(FieldKind.RATIONALS)
        if text.startswith("fp:"):
            modulus = text[3:]
            if not _MODULUS_PATTERN.fullmatch(modulus):
                raise FieldError(f"malformed field spec {text!r}")
            return cls(FieldKind.PRIME, int(modulus))
        raise FieldError(f"malformed field spec {text!r}, expected 'q' or 'fp:<p>'")

    def __str__(self):
        if self.kind is FieldKind.RATIONALS:
            return "q"
        return f"fp:{self.p}"


class Field:
    """Arithmetic on the scalars of one field.

    Subclasses provide the primitive operations; the derived ones (``sub``,
    ``div``, ``dot`` and the converters) are shared.
    """

    spec: FieldSpec
    domain: object

    def __eq__(self, other):
        return isinstance(other, Field) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"field_create({str(self.spec)!r})"

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def coerce(self, value):
        raise NotImplementedError

    def format(self, x):
        raise NotImplementedError

    def random_element(self, rng):
        raise NotImplementedError

    def dot(self, xs, ys):
        raise NotImplementedError

    def to_domain(self, x):
        raise NotImplementedError

    def from_domain(self, x):
        raise NotImplementedError

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def eq(self, x, y):
        return x == y

    def is_zero(self, x):
        return x == 0

    def half(self):
        return self.inv(self.coerce(2))

    def parse(self, text):
        match = _RATIONAL_PATTERN.match(str(text))
        if not match:
            raise FieldError(f"cannot parse scalar {text!r} in {self.spec}")
        numerator = int(match.group(1))
        denominator = int(match.group(2)) if match.group(2) else 1
        if denominator == 0:
            raise FieldError(f"zero denominator in scalar {text!r}")
        return self.div(self.coerce(numerator), self.coerce(denominator))

    def random_nonzero(self, rng):
        while True:
            x = self.random_element(rng)
            if not self.is_zero(x):
                return x

    def vector(self, values):
        return tuple(self.coerce(v) for v in values)

    def zeros(self, length):
        return (self.zero(),) * length

    def unit(self, length, position):
        vec = [self.zero()] * length
        vec[position] = self.one()
        return tuple(vec)

    def scale(self, c, vec):
        return tuple(self.mul(c, x) for x in vec)

    def add_vectors(self, xs, ys):
        return tuple(self.add(x, y) for x, y in zip(xs, ys, strict=True))


class RationalField(Field):
    def __init__(self):
        self.spec = FieldSpec(FieldKind.RATIONALS)
        self.domain = QQ

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("zero has no inverse")
        return Fraction(1) / x

    def coerce(self, value):
        if isinstance(value, bool):
            raise FieldError(f"{value!r} is not a rational number")
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return self.parse(value)
        raise FieldError(f"{value!r} is not a rational number")

    def format(self, x):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def random_element(self, rng):
        return Fraction(rng.randint(-9, 9), rng.randint(1, 9))

    def dot(self, xs, ys):
        return sum((x * y for x, y in zip(xs, ys, strict=True)), Fraction(0))

    def to_domain(self, x):
        return QQ(x.numerator, x.denominator)

    def from_domain(self, x):
        return Fraction(int(x.numerator), int(x.denominator))


class PrimeField(Field):
    def __init__(self, p):
        self.spec = FieldSpec(FieldKind.PRIME, p)
        self.p = p
        self.domain = GF(p)

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, x, y):
        return (x + y) % self.p

    def neg(self, x):
        return (-x) % self.p

    def mul(self, x, y):
        return (x * y) % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(x, -1, self.p)

    def coerce(self, value):
        if isinstance(value, bool):
            raise FieldError(f"{value!r} is not an element of {self.spec}")
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise FieldError(f"{value} has no image in {self.spec}")
            return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
        if isinstance(value, str):
            return self.parse(value)
        raise FieldError(f"{value!r} is not an element of {self.spec}")

    def format(self, x):
        return str(x)

    def random_element(self, rng):
        return rng.randrange(self.p)

    def dot(self, xs, ys):
        return sum(x * y for x, y in zip(xs, ys, strict=True)) % self.p

    def to_domain(self, x):
        return self.domain(x)

    def from_domain(self, x):
        return int(x) % self.p


def field_create(spec):
    """Return the field handle for a ``FieldSpec`` or its string form.

    >>> f = field_create("fp:3")
    >>> f.inv(2)
    2
    >>> q = field_create("q")
    >>> q.format(q.add(q.half(), q.half()))
    '1'
    """
    if isinstance(spec, str):
        spec = FieldSpec.parse(spec)
    if spec.kind is FieldKind.RATIONALS:
        return RationalField()
    return PrimeField(spec.p)


# Matrices are lists of rows; vectors are tuples.


class SolveMode(Enum):
    NULL_SPACE = "nullspace"
    RANK = "rank"
    INVERT = "invert"


def _width(A, ncols):
    if ncols is not None:
        return ncols
    if not A:
        raise ValueError("column count of an empty matrix must be given")
    return len(A[0])


def to_domain_matrix(field, A, ncols=None):
    """``A`` as a sympy ``DomainMatrix`` over the field's domain."""
    width = _width(A, ncols)
    rows = []
    for row in A:
        if len(row) != width:
            raise ValueError("matrix is not rectangular")
        rows.append([field.to_domain(field.coerce(x)) for x in row])
    return DomainMatrix(rows, (len(rows), width), field.domain)


def from_domain_matrix(field, M):
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return [[] for _ in range(rows)]
    return [[field.from_domain(x) for x in row] for row in M.to_list()]


def row_reduce(field, A, ncols=None):
    """Reduced row echelon form, zero rows kept at the bottom.

    :return: (reduced rows, pivot column list)
    """
    M = to_domain_matrix(field, A, ncols)
    if 0 in M.shape:
        return from_domain_matrix(field, M), []
    reduced, pivots = M.rref()
    return from_domain_matrix(field, reduced), list(pivots)


def _null_space(field, A, width):
    reduced, pivots = row_reduce(field, A, width)
    basis = []
    for f in (c for c in range(width) if c not in pivots):
        vec = [field.zero()] * width
        vec[f] = field.one()
        for r, p in enumerate(pivots):
            vec[p] = field.neg(reduced[r][f])
        basis.append(tuple(vec))
    return basis


def _rank(field, A, width):
    M = to_domain_matrix(field, A, width)
    if 0 in M.shape:
        return 0
    return M.rank()


def _inverse(field, A):
    size = len(A)
    if any(len(row) != size for row in A):
        raise ValueError("only square matrices can be inverted")
    if size == 0:
        return []
    M = to_domain_matrix(field, A, size)
    if M.rank() < size:
        raise SingularMatrixError("singular")
    return from_domain_matrix(field, M.inv())


def solve_linear(field, A, mode, ncols=None):
    """Exact elimination in one of three modes.

    - ``NULL_SPACE``: list of vectors spanning the kernel (one per free column)
    - ``RANK``: the rank
    - ``INVERT``: the inverse matrix; raises ``SingularMatrixError``

    >>> q = field_create("q")
    >>> solve_linear(q, [[1, 2], [2, 4]], SolveMode.RANK)
    1
    >>> [q.format(x) for x in solve_linear(q, [[1, 2], [2, 4]], SolveMode.NULL_SPACE)[0]]
    ['-2', '1']
    """
    if mode is SolveMode.INVERT:
        return _inverse(field, A)
    width = _width(A, ncols)
    if mode is SolveMode.RANK:
        return _rank(field, A, width)
    if mode is SolveMode.NULL_SPACE:
        return _null_space(field, A, width)
    raise ValueError(f"unknown mode {mode!r}")


def rank(field, A, ncols=None):
    return solve_linear(field, A, SolveMode.RANK, ncols)


def null_space(field, A, ncols=None):
    return solve_linear(field, A, SolveMode.NULL_SPACE, ncols)


def inverse(field, A):
    return solve_linear(field, A, SolveMode.INVERT)


def is_invertible_matrix(field, A):
    if any(len(row) != len(A) for row in A):
        return False
    return rank(field, A, len(A)) == len(A)


def identity_matrix(field, size):
    return [list(field.unit(size, i)) for i in range(size)]


def zero_matrix(field, rows, cols):
    return [[field.zero()] * cols for _ in range(rows)]


def transpose(A, ncols=None):
    width = _width(A, ncols) if A or ncols is not None else 0
    return [[row[c] for row in A] for c in range(width)]


def mat_mul(field, A, B, ncols=None):
    """``A @ B``; ``ncols`` is the column count of ``B`` when ``B`` has no rows."""
    width = _width(B, ncols) if B or ncols is not None else 0
    if not A or not B or width == 0:
        return zero_matrix(field, len(A), width)
    product = to_domain_matrix(field, A, len(B)).matmul(to_domain_matrix(field, B, width))
    return from_domain_matrix(field, product)


def mat_vec(field, A, vec):
    return tuple(field.dot(row, vec) for row in A)
