"""Dense exact tensors over Q(sqrt 3) and an exact contraction engine.

A Tensor of rank r in dimension d holds d**r components, each an element
a + b*sqrt(3) of Q(sqrt 3).  Storage is three pieces: two integer numpy
arrays (the rational and sqrt(3) numerators) plus one shared positive
denominator, kept gcd-reduced.  All contractions run through numpy
integer einsum, so results are exact and independent of summation order;
when a conservative magnitude bound says int64 could overflow, the same
code runs on object arrays of Python ints.

Products of several sqrt(3)-split operands are recovered from integer
einsum evaluations of (A_k + x*B_k) at small integer points x followed by
exact polynomial interpolation (t**2 = 3 folds the coefficients back to
two parts).  This keeps an n-operand contraction at n+1 einsum calls
instead of 2**n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .scalar import Scalar

_INT64_LIMIT = 2 ** 62

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


class ShapeError(ValueError):
    """Operands have incompatible dim/rank for the requested operation."""


class ContractionSpecError(ValueError):
    """A contraction specification does not match its operands."""


# ---------------------------------------------------------------------------
# interpolation tables: recover polynomial coefficients from evaluations at
# integer points 0, 1, -1, 2, -2, ...  For n operands the part-product is a
# degree-n polynomial in t (t = sqrt 3), needing n+1 evaluations.
# ---------------------------------------------------------------------------

_POINTS = [0, 1, -1, 2, -2, 3, -3, 4]


def _interp_table(n: int):
    pts = _POINTS[: n + 1]
    size = n + 1
    v = [[Fraction(p) ** j for j in range(size)] for p in pts]
    # invert the Vandermonde exactly
    inv = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    m = [row[:] for row in v]
    for col in range(size):
        piv = next(r for r in range(col, size) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        f = m[col][col]
        m[col] = [x / f for x in m[col]]
        inv[col] = [x / f for x in inv[col]]
        for r in range(size):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    # c_j = sum_i inv[j][i] * P_i ; scale to integers
    den = 1
    for row in inv:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [[int(x * den) for x in row] for row in inv]
    return ints, den, pts


_INTERP = {n: _interp_table(n) for n in range(1, 7)}

# conservative multiplier covering interpolation combinations and the
# 3**k fold-back, per operand count
_SAFETY = {
    n: (max(sum(abs(k) for k in row) for row in tab[0]) // tab[1] + 1)
    * (max(abs(p) for p in tab[2]) + 1) ** n
    * (3 ** (n // 2 + 1))
    * (n + 2)
    for n, tab in _INTERP.items()
}


def _as_int_array(arr, use_object: bool):
    if use_object:
        # astype(object) boxes integers as Python ints, so arithmetic is exact
        return arr if arr.dtype == object else arr.astype(object)
    return arr if arr.dtype == np.int64 else arr.astype(np.int64)


def _max_abs(arr) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max((abs(int(x)) for x in arr.flat), default=0)
    return int(np.abs(arr).max())


def _gcd_reduce_arrays(rat, irr, den: int):
    if den <= 0:
        raise ValueError("denominator must be positive")
    if rat.dtype == object or irr.dtype == object:
        g = den
        for x in rat.flat:
            g = math.gcd(g, int(x))
            if g == 1:
                break
        if g > 1:
            for x in irr.flat:
                g = math.gcd(g, int(x))
                if g == 1:
                    break
    else:
        g = math.gcd(
            int(np.gcd.reduce(np.abs(rat), axis=None)),
            int(np.gcd.reduce(np.abs(irr), axis=None)),
        )
        g = math.gcd(g, den)
    if g > 1:
        rat = rat // g
        irr = irr // g
        den //= g
    return rat, irr, den


class Tensor:
    """Immutable dense tensor of Q(sqrt 3) values, rank <= 8, dim 2..6.

    A rank-0 Tensor is a single scalar, so scalars and tensors unify.
    Components are exposed as :class:`Scalar` through :meth:`item`; the
    integer-decomposed storage is an implementation detail.
    """

    __slots__ = ("dim", "rank", "_rat", "_irr", "_den", "_max", "_evals")

    MAX_RANK = 8

    def __init__(self, dim: int, rat, irr, den: int = 1, _reduce: bool = True):
        if not 2 <= dim <= 6:
            raise ShapeError(f"dim must be in 2..6, got {dim}")
        rat = np.asarray(rat)
        irr = np.asarray(irr)
        if rat.shape != irr.shape:
            raise ShapeError("rational/irrational parts have different shapes")
        if rat.ndim > self.MAX_RANK:
            raise ShapeError(f"rank {rat.ndim} exceeds maximum {self.MAX_RANK}")
        if any(s != dim for s in rat.shape):
            raise ShapeError(f"array shape {rat.shape} does not match dim {dim}")
        if _reduce:
            rat, irr, den = _gcd_reduce_arrays(rat, irr, int(den))
            m = max(_max_abs(rat), _max_abs(irr))
            if rat.dtype == object and m < _INT64_LIMIT:
                rat = rat.astype(np.int64)
                irr = irr.astype(np.int64)
        else:
            m = max(_max_abs(rat), _max_abs(irr))
        for arr in (rat, irr):
            arr.setflags(write=False)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "rank", rat.ndim)
        object.__setattr__(self, "_rat", rat)
        object.__setattr__(self, "_irr", irr)
        object.__setattr__(self, "_den", int(den))
        object.__setattr__(self, "_max", m)
        object.__setattr__(self, "_evals", {})

    def __setattr__(self, name, value):
        raise AttributeError("Tensor is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, dim: int, rank: int) -> "Tensor":
        shape = (dim,) * rank
        return cls(dim, np.zeros(shape, np.int64), np.zeros(shape, np.int64), 1)

    @classmethod
    def identity(cls, dim: int) -> "Tensor":
        """The metric g in an orthonormal frame: the identity matrix."""
        return cls(dim, np.eye(dim, dtype=np.int64), np.zeros((dim, dim), np.int64), 1)

    @classmethod
    def from_scalar(cls, dim: int, value) -> "Tensor":
        s = value if isinstance(value, Scalar) else Scalar(value)
        den = s.rat.denominator * s.irr.denominator // math.gcd(
            s.rat.denominator, s.irr.denominator
        )
        return cls(
            dim,
            np.array(int(s.rat * den)),
            np.array(int(s.irr * den)),
            den,
        )

    @classmethod
    def from_components(cls, dim: int, rank: int, entries: dict) -> "Tensor":
        """Build from {index-tuple (0-based): Scalar-like} with zeros elsewhere."""
        den = 1
        vals = {}
        for idx, v in entries.items():
            s = v if isinstance(v, Scalar) else Scalar(v)
            vals[tuple(idx)] = s
            for q in (s.rat.denominator, s.irr.denominator):
                den = den * q // math.gcd(den, q)
        shape = (dim,) * rank
        big = den >= _INT64_LIMIT or any(
            max(abs(s.rat * den), abs(s.irr * den)) >= _INT64_LIMIT
            for s in vals.values()
        )
        dtype = object if big else np.int64
        rat = np.zeros(shape, dtype)
        irr = np.zeros(shape, dtype)
        for idx, s in vals.items():
            if len(idx) != rank or any(not 0 <= i < dim for i in idx):
                raise ShapeError(f"index {idx} out of range for dim {dim} rank {rank}")
            rat[idx] = int(s.rat * den)
            irr[idx] = int(s.irr * den)
        return cls(dim, rat, irr, den)

    # -- component access ----------------------------------------------------

    def item(self, *idx) -> Scalar:
        if len(idx) == 1 and isinstance(idx[0], (tuple, list)):
            idx = tuple(idx[0])
        if len(idx) != self.rank:
            raise ShapeError(f"expected {self.rank} indices, got {len(idx)}")
        return Scalar(
            Fraction(int(self._rat[idx]), self._den),
            Fraction(int(self._irr[idx]), self._den),
        )

    def __getitem__(self, idx) -> Scalar:
        return self.item(idx if isinstance(idx, tuple) else (idx,))

    def to_scalar(self) -> Scalar:
        if self.rank != 0:
            raise ShapeError("to_scalar requires a rank-0 tensor")
        return self.item()

    def nonzero_indices(self):
        mask = (self._rat != 0) | (self._irr != 0)
        return [tuple(int(i) for i in idx) for idx in np.argwhere(mask)]

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        if self._rat.dtype == object:
            return all(int(x) == 0 for x in self._rat.flat) and all(
                int(x) == 0 for x in self._irr.flat
            )
        return not self._rat.any() and not self._irr.any()

    def equals(self, other: "Tensor") -> bool:
        if not isinstance(other, Tensor):
            raise TypeError("can only compare Tensor with Tensor")
        if self.dim != other.dim or self.rank != other.rank:
            raise ShapeError(
                f"shape mismatch: dim {self.dim} rank {self.rank} vs "
                f"dim {other.dim} rank {other.rank}"
            )
        # storage is canonical (gcd-reduced, positive den), so compare directly
        return (
            self._den == other._den
            and bool(np.array_equal(self._rat, other._rat))
            and bool(np.array_equal(self._irr, other._irr))
        )

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        return hash((self.dim, self.rank, self._den, self._rat.tobytes() if self._rat.dtype != object else tuple(self._rat.flat)))

    # -- linear operations -----------------------------------------------------

    def __add__(self, other: "Tensor") -> "Tensor":
        if not isinstance(other, Tensor):
            return NotImplemented
        if self.dim != other.dim or self.rank != other.rank:
            raise ShapeError("cannot add tensors of different shape")
        l = self._den * other._den // math.gcd(self._den, other._den)
        f1, f2 = l // self._den, l // other._den
        big = (self._max * f1 + other._max * f2) >= _INT64_LIMIT
        a1, b1 = self._parts(big)
        a2, b2 = other._parts(big)
        return Tensor(self.dim, a1 * f1 + a2 * f2, b1 * f1 + b2 * f2, l)

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + (-other)

    def __neg__(self) -> "Tensor":
        return Tensor(self.dim, -self._rat, -self._irr, self._den, _reduce=False)

    def scale(self, value) -> "Tensor":
        """Multiply every component by a Scalar/Fraction/int, exactly."""
        s = value if isinstance(value, Scalar) else Scalar(value)
        pd = s.rat.denominator * s.irr.denominator // math.gcd(
            s.rat.denominator, s.irr.denominator
        )
        x, y = int(s.rat * pd), int(s.irr * pd)
        big = self._max * (abs(x) + 3 * abs(y)) >= _INT64_LIMIT
        a, b = self._parts(big)
        return Tensor(self.dim, a * x + 3 * (b * y), a * y + b * x, self._den * pd)

    def __mul__(self, value):
        return self.scale(value)

    __rmul__ = __mul__

    # -- internals --------------------------------------------------------------

    def _parts(self, use_object: bool):
        return (
            _as_int_array(self._rat, use_object),
            _as_int_array(self._irr, use_object),
        )

    def _eval_at(self, x: int, use_object: bool):
        key = (x, use_object)
        cached = self._evals.get(key)
        if cached is None:
            a, b = self._parts(use_object)
            cached = a if x == 0 else a + x * b
            cached.setflags(write=False)
            self._evals[key] = cached
        return cached

    def transpose(self, axes) -> "Tensor":
        """Reorder axes; exact and cheap (no renormalization needed)."""
        axes = tuple(axes)
        if sorted(axes) != list(range(self.rank)):
            raise ShapeError(f"bad axes {axes} for rank {self.rank}")
        return Tensor(
            self.dim,
            np.transpose(self._rat, axes),
            np.transpose(self._irr, axes),
            self._den,
            _reduce=False,
        )

    # -- wire format: sparse 1-based entries with scalar-text values ---------

    def to_entries(self) -> list:
        out = []
        for idx in self.nonzero_indices():
            out.append(
                {"idx": [i + 1 for i in idx], "val": self.item(idx).format()}
            )
        return out

    def to_json(self) -> dict:
        return {"dim": self.dim, "rank": self.rank, "entries": self.to_entries()}

    @classmethod
    def from_json(cls, data: dict) -> "Tensor":
        return cls.from_entries(data["dim"], data["rank"], data["entries"])

    @classmethod
    def from_entries(cls, dim: int, rank: int, entries: Iterable) -> "Tensor":
        """Inverse of :meth:`to_entries`; omitted entries are zero,
        duplicate indices are an error."""
        comps: dict = {}
        for pos, e in enumerate(entries):
            idx = tuple(int(i) - 1 for i in e["idx"])
            if any(not 0 <= i < dim for i in idx) or len(idx) != rank:
                raise ShapeError(f"entries[{pos}]: index {e['idx']} out of range")
            if idx in comps:
                raise ShapeError(f"entries[{pos}]: duplicate index {e['idx']}")
            comps[idx] = Scalar.parse(e["val"])
        return cls.from_components(dim, rank, comps)

    def __repr__(self):
        return f"Tensor(dim={self.dim}, rank={self.rank})"


def tensors_equal(a: Tensor, b: Tensor) -> bool:
    return a.equals(b)


def is_zero(a: Tensor) -> bool:
    return a.is_zero()


# ---------------------------------------------------------------------------
# exact einsum
# ---------------------------------------------------------------------------

_PATH_CACHE: dict = {}


def _einsum_path_for(subscripts: str, shapes: tuple):
    key = (subscripts, shapes)
    path = _PATH_CACHE.get(key)
    if path is None:
        dummies = [np.zeros(s, np.int8) for s in shapes]
        path = np.einsum_path(subscripts, *dummies, optimize="optimal")[0]
        _PATH_CACHE[key] = path
    return path


def raw_einsum(subscripts: str, parts: Sequence, dim: int, n_sum_letters: int):
    """Exact einsum on integer-part operands.

    ``parts`` is a sequence of (rat_array, irr_array, max_abs) triples.
    Returns (rat, irr, max_bound) integer arrays for the contraction of
    the sqrt(3)-split operands, with NO denominator handling.
    """
    n = len(parts)
    terms = dim ** n_sum_letters
    bound = _SAFETY[n] * terms
    for _, _, m in parts:
        bound *= max(m, 1)
    use_object = bound >= _INT64_LIMIT
    shapes = tuple(p[0].shape for p in parts)
    path = _einsum_path_for(subscripts, shapes)

    if n == 1:
        a, b, _ = parts[0]
        a = _as_int_array(a, use_object)
        b = _as_int_array(b, use_object)
        rat = np.einsum(subscripts, a, optimize=path)
        irr = np.einsum(subscripts, b, optimize=path)
        return np.asarray(rat), np.asarray(irr), bound

    ints, den, pts = _INTERP[n]
    evals = []
    for x in pts:
        ops = []
        for a, b, _ in parts:
            a = _as_int_array(a, use_object)
            b = _as_int_array(b, use_object)
            ops.append(a if x == 0 else a + x * b)
        evals.append(np.asarray(np.einsum(subscripts, *ops, optimize=path)))
    coeffs = []
    for j in range(n + 1):
        acc = None
        for i, p in enumerate(evals):
            k = ints[j][i]
            if k == 0:
                continue
            acc = k * p if acc is None else acc + k * p
        # 0-d results decay to Python scalars under arithmetic; rewrap
        coeffs.append(np.asarray(acc // den if den != 1 else acc))
    rat = coeffs[0].copy()
    irr = coeffs[1].copy()
    p3 = 3
    for j in range(2, n + 1):
        if j % 2 == 0:
            rat = np.asarray(rat + p3 * coeffs[j])
        else:
            irr = np.asarray(irr + p3 * coeffs[j])
            p3 *= 3
    return np.asarray(rat), np.asarray(irr), bound


def ein(subscripts: str, *tensors: Tensor) -> Tensor:
    """Exact einsum over Tensors; subscripts as in numpy.einsum.

    Repeated labels inside one input token take diagonals as usual;
    output labels must be distinct and appear in some input.
    """
    if "->" not in subscripts:
        raise ContractionSpecError("explicit '->' output required")
    lhs, out = subscripts.split("->")
    tokens = lhs.split(",")
    if len(tokens) != len(tensors):
        raise ContractionSpecError(
            f"{len(tokens)} subscript groups for {len(tensors)} operands"
        )
    dim = tensors[0].dim
    for tok, t in zip(tokens, tensors):
        if t.dim != dim:
            raise ShapeError("operands have different dims")
        if len(tok) != t.rank:
            raise ContractionSpecError(
                f"subscript {tok!r} does not match operand rank {t.rank}"
            )
    letters = set("".join(tokens))
    if len(set(out)) != len(out) or not set(out) <= letters:
        raise ContractionSpecError(f"bad output subscript {out!r}")
    n_sum = len(letters - set(out))
    parts = [(t._rat, t._irr, t._max) for t in tensors]
    rat, irr, _ = raw_einsum(subscripts, parts, dim, n_sum)
    den = 1
    for t in tensors:
        den *= t._den
    return Tensor(dim, rat, irr, den)


# ---------------------------------------------------------------------------
# ContractionSpec: the declarative contraction surface
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContractionSpec:
    """Einstein-summation plan over one or more operands.

    ``pairs`` binds operand slots in twos, ``(op, slot)`` both 0-based;
    within-operand pairs trace.  ``free`` lists the surviving slots in
    output order.  Every operand slot must appear exactly once.
    """

    pairs: tuple
    free: tuple

    def __init__(self, pairs: Iterable, free: Iterable):
        object.__setattr__(
            self,
            "pairs",
            tuple((tuple(p[0]), tuple(p[1])) for p in pairs),
        )
        object.__setattr__(self, "free", tuple(tuple(f) for f in free))

    def validate(self, operands: Sequence[Tensor]):
        seen = set()
        for (a, b) in self.pairs:
            for op, slot in (a, b):
                if not (0 <= op < len(operands)) or not (
                    0 <= slot < operands[op].rank
                ):
                    raise ContractionSpecError(f"slot {(op, slot)} out of range")
                if (op, slot) in seen:
                    raise ContractionSpecError(f"slot {(op, slot)} used twice")
                seen.add((op, slot))
        for op, slot in self.free:
            if not (0 <= op < len(operands)) or not (0 <= slot < operands[op].rank):
                raise ContractionSpecError(f"free slot {(op, slot)} out of range")
            if (op, slot) in seen:
                raise ContractionSpecError(f"slot {(op, slot)} used twice")
            seen.add((op, slot))
        for op, t in enumerate(operands):
            for slot in range(t.rank):
                if (op, slot) not in seen:
                    raise ContractionSpecError(f"slot {(op, slot)} unassigned")


def contract(operands: Sequence[Tensor], spec: ContractionSpec) -> Tensor:
    """Contract operands per spec; exact, order-independent."""
    operands = list(operands)
    if not operands:
        raise ContractionSpecError("no operands")
    spec.validate(operands)
    letter_of = {}
    counter = 0
    for (a, b) in spec.pairs:
        letter_of[a] = letter_of[b] = _LETTERS[counter]
        counter += 1
    out = []
    for f in spec.free:
        letter_of[f] = _LETTERS[counter]
        out.append(_LETTERS[counter])
        counter += 1
    tokens = [
        "".join(letter_of[(op, slot)] for slot in range(t.rank))
        for op, t in enumerate(operands)
    ]
    subscripts = ",".join(tokens) + "->" + "".join(out)
    return ein(subscripts, *operands)


def tensor_product(a: Tensor, b: Tensor) -> Tensor:
    """Outer product; rank adds, components multiply."""
    if a.dim != b.dim:
        raise ShapeError(f"dim mismatch: {a.dim} vs {b.dim}")
    ta = _LETTERS[: a.rank]
    tb = _LETTERS[a.rank : a.rank + b.rank]
    return ein(f"{ta},{tb}->{ta}{tb}", a, b)
