"""Truncated multivariate Taylor arithmetic.

A :class:`Jet` holds the Taylor coefficients of a (tensor-valued) function
of ``nvars`` variables about a base point, truncated at total degree
``order``.  Arithmetic, elementary functions and tensor contractions act on
the coefficients, so a metric written with ordinary numpy calls yields its
exact partial derivatives when fed jet coordinates.

Coefficients live on the last axis of ``Jet.coef``; every leading axis is a
tensor axis.  Each jet also tracks the degree up to which its coefficients
are valid: differentiation lowers it by one, products take the minimum.

>>> x, y = variables([0.5, 2.0], order=3)
>>> f = np.sin(x) * y**2
>>> round(float(f.partials(1)[0]), 6)  # d/dx
3.51033
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

__all__ = [
    "JetSpace",
    "Jet",
    "variables",
    "constant",
    "compose",
    "stack",
    "jeinsum",
    "inv",
    "value",
]


class JetSpace:
    """Monomial bookkeeping for jets in ``nvars`` variables up to ``order``."""

    def __init__(self, nvars: int, order: int):
        self.nvars = nvars
        self.order = order
        monos = []
        for deg in range(order + 1):
            for combo in itertools.combinations_with_replacement(range(nvars), deg):
                alpha = [0] * nvars
                for i in combo:
                    alpha[i] += 1
                monos.append(tuple(alpha))
        self.monos = monos
        self.size = len(monos)
        self.index = {m: i for i, m in enumerate(monos)}
        self.degree = np.array([sum(m) for m in monos])
        self.factorial = np.array(
            [math.prod(math.factorial(a) for a in m) for m in monos], dtype=float
        )

        self._dmaps = []
        for i in range(nvars):
            src, dst, fac = [], [], []
            for j, m in enumerate(monos):
                if m[i] == 0:
                    continue
                lower = list(m)
                lower[i] -= 1
                src.append(j)
                dst.append(self.index[tuple(lower)])
                fac.append(float(m[i]))
            self._dmaps.append((np.array(src, int), np.array(dst, int), np.array(fac)))

        self._pairs = {}
        self._partial_maps = {}

    @staticmethod
    @lru_cache(maxsize=None)
    def get(nvars: int, order: int) -> "JetSpace":
        return JetSpace(nvars, order)

    def pairs(self, out_order: int):
        """Index pairs (a, b) whose product lands on a monomial of degree <= out_order."""
        if out_order not in self._pairs:
            ia, ib = [], []
            scatter = np.zeros((0, self.size))
            rows = []
            for a, ma in enumerate(self.monos):
                for b, mb in enumerate(self.monos):
                    if sum(ma) + sum(mb) > out_order:
                        continue
                    c = self.index[tuple(x + y for x, y in zip(ma, mb))]
                    ia.append(a)
                    ib.append(b)
                    rows.append(c)
            scatter = np.zeros((len(rows), self.size))
            scatter[np.arange(len(rows)), rows] = 1.0
            self._pairs[out_order] = (np.array(ia, int), np.array(ib, int), scatter)
        return self._pairs[out_order]

    def partial_map(self, k: int):
        """Monomial index and multinomial factor for each k-fold derivative index tuple."""
        if k not in self._partial_maps:
            shape = (self.nvars,) * k
            idx = np.zeros(shape, dtype=int)
            fac = np.zeros(shape)
            for tup in itertools.product(range(self.nvars), repeat=k):
                alpha = [0] * self.nvars
                for i in tup:
                    alpha[i] += 1
                j = self.index[tuple(alpha)]
                idx[tup] = j
                fac[tup] = self.factorial[j]
            self._partial_maps[k] = (idx, fac)
        return self._partial_maps[k]


class Jet:
    """Tensor of truncated Taylor series.  See module docstring."""

    __array_priority__ = 1000

    def __init__(self, coef, space: JetSpace, order: int | None = None):
        self.coef = np.asarray(coef, dtype=float)
        self.space = space
        self.order = space.order if order is None else order
        if self.coef.shape[-1] != space.size:
            raise ValueError("coefficient axis does not match jet space")

    # -- structure -----------------------------------------------------------
    @property
    def shape(self):
        return self.coef.shape[:-1]

    @property
    def ndim(self):
        return self.coef.ndim - 1

    def value(self):
        return self.coef[..., 0]

    def __repr__(self):
        return f"Jet(shape={self.shape}, nvars={self.space.nvars}, order={self.order})"

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        return Jet(self.coef[idx + (slice(None),)], self.space, self.order)

    def transpose(self, *axes):
        if len(axes) == 1 and isinstance(axes[0], (tuple, list)):
            axes = tuple(axes[0])
        return Jet(np.transpose(self.coef, tuple(axes) + (self.ndim,)), self.space, self.order)

    def sum(self, axis=None):
        if axis is None:
            axis = tuple(range(self.ndim))
        return Jet(self.coef.sum(axis=axis), self.space, self.order)

    def _truncate(self, order):
        coef = self.coef
        if order < self.space.order:
            coef = coef.copy()
            coef[..., self.space.degree > order] = 0.0
        return Jet(coef, self.space, order)

    # -- calculus ------------------------------------------------------------
    def d(self, i: int) -> "Jet":
        """Partial derivative in variable ``i``; valid order drops by one."""
        if self.order < 1:
            raise ValueError("cannot differentiate an order-0 jet")
        src, dst, fac = self.space._dmaps[i]
        coef = np.zeros_like(self.coef)
        coef[..., dst] = self.coef[..., src] * fac
        out = Jet(coef, self.space, self.order - 1)
        return out._truncate(self.order - 1)

    def grad(self) -> "Jet":
        """Gradient with the derivative index prepended."""
        parts = [self.d(i).coef for i in range(self.space.nvars)]
        return Jet(np.stack(parts), self.space, self.order - 1)

    def partials(self, k: int) -> np.ndarray:
        """All k-th partial derivatives at the base point, derivative axes last."""
        if k > self.order:
            raise ValueError(f"jet of order {self.order} has no {k}-th derivatives")
        if k == 0:
            return self.value().copy()
        idx, fac = self.space.partial_map(k)
        return self.coef[..., idx] * fac

    def derivatives(self) -> np.ndarray:
        """Univariate jets only: array [f, f', f'', ...] with the derivative axis first."""
        if self.space.nvars != 1:
            raise ValueError("derivatives() is for univariate jets")
        out = self.coef[..., : self.order + 1] * self.space.factorial[: self.order + 1]
        return np.moveaxis(out, -1, 0)

    # -- arithmetic ----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Jet):
            if other.space is not self.space:
                raise ValueError("jets from different spaces")
            return other
        return constant(other, self.space, self.order)

    def __add__(self, other):
        other = self._lift(other)
        order = min(self.order, other.order)
        return Jet(self.coef + other.coef, self.space, order)._truncate(order)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        order = min(self.order, other.order)
        return Jet(self.coef - other.coef, self.space, order)._truncate(order)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Jet(-self.coef, self.space, self.order)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            c = np.asarray(other, dtype=float)
            return Jet(self.coef * c[..., None], self.space, self.order)
        return _mul(self, self._lift(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            c = np.asarray(other, dtype=float)
            return Jet(self.coef / c[..., None], self.space, self.order)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, Jet):
            raise TypeError("jet exponents are not supported")
        if isinstance(p, (int, np.integer)) and 0 <= p <= 4:
            out = constant(np.ones(self.shape), self.space, self.order)
            for _ in range(int(p)):
                out = out * self
            return out
        return _power(self, float(p))

    def reciprocal(self):
        return _power(self, -1.0)

    def __array_ufunc__(self, ufunc, method, *inputs, **kwargs):
        if method != "__call__" or kwargs.get("out") is not None:
            return NotImplemented
        if ufunc in _BINARY:
            a, b = inputs
            return _BINARY[ufunc](a, b)
        if ufunc in _UNARY:
            (a,) = inputs
            return _UNARY[ufunc](a)
        return NotImplemented


def constant(c, space: JetSpace, order: int | None = None) -> Jet:
    c = np.asarray(c, dtype=float)
    coef = np.zeros(c.shape + (space.size,))
    coef[..., 0] = c
    return Jet(coef, space, order)


def variables(x0, order: int) -> list[Jet]:
    """Coordinate jets x_i = x0_i + t_i about the point ``x0``."""
    x0 = np.asarray(x0, dtype=float).ravel()
    space = JetSpace.get(len(x0), order)
    out = []
    for i, xi in enumerate(x0):
        coef = np.zeros(space.size)
        coef[0] = xi
        if order >= 1:
            e = [0] * len(x0)
            e[i] = 1
            coef[space.index[tuple(e)]] = 1.0
        out.append(Jet(coef, space))
    return out


def value(x):
    """Base-point value of a jet, or the argument itself for plain numbers."""
    return x.value() if isinstance(x, Jet) else x


def _mul(a: Jet, b: Jet) -> Jet:
    order = min(a.order, b.order)
    ia, ib, scatter = a.space.pairs(order)
    prod = a.coef[..., ia] * b.coef[..., ib]
    return Jet(prod @ scatter, a.space, order)


def jeinsum(subscripts: str, a, b) -> Jet:
    """Two-operand einsum over tensor axes with jet multiplication.

    Either operand may be a plain array (treated as a constant).  Subscripts
    must be lowercase; ``Q`` is reserved for the coefficient axis.
    """
    if not isinstance(a, Jet) and not isinstance(b, Jet):
        raise TypeError("at least one operand must be a Jet")
    lhs, out = subscripts.replace(" ", "").split("->")
    sa, sb = lhs.split(",")
    if not isinstance(a, Jet):
        coef = np.einsum(f"{sa},{sb}Q->{out}Q", np.asarray(a, float), b.coef)
        return Jet(coef, b.space, b.order)
    if not isinstance(b, Jet):
        coef = np.einsum(f"{sa}Q,{sb}->{out}Q", a.coef, np.asarray(b, float))
        return Jet(coef, a.space, a.order)
    order = min(a.order, b.order)
    ia, ib, scatter = a.space.pairs(order)
    prod = np.einsum(f"{sa}Q,{sb}Q->{out}Q", a.coef[..., ia], b.coef[..., ib])
    return Jet(prod @ scatter, a.space, order)


def compose(a: Jet, derivs) -> Jet:
    """Evaluate a univariate function on a jet from its derivatives at ``a.value()``.

    ``derivs[m]`` is the m-th derivative of the outer function at the base
    value (broadcast against ``a.shape``); at least ``a.order + 1`` entries.
    """
    order = a.order
    nil = a - a.value()
    terms = [np.asarray(derivs[m], float) / math.factorial(m) for m in range(order + 1)]
    out = constant(np.broadcast_to(terms[order], a.shape), a.space, order)
    for m in range(order - 1, -1, -1):
        out = out * nil + terms[m]
    return out


def stack(rows, like: Jet | None = None) -> Jet:
    """Assemble a nested list of jets and plain numbers into one tensor jet."""
    shape = _nested_shape(rows)
    flat = list(_flatten(rows))
    if like is None:
        like = next((x for x in flat if isinstance(x, Jet)), None)
    if like is None:
        raise ValueError("stack needs at least one jet or a 'like' template")
    order = min([x.order for x in flat if isinstance(x, Jet)] + [like.order])
    coefs = []
    for x in flat:
        if isinstance(x, Jet):
            coefs.append(x.coef)
        else:
            coefs.append(constant(x, like.space).coef)
    coef = np.stack(coefs).reshape(shape + (like.space.size,))
    return Jet(coef, like.space, order)._truncate(order)


def _nested_shape(rows):
    if isinstance(rows, (list, tuple)):
        return (len(rows),) + _nested_shape(rows[0])
    return ()


def _flatten(rows):
    if isinstance(rows, (list, tuple)):
        for r in rows:
            yield from _flatten(r)
    else:
        yield rows


def inv(g: Jet) -> Jet:
    """Inverse of a square-matrix jet (last two tensor axes) by Newton doubling."""
    g0inv = np.linalg.inv(g.value())
    x = constant(g0inv, g.space, g.order)
    correct = 0
    while correct < g.order:
        gx = jeinsum("ij,jk->ik", g, x)
        x = 2.0 * x - jeinsum("ij,jk->ik", x, gx)
        correct = 2 * correct + 1
    return x


# -- elementary functions ------------------------------------------------------

def _seq_cyclic(values, order):
    return [values[m % len(values)] for m in range(order + 1)]


def _sin(a):
    v = a.value()
    s, c = np.sin(v), np.cos(v)
    return compose(a, _seq_cyclic([s, c, -s, -c], a.order))


def _cos(a):
    v = a.value()
    s, c = np.sin(v), np.cos(v)
    return compose(a, _seq_cyclic([c, -s, -c, s], a.order))


def _sinh(a):
    v = a.value()
    return compose(a, _seq_cyclic([np.sinh(v), np.cosh(v)], a.order))


def _cosh(a):
    v = a.value()
    return compose(a, _seq_cyclic([np.cosh(v), np.sinh(v)], a.order))


def _exp(a):
    e = np.exp(a.value())
    return compose(a, [e] * (a.order + 1))


def _log(a):
    v = a.value()
    seq = [np.log(v)]
    for m in range(1, a.order + 1):
        seq.append((-1) ** (m - 1) * math.factorial(m - 1) * v ** (-m))
    return compose(a, seq)


def _power(a, p):
    v = a.value()
    seq = []
    falling = 1.0
    for m in range(a.order + 1):
        seq.append(falling * v ** (p - m))
        falling *= p - m
    return compose(a, seq)


def _as_jet_pair(x, y):
    if isinstance(x, Jet):
        return x, x._lift(y)
    return y._lift(x), y


def _ufunc_power(a, b):
    if isinstance(b, Jet):
        raise TypeError("jet exponents are not supported")
    return a ** b


_BINARY = {
    np.add: lambda a, b: a + b if isinstance(a, Jet) else b + a,
    np.subtract: lambda a, b: a - b if isinstance(a, Jet) else b.__rsub__(a),
    np.multiply: lambda a, b: a * b if isinstance(a, Jet) else b * a,
    np.true_divide: lambda a, b: a / b if isinstance(a, Jet) else b.__rtruediv__(a),
    np.power: _ufunc_power,
}

_UNARY = {
    np.negative: lambda a: -a,
    np.positive: lambda a: a,
    np.sin: _sin,
    np.cos: _cos,
    np.sinh: _sinh,
    np.cosh: _cosh,
    np.exp: _exp,
    np.log: _log,
    np.sqrt: lambda a: _power(a, 0.5),
    np.square: lambda a: a * a,
    np.reciprocal: lambda a: _power(a, -1.0),
}
