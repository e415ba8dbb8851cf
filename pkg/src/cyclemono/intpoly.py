"""Dense integer polynomials and cyclotomic factorisation.

Polynomials are immutable coefficient tuples, lowest degree first, with
the zero polynomial stored as the empty tuple.
"""

from __future__ import annotations

from functools import lru_cache


class NotDivisibleError(ArithmeticError):
    pass


class NotCyclotomicError(ValueError):
    pass


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class IntPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, int):
            coeffs = (coeffs,)
        self.coeffs = _strip(int(c) for c in coeffs)

    @classmethod
    def monomial(cls, k, c=1):
        return cls([0] * k + [c])

    @classmethod
    def t_pow_minus_one(cls, b):
        """t^b - 1."""
        return cls([-1] + [0] * (b - 1) + [1]) if b > 0 else cls()

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return self.lead == 1

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly(other)
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k):
        return pow_(self, k)

    def __floordiv__(self, other):
        return div_exact(self, _coerce(other))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "t" if k == 1 else f"t^{k}"
                body = var if mag == 1 else f"{mag}*{var}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def to_list(self):
        return list(self.coeffs)


def _coerce(x):
    return x if isinstance(x, IntPoly) else IntPoly(x)


def mul(a, b):
    if not a.coeffs or not b.coeffs:
        return IntPoly()
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                if y:
                    out[i + j] += x * y
    return IntPoly(out)


def divmod_(a, b):
    """Division with remainder in Z[t]; the divisor must have leading coefficient +-1."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    lb = b.lead
    if lb not in (1, -1):
        raise NotDivisibleError("divisor leading coefficient is not a unit")
    rem = list(a.coeffs)
    db = b.degree
    if len(rem) - 1 < db:
        return IntPoly(), a
    q = [0] * (len(rem) - db)
    bc = b.coeffs
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        f = c * lb
        q[k - db] = f
        for i, y in enumerate(bc):
            if y:
                rem[k - db + i] -= f * y
    return IntPoly(q), IntPoly(rem)


def div_exact(a, b):
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if b.lead not in (1, -1):
        # general exact division: every quotient coefficient must be integral
        rem = list(a.coeffs)
        db = b.degree
        q = [0] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            f, r = divmod(c, b.lead)
            if r:
                raise NotDivisibleError("not divisible")
            q[k - db] = f
            for i, y in enumerate(b.coeffs):
                rem[k - db + i] -= f * y
        if any(rem):
            raise NotDivisibleError("not divisible")
        return IntPoly(q)
    q, r = divmod_(a, b)
    if not r.is_zero():
        raise NotDivisibleError("not divisible")
    return q


def pow_(a, k):
    if k < 0:
        raise ValueError("negative exponent")
    result = IntPoly(1)
    base = a
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def divisors(m):
    small, large = [], []
    i = 1
    while i * i <= m:
        if m % i == 0:
            small.append(i)
            if i * i != m:
                large.append(m // i)
        i += 1
    return small + large[::-1]


@lru_cache(maxsize=None)
def totient(m):
    result, x, p = m, m, 2
    while p * p <= x:
        if x % p == 0:
            while x % p == 0:
                x //= p
            result -= result // p
        p += 1
    if x > 1:
        result -= result // x
    return result


@lru_cache(maxsize=None)
def cyclotomic(m):
    """The m-th cyclotomic polynomial, by dividing t^m - 1 by the lower ones."""
    if m < 1:
        raise ValueError("cyclotomic index must be positive")
    p = IntPoly.t_pow_minus_one(m)
    for e in divisors(m)[:-1]:
        p = div_exact(p, cyclotomic(e))
    return p


def _is_prime(q):
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


@lru_cache(maxsize=None)
def _root_of_unity_mod(m):
    """A prime q = 1 mod m and an element of exact order m in GF(q)."""
    q = m + 1
    while not _is_prime(q):
        q += m
    primes = [p for p in divisors(m) if p > 1 and _is_prime(p)]
    for g in range(2, q):
        w = pow(g, (q - 1) // m, q)
        if all(pow(w, m // p, q) != 1 for p in primes):
            return q, w
    return q, 1  # m == 1


def _maybe_divisible(coeffs, m):
    # exact necessary condition: Phi_m | p forces p(w) = 0 in GF(q)
    q, w = _root_of_unity_mod(m)
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * w + c) % q
    return acc == 0


@lru_cache(maxsize=None)
def _candidates_up_to(deg):
    # phi(m) >= sqrt(m/2), so phi(m) <= deg forces m <= 2*deg^2
    bound = max(2 * deg * deg, 2)
    return tuple(m for m in range(1, bound + 1) if totient(m) <= deg)


@lru_cache(maxsize=4096)
def _factor_coeffs(coeffs):
    p = IntPoly(coeffs)
    if p.is_zero() or not p.is_monic():
        raise NotCyclotomicError("not a product of cyclotomics (not monic)")
    exps = {}
    for m in _candidates_up_to(max(p.degree, 0)):
        if p.degree == 0:
            break
        if totient(m) > p.degree:
            continue
        while p.degree >= totient(m) and _maybe_divisible(p.coeffs, m):
            q, r = divmod_(p, cyclotomic(m))
            if not r.is_zero():
                break
            exps[m] = exps.get(m, 0) + 1
            p = q
    if p != IntPoly(1):
        raise NotCyclotomicError("not a product of cyclotomics")
    return tuple(sorted(exps.items()))


def factor_into_cyclotomics(p):
    """Exponents {m: e_m} with p = prod Phi_m^e_m; raises NotCyclotomicError otherwise."""
    return dict(_factor_coeffs(p.coeffs))


def product_of_cyclotomics(exps):
    out = IntPoly(1)
    for m, e in sorted(exps.items()):
        if e:
            out = out * pow_(cyclotomic(m), e)
    return out


def divisor_chain_decomposition(p):
    """The chain p_1, ..., p_l with p_l | ... | p_1, each with simple zeros, product p."""
    exps = factor_into_cyclotomics(p)
    top = max(exps.values(), default=0)
    return [product_of_cyclotomics({m: 1 for m, e in exps.items() if e >= i})
            for i in range(1, top + 1)]


def has_simple_zeros(p):
    try:
        exps = factor_into_cyclotomics(p)
    except NotCyclotomicError:
        return False
    return all(e <= 1 for e in exps.values())
