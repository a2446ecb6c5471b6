"""Exact integer polynomials as ascending coefficient lists.

``[c0, c1, ..., cd]`` represents c0 + c1 x + ... + cd x^d.  Coefficients are
Python ints so nothing overflows.
"""

from __future__ import annotations

from .errors import TheoryViolation


def trim(a):
    a = [int(c) for c in a]
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a or [0]


def degree(a) -> int:
    a = trim(a)
    return -1 if a == [0] else len(a) - 1


def mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def power(a, e: int):
    out = [1]
    base = trim(a)
    while e:
        if e & 1:
            out = mul(out, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return out


def product(polys):
    out = [1]
    for p in polys:
        out = mul(out, p)
    return out


def divmod_monic(a, b):
    """Quotient and remainder of a / b for a monic divisor b."""
    a, b = trim(a), trim(b)
    if b[-1] != 1:
        raise ValueError("divisor must be monic")
    db = len(b) - 1
    rem = list(a)
    if len(rem) - 1 < db:
        return [0], rem
    quot = [0] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        q = rem[i]
        quot[i - db] = q
        if q:
            for j in range(db + 1):
                rem[i - db + j] -= q * b[j]
    return trim(quot), trim(rem[:db] if db else [0])


def exact_div(a, b):
    """a / b, raising TheoryViolation if b does not divide a."""
    q, r = divmod_monic(a, b)
    if r != [0]:
        raise TheoryViolation(f"polynomial division left remainder {r}")
    return q


def evaluate(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def from_main(coeffs):
    """m(x) = x^s - sum c_j x^j  ->  ascending list."""
    return [-int(c) for c in coeffs] + [1]


def format_poly(a, var="x") -> str:
    """Human form, highest power first: ``x^4 - 22x^2 - 48x - 28``."""
    a = trim(a)
    terms = []
    for d in range(len(a) - 1, -1, -1):
        c = a[d]
        if c == 0:
            continue
        mag = abs(c)
        if d == 0:
            body = str(mag)
        else:
            mono = var if d == 1 else f"{var}^{d}"
            body = mono if mag == 1 else f"{mag}{mono}"
        if not terms:
            terms.append(body if c > 0 else f"-{body}")
        else:
            terms.append(("+ " if c > 0 else "- ") + body)
    return " ".join(terms) if terms else "0"
