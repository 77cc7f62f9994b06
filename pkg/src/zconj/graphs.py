"""Finite fields of square order and the Paley and Peisert graphs.

Fields F_q with q = p^(2t), p = 3 mod 4, are built deterministically:
the modulus is the lexicographically smallest monic irreducible
polynomial whose canonical root is primitive, so adjacency matrices
are bit-reproducible.  Elements are indexed 0..q-1 by their
coefficient vectors read as base-p digits (constant digit lowest).

For q = p**2 the quadratic-residue (Paley) and fourth-power-union
(Peisert) graphs share the spectrum {k, r, s}, and the scaled spectral
projectors E_i are integer matrices with E_i^2 = p^2 E_i whose Smith
groups the lemma checker compares against the closed-form multiset
(one 1, (p+1)^2/4 - 2 copies of p, (p-1)^2/4 copies of p^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .matrix import IntMatrix
from .modular import prime_factors, scaled_idempotent_invariants


class NotThreeModFour(ValueError):
    """The construction needs a prime p with p = 3 mod 4."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# polynomials over Z/p: tuples of coefficients, constant first,
# trailing zeros trimmed


def _poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mul_mod(a, b, modulus, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    # reduce by the monic modulus
    d = len(modulus) - 1
    for i in range(len(out) - 1, d - 1, -1):
        f = out[i]
        if not f:
            continue
        out[i] = 0
        for j in range(d):
            out[i - d + j] = (out[i - d + j] - f * modulus[j]) % p
    return _poly_trim(out)


def _poly_pow_mod(base, e, modulus, p):
    result = (1,)
    acc = _poly_trim(base)
    while e:
        if e & 1:
            result = _poly_mul_mod(result, acc, modulus, p)
        acc = _poly_mul_mod(acc, acc, modulus, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a = list(_poly_trim(a))
    b = list(_poly_trim(b))
    while b:
        # a mod b with b made monic
        inv = pow(b[-1], -1, p)
        b_monic = [(v * inv) % p for v in b]
        r = list(a)
        while len(r) >= len(b_monic) and any(r):
            if r[-1] == 0:
                r.pop()
                continue
            f = r[-1]
            off = len(r) - len(b_monic)
            for j in range(len(b_monic)):
                r[off + j] = (r[off + j] - f * b_monic[j]) % p
            r.pop()
        a, b = b, list(_poly_trim(r))
    return _poly_trim(a)


def _is_irreducible(modulus, p: int) -> bool:
    """Irreducibility of a monic polynomial over Z/p (Rabin's test)."""
    d = len(modulus) - 1
    if d < 1:
        return False
    x = (0, 1)
    # x^(p^d) = x mod f
    acc = x
    for _ in range(d):
        acc = _poly_pow_mod(acc, p, modulus, p)
    if acc != x:
        return False
    for r in prime_factors(d):
        acc = x
        for _ in range(d // r):
            acc = _poly_pow_mod(acc, p, modulus, p)
        diff = list(acc) + [0] * max(0, 2 - len(acc))
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(diff, modulus, p)
        if len(g) > 1:
            return False
    return True


def _root_is_primitive(modulus, p: int, q: int) -> bool:
    x = (0, 1)
    if _poly_pow_mod(x, q - 1, modulus, p) != (1,):
        return False
    for r in prime_factors(q - 1):
        if _poly_pow_mod(x, (q - 1) // r, modulus, p) == (1,):
            return False
    return True


class FieldSpec:
    """F_q with q = p^(2t), deterministic modulus, primitive root tables.

    Elements are integer indices: index = sum of c_i p^i over the
    coefficient vector (c_0, ..., c_{2t-1}).  exp[i] is the index of
    beta^i and log[idx] recovers i; beta is the canonical root x of
    the modulus.
    """

    def __init__(self, p: int, t: int, modulus):
        self.p = p
        self.t = t
        self.degree = 2 * t
        self.q = p ** self.degree
        self.modulus = tuple(modulus)
        self.beta = p  # index of the canonical root x
        exp = []
        cur = (1,)
        for _ in range(self.q - 1):
            exp.append(self._index(cur))
            cur = _poly_mul_mod(cur, (0, 1), self.modulus, p)
        assert self._index(cur) == 1, "root is not primitive"
        self.exp = exp
        self.log = {idx: i for i, idx in enumerate(exp)}
        assert len(self.log) == self.q - 1

    def _index(self, coeffs) -> int:
        total = 0
        for i, c in enumerate(coeffs):
            total += c * self.p ** i
        return total

    def coeffs(self, idx: int):
        out = []
        for _ in range(self.degree):
            out.append(idx % self.p)
            idx //= self.p
        return tuple(out)

    def sub(self, a: int, b: int) -> int:
        ca = self.coeffs(a)
        cb = self.coeffs(b)
        return self._index(tuple((x - y) % self.p for x, y in zip(ca, cb)))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def power(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            return 0
        return self.exp[(self.log[a] * e) % (self.q - 1)]


def field_build(p: int, degree: int) -> FieldSpec:
    """Deterministic field of order p^degree for prime p = 3 mod 4.

    Scans monic polynomials in lexicographic order (high-degree
    coefficients compared first) and takes the first irreducible one
    whose canonical root generates the multiplicative group.
    """
    if not _is_prime(p):
        raise ValueError("p must be prime, got %d" % p)
    if p % 4 != 3:
        raise NotThreeModFour("p must be 3 mod 4, got %d" % p)
    if degree % 2 or degree <= 0:
        raise ValueError("degree must be a positive even integer")
    q = p ** degree
    # enumerate non-leading coefficients (a_{d-1}, ..., a_0) in lex order
    for code in range(q):
        rest = []
        v = code
        for _ in range(degree):
            rest.append(v % p)
            v //= p
        # rest[0] is a_{d-1} (compared first), rest[-1] is a_0
        coeffs = tuple(reversed(rest)) + (1,)
        if not _is_irreducible(coeffs, p):
            continue
        if not _root_is_primitive(coeffs, p, q):
            continue
        return FieldSpec(p, degree // 2, coeffs)
    raise AssertionError("no primitive polynomial found")


def quarter_cosets(field: FieldSpec):
    """The fourth-power subgroup U and its cosets bU, b^2 U, b^3 U.

    Lists of element indices, each sorted ascending; together they
    partition the nonzero elements.
    """
    q = field.q
    assert (q - 1) % 4 == 0
    cosets = [[], [], [], []]
    for i, idx in enumerate(field.exp):
        cosets[i % 4].append(idx)
    out = [sorted(c) for c in cosets]
    assert all(len(c) == (q - 1) // 4 for c in out)
    return out


def _difference_graph(field: FieldSpec, connection) -> IntMatrix:
    conn = set(connection)
    assert 0 not in conn
    q = field.q
    rows = []
    for i in range(q):
        row = [0] * q
        for j in range(q):
            if i != j and field.sub(i, j) in conn:
                row[j] = 1
        rows.append(row)
    m = IntMatrix(rows)
    assert m.transpose() == m, "connection set must be symmetric"
    deg = len(conn)
    assert all(sum(r) == deg for r in m.rows)
    return m


def paley_adjacency(field: FieldSpec) -> IntMatrix:
    """Adjacency of the graph joining elements whose difference is a
    nonzero square."""
    squares = {field.exp[i] for i in range(0, field.q - 1, 2)}
    return _difference_graph(field, squares)


def peisert_adjacency(field: FieldSpec, beta: int | None = None) -> IntMatrix:
    """Adjacency of the graph joining elements with difference in
    U union beta U, for the fourth-power subgroup U.

    beta defaults to the field's canonical primitive root; any other
    primitive element may be supplied to probe dependence on the
    choice (only its coset mod U matters).
    """
    if beta is None:
        beta = field.beta
    lb = field.log[beta]
    if gcd(lb, field.q - 1) != 1:
        raise ValueError("beta must be primitive")
    conn = {field.exp[i] for i in range(0, field.q - 1, 4)}
    conn |= {field.exp[(i + lb) % (field.q - 1)] for i in range(0, field.q - 1, 4)}
    return _difference_graph(field, conn)


@dataclass(frozen=True)
class PaleyPeisertData:
    """Both graphs on F_{p^2} with their scaled spectral projectors."""

    p: int
    q: int
    k: int
    r: int
    s: int
    X: IntMatrix
    Xstar: IntMatrix
    E1: IntMatrix
    E2: IntMatrix
    E3: IntMatrix
    E1star: IntMatrix
    E2star: IntMatrix
    E3star: IntMatrix


def _projector_triple(a: IntMatrix, p: int, k: int, r: int, s: int):
    q = a.nrows
    j = IntMatrix([[1] * q for _ in range(q)])
    ident = IntMatrix.identity(q)
    e1 = j
    e2 = j * s + a * p - ident * (p * s)
    e3 = j * r - a * p + ident * (p * r)
    scale = p * p
    for e in (e1, e2, e3):
        assert e * e == e * scale, "projector identity failed"
    for u, v in ((e1, e2), (e1, e3), (e2, e3)):
        assert (u * v).is_zero(), "projectors must annihilate each other"
    assert e1 + e2 + e3 == ident * scale
    assert e1.trace() == scale
    assert e2.trace() == scale * k
    assert e3.trace() == scale * k
    return e1, e2, e3


def paley_idempotent_data(p: int) -> PaleyPeisertData:
    """Graphs on p^2 vertices with integer spectral projectors.

    The eigenvalues are k = (p^2-1)/2, r = (p-1)/2, s = -(p+1)/2 and
    the projectors come from the closed formulas E1 = J,
    E2 = sJ + pX - psI, E3 = rJ - pX + prI, each satisfying
    E^2 = p^2 E.  Identity failures raise immediately.
    """
    field = field_build(p, 2)
    q = field.q
    k = (q - 1) // 2
    r = (p - 1) // 2
    s = -(p + 1) // 2
    x = paley_adjacency(field)
    xstar = peisert_adjacency(field)
    e1, e2, e3 = _projector_triple(x, p, k, r, s)
    f1, f2, f3 = _projector_triple(xstar, p, k, r, s)
    return PaleyPeisertData(
        p=p,
        q=q,
        k=k,
        r=r,
        s=s,
        X=x,
        Xstar=xstar,
        E1=e1,
        E2=e2,
        E3=e3,
        E1star=f1,
        E2star=f2,
        E3star=f3,
    )


@dataclass(frozen=True)
class LemmaEntry:
    name: str
    invariants: tuple
    ok: bool

    def to_json_obj(self):
        return {
            "name": self.name,
            "invariants": [str(v) for v in self.invariants],
            "ok": self.ok,
        }


@dataclass(frozen=True)
class LemmaReport:
    p: int
    entries: tuple

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def to_json_obj(self):
        return {
            "p": str(self.p),
            "ok": self.ok,
            "matrices": [e.to_json_obj() for e in self.entries],
        }


def expected_invariant_counts(p: int):
    """(count of 1, count of p, count of p^2) in the projector Smith form."""
    return 1, (p + 1) ** 2 // 4 - 2, (p - 1) ** 2 // 4


def verify_smith_lemma(p: int) -> LemmaReport:
    """Compare Smith invariants of E2, E3 of both graphs to the
    closed-form multiset."""
    data = paley_idempotent_data(p)
    ones, ps, p2s = expected_invariant_counts(p)
    scale = p * p
    entries = []
    for name, e in (
        ("paley-E2", data.E2),
        ("paley-E3", data.E3),
        ("peisert-E2", data.E2star),
        ("peisert-E3", data.E3star),
    ):
        inv = scaled_idempotent_invariants(e, scale)
        counts = (
            sum(1 for v in inv if v == 1),
            sum(1 for v in inv if v == p),
            sum(1 for v in inv if v == scale),
        )
        ok = counts == (ones, ps, p2s) and len(inv) == ones + ps + p2s
        entries.append(LemmaEntry(name=name, invariants=tuple(inv), ok=ok))
    return LemmaReport(p=p, entries=tuple(entries))
