"""Binary quadratic forms and exact unit representation.

A form (a, b, c) stands for f(x, y) = a x^2 + b xy + c y^2.  The one
question asked here is whether f represents +1 or -1, answered exactly
with either an integer witness or a named proof of impossibility:

* definite-minimum: definite forms attain their minimum |a| after
  reduction, so a reduced |a| >= 2 excludes units;
* cycle-exclusion: for indefinite non-square discriminant, every value
  m with 4 m^2 < D represented by f appears as a leading coefficient
  in the rho-cycle of the reduced form (1 qualifies since D >= 5);
* factor-system: square or zero discriminant makes f split into integer
  linear factors up to the scalar 4a, leaving finitely many divisor
  systems to solve.

All substitutions are tracked as GL_2(Z) matrices so witnesses can be
pulled back to the original variables and re-verified by evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt


@dataclass(frozen=True)
class BinaryQuadraticForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def evaluate(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0

    def transformed(self, m) -> "BinaryQuadraticForm":
        """The form f((x,y)·M) for M = ((p,q),(r,s)) acting on column vectors."""
        (p, q), (r, s) = m
        a = self.evaluate(p, r)
        c = self.evaluate(q, s)
        b = 2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s
        return BinaryQuadraticForm(a, b, c)

    def reduced(self):
        """Reduced equivalent of a definite form, with the transform.

        Returns (g, M) with g = f∘M, M in SL_2(Z), |b| <= a <= c for the
        positive-definite representative (the sign of a is preserved).
        """
        if self.discriminant >= 0:
            raise ValueError("reduction to |b| <= a <= c needs a definite form")
        sign = 1 if self.a > 0 else -1
        a, b, c = sign * self.a, sign * self.b, sign * self.c
        m = ((1, 0), (0, 1))
        while True:
            if c < a:
                a, b, c = c, -b, a
                m = _mat_mul(m, ((0, -1), (1, 0)))
                continue
            if b > a or b <= -a:
                t = (a - b) // (2 * a)  # shifts b into (-a, a]
                b2 = b + 2 * a * t
                c2 = a * t * t + b * t + c
                b, c = b2, c2
                m = _mat_mul(m, ((1, t), (0, 1)))
                continue
            if a == c and b < 0:
                a, b, c = c, -b, a
                m = _mat_mul(m, ((0, -1), (1, 0)))
                continue
            break
        return BinaryQuadraticForm(sign * a, sign * b, sign * c), m

    def to_json_obj(self):
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c)}


@dataclass(frozen=True)
class UnitRepresentation:
    """Answer to 'does f represent +1 or -1', with evidence."""

    represents: bool
    witness: tuple | None = None
    value: int | None = None
    proof: str | None = None

    def to_json_obj(self):
        obj = {"represents": self.represents}
        if self.witness is not None:
            obj["witness"] = [str(self.witness[0]), str(self.witness[1])]
            obj["value"] = str(self.value)
        if self.proof is not None:
            obj["proof"] = self.proof
        return obj


def _mat_mul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _witness(form, x, y):
    v = form.evaluate(x, y)
    assert v in (1, -1)
    return UnitRepresentation(represents=True, witness=(x, y), value=v)


def _solve_linear(a: int, b: int, t: int):
    """One integer solution (x, y) of a x + b y = t, or None."""
    if a == 0 and b == 0:
        return (0, 0) if t == 0 else None
    g = gcd(a, b)
    if t % g:
        return None
    # extended euclid on (a, b)
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t2 = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
        old_t, t2 = t2, old_t - quo * t2
    scale = t // g
    sign = 1 if old_r > 0 else -1
    return (old_s * scale * sign, old_t * scale * sign)


def _unit_by_factor_system(form: BinaryQuadraticForm):
    """Decide unit representation when the form splits into linear factors.

    Covers square and zero discriminant.  4a·f = (2ax + (b-e)y)(2ax + (b+e)y)
    with e = sqrt(D); when a = 0 one factor is y itself.
    """
    a, b, c = form.a, form.b, form.c
    d = form.discriminant
    e = isqrt(d) if d >= 0 else -1
    assert d >= 0 and e * e == d, "factor system needs a square discriminant"
    no = UnitRepresentation(represents=False, proof="factor-system")
    if a == 0:
        # f = y (b x + c y); a unit forces y = ±1 and the factor = ±1
        if b == 0:
            return _witness(form, 0, 1) if abs(c) == 1 else no
        for y in (1, -1):
            for lin in (1, -1):
                num = lin - c * y
                if num % b == 0 and form.evaluate(num // b, y) in (1, -1):
                    return _witness(form, num // b, y)
        return no
    if d == 0:
        # 4a f = (2ax + by)^2, so f = ±1 needs |4a| to be a square
        t = isqrt(4 * abs(a))
        if t * t != 4 * abs(a):
            return no
        for rhs in (t, -t):
            sol = _solve_linear(2 * a, b, rhs)
            if sol is not None and form.evaluate(*sol) in (1, -1):
                return _witness(form, *sol)
        return no
    # a != 0, e > 0: f = ±1 gives L1 L2 = ±4a for the integer linear forms
    # L1 = 2ax + (b-e)y, L2 = 2ax + (b+e)y with L2 - L1 = 2 e y
    for d1 in _signed_divisors(4 * abs(a)):
        for prod in (4 * a, -4 * a):
            d2, rem = divmod(prod, d1)
            if rem:
                continue
            num_y = d2 - d1
            if num_y % (2 * e):
                continue
            y = num_y // (2 * e)
            num_x = d1 - (b - e) * y
            if num_x % (2 * a):
                continue
            x = num_x // (2 * a)
            if form.evaluate(x, y) in (1, -1):
                return _witness(form, x, y)
    return no


def _signed_divisors(n: int):
    assert n > 0
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.extend((d, -d, n // d, -(n // d)))
        d += 1
    return sorted(set(out), key=abs)


def _rho(a: int, b: int, c: int, disc: int, e: int):
    """One reduction step for indefinite forms; returns (c, r, s, new_c).

    r is the unique residue of -b mod 2|c| in the window (e - 2|c|, e]
    when |c| <= e, else in (-|c|, |c|].
    """
    ac = abs(c)
    if ac > e:
        r = (-b) % (2 * ac)
        if r > ac:
            r -= 2 * ac
    else:
        r = (-b) % (2 * ac)
        shift = e - r
        r += (shift // (2 * ac)) * (2 * ac)
        if r > e:
            r -= 2 * ac
    s = (b + r) // (2 * c)
    new_c = (r * r - disc) // (4 * c)
    return c, r, s, new_c


def _is_reduced_indefinite(a: int, b: int, e: int) -> bool:
    return 0 < b <= e and 2 * abs(a) - b <= e < 2 * abs(a) + b


def _unit_by_cycle(form: BinaryQuadraticForm):
    """Indefinite non-square discriminant: walk the rho-cycle.

    Every m with |m| < sqrt(D)/2 represented by the form shows up as a
    leading coefficient of some form in the cycle; D >= 5 covers ±1.
    """
    disc = form.discriminant
    e = isqrt(disc)
    assert disc > 4 and e * e != disc
    a, b, c = form.a, form.b, form.c
    # a = 0 or c = 0 would force a square discriminant b^2
    assert a != 0 and c != 0
    m = ((1, 0), (0, 1))
    steps = 0
    while not _is_reduced_indefinite(a, b, e):
        aa, r, s, cc = _rho(a, b, c, disc, e)
        m = _mat_mul(m, ((0, -1), (1, s)))
        a, b, c = aa, r, cc
        steps += 1
        assert steps < 10000, "reduction failed to terminate"
    start = (a, b, c)
    while True:
        if a in (1, -1):
            x, y = m[0][0], m[1][0]
            return _witness(form, x, y)
        aa, r, s, cc = _rho(a, b, c, disc, e)
        m = _mat_mul(m, ((0, -1), (1, s)))
        a, b, c = aa, r, cc
        steps += 1
        assert steps < 200000, "cycle walk failed to terminate"
        if (a, b, c) == start:
            return UnitRepresentation(represents=False, proof="cycle-exclusion")


def bqf_represents_unit(form: BinaryQuadraticForm) -> UnitRepresentation:
    """Exact decision of whether the form represents +1 or -1.

    The zero form is rejected; everything else is decided with either a
    verified witness or a proof tag naming the exclusion argument.
    """
    if form.is_zero:
        raise ValueError("the zero form represents nothing")
    d = form.discriminant
    if d < 0:
        red, m = form.reduced()
        if abs(red.a) == 1:
            return _witness(form, m[0][0], m[1][0])
        return UnitRepresentation(represents=False, proof="definite-minimum")
    e = isqrt(d)
    if e * e == d:
        return _unit_by_factor_system(form)
    return _unit_by_cycle(form)
