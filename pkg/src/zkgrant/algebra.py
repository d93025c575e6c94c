"""Pairing-friendly algebra over the BN254 curve (the Ethereum precompile curve).

Exposes the scalar field, the two source groups G1/G2, the degree-12 target
group, and the optimal ate pairing.  Public types (`Scalar`, `G1Point`,
`G2Point`, `TargetElement`) are immutable and validated on construction;
serialized forms mirror the uncompressed big-endian calldata layout used by
on-chain verifiers (G2 coordinates with the imaginary limb first).

Internals follow the usual tower Fp -> Fp2 -> Fp6 -> Fp12 with
i^2 = -1, v^3 = xi = 9 + i, w^2 = v, and run on gmpy2 integers with
Jacobian point coordinates for speed.  Line functions and the final
exponentiation use the standard BN schedules (eprint 2010/354); point
addition/doubling formulas are the Jacobian ones from the EFD.

Security caveat: arithmetic is NOT constant-time.  This module is meant for
desk-scale experiments, never for handling production key material.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2

from .errors import InversionOfZero, MalformedEncoding

_mpz = gmpy2.mpz

# Curve family parameter; p, r, and the ate loop count all derive from it.
BN_U = 4965661367192848881

_P = _mpz(36 * BN_U**4 + 36 * BN_U**3 + 24 * BN_U**2 + 6 * BN_U + 1)
_R = _mpz(36 * BN_U**4 + 36 * BN_U**3 + 18 * BN_U**2 + 6 * BN_U + 1)

FIELD_MODULUS = int(_P)
CURVE_ORDER = int(_R)

# Pin the precompile-compatible instantiation explicitly.
assert FIELD_MODULUS == 21888242871839275222246405745257275088696311157297823662689037894645226208583
assert CURVE_ORDER == 21888242871839275222246405745257275088548364400416034343698204186575808495617

_CURVE_B = _mpz(3)

# Running count of Miller-loop evaluations; lets callers assert that a code
# path performed no pairing work at all.
_PAIRING_OPS = 0


def pairing_operation_count() -> int:
    """Total Miller-loop evaluations performed since import."""
    return _PAIRING_OPS


# ---------------------------------------------------------------------------
# Fp2 = Fp[i] / (i^2 + 1), elements as (c0, c1) = c0 + c1*i
# ---------------------------------------------------------------------------

_F2_ZERO = (_mpz(0), _mpz(0))
_F2_ONE = (_mpz(1), _mpz(0))
_XI = (_mpz(9), _mpz(1))  # the sextic non-residue used by the tower


def _f2_add(a, b):
    return ((a[0] + b[0]) % _P, (a[1] + b[1]) % _P)


def _f2_sub(a, b):
    return ((a[0] - b[0]) % _P, (a[1] - b[1]) % _P)


def _f2_neg(a):
    return (-a[0] % _P, -a[1] % _P)


def _f2_conj(a):
    return (a[0], -a[1] % _P)


def _f2_mul(a, b):
    t0 = a[0] * b[0]
    t1 = a[1] * b[1]
    return ((t0 - t1) % _P, ((a[0] + a[1]) * (b[0] + b[1]) - t0 - t1) % _P)


def _f2_sqr(a):
    return ((a[0] + a[1]) * (a[0] - a[1]) % _P, 2 * a[0] * a[1] % _P)


def _f2_smul(a, s):
    return (a[0] * s % _P, a[1] * s % _P)


def _f2_double(a):
    return (2 * a[0] % _P, 2 * a[1] % _P)


def _f2_mul_xi(a):
    # (c0 + c1 i)(9 + i)
    return ((9 * a[0] - a[1]) % _P, (a[0] + 9 * a[1]) % _P)


def _f2_inv(a):
    n = gmpy2.invert((a[0] * a[0] + a[1] * a[1]) % _P, _P)
    return (a[0] * n % _P, -a[1] * n % _P)


def _f2_pow(a, e):
    out = _F2_ONE
    for bit in bin(e)[2:]:
        out = _f2_sqr(out)
        if bit == "1":
            out = _f2_mul(out, a)
    return out


# ---------------------------------------------------------------------------
# Fp6 = Fp2[v] / (v^3 - xi), elements as (c0, c1, c2)
# ---------------------------------------------------------------------------

_F6_ZERO = (_F2_ZERO, _F2_ZERO, _F2_ZERO)
_F6_ONE = (_F2_ONE, _F2_ZERO, _F2_ZERO)


def _f6_add(a, b):
    return (_f2_add(a[0], b[0]), _f2_add(a[1], b[1]), _f2_add(a[2], b[2]))


def _f6_sub(a, b):
    return (_f2_sub(a[0], b[0]), _f2_sub(a[1], b[1]), _f2_sub(a[2], b[2]))


def _f6_neg(a):
    return (_f2_neg(a[0]), _f2_neg(a[1]), _f2_neg(a[2]))


def _f6_mul(a, b):
    v0 = _f2_mul(a[0], b[0])
    v1 = _f2_mul(a[1], b[1])
    v2 = _f2_mul(a[2], b[2])
    c0 = _f2_add(v0, _f2_mul_xi(_f2_sub(_f2_sub(_f2_mul(_f2_add(a[1], a[2]), _f2_add(b[1], b[2])), v1), v2)))
    c1 = _f2_add(_f2_sub(_f2_sub(_f2_mul(_f2_add(a[0], a[1]), _f2_add(b[0], b[1])), v0), v1), _f2_mul_xi(v2))
    c2 = _f2_add(_f2_sub(_f2_sub(_f2_mul(_f2_add(a[0], a[2]), _f2_add(b[0], b[2])), v0), v2), v1)
    return (c0, c1, c2)


def _f6_sqr(a):
    s0 = _f2_sqr(a[0])
    ab = _f2_mul(a[0], a[1])
    s1 = _f2_double(ab)
    s2 = _f2_sqr(_f2_add(_f2_sub(a[0], a[1]), a[2]))
    bc = _f2_mul(a[1], a[2])
    s3 = _f2_double(bc)
    s4 = _f2_sqr(a[2])
    c0 = _f2_add(s0, _f2_mul_xi(s3))
    c1 = _f2_add(s1, _f2_mul_xi(s4))
    c2 = _f2_sub(_f2_sub(_f2_add(_f2_add(s1, s2), s3), s0), s4)
    return (c0, c1, c2)


def _f6_smul(a, s):
    # scale by an Fp2 element
    return (_f2_mul(a[0], s), _f2_mul(a[1], s), _f2_mul(a[2], s))


def _f6_mul_v(a):
    # multiply by v: (c0, c1, c2) -> (xi*c2, c0, c1)
    return (_f2_mul_xi(a[2]), a[0], a[1])


def _f6_inv(a):
    big_a = _f2_sub(_f2_sqr(a[0]), _f2_mul_xi(_f2_mul(a[1], a[2])))
    big_b = _f2_sub(_f2_mul_xi(_f2_sqr(a[2])), _f2_mul(a[0], a[1]))
    big_c = _f2_sub(_f2_sqr(a[1]), _f2_mul(a[0], a[2]))
    f = _f2_add(_f2_mul(a[0], big_a), _f2_mul_xi(_f2_add(_f2_mul(a[2], big_b), _f2_mul(a[1], big_c))))
    f = _f2_inv(f)
    return (_f2_mul(big_a, f), _f2_mul(big_b, f), _f2_mul(big_c, f))


# Frobenius constants: powers of xi that absorb v^p and v^(p^2) into the base.
_FROB6_C1 = _f2_pow(_XI, (FIELD_MODULUS - 1) // 3)
_FROB6_C2 = _f2_pow(_XI, 2 * (FIELD_MODULUS - 1) // 3)
_FROB6_P2_C1 = _f2_pow(_XI, (FIELD_MODULUS * FIELD_MODULUS - 1) // 3)[0]  # lands in Fp
_FROB6_P2_C2 = _f2_pow(_XI, 2 * (FIELD_MODULUS * FIELD_MODULUS - 1) // 3)[0]
_FROB12_C1 = _f2_pow(_XI, (FIELD_MODULUS - 1) // 6)
_FROB12_P2_C1 = _f2_pow(_XI, (FIELD_MODULUS * FIELD_MODULUS - 1) // 6)[0]


def _f6_frob(a):
    return (
        _f2_conj(a[0]),
        _f2_mul(_f2_conj(a[1]), _FROB6_C1),
        _f2_mul(_f2_conj(a[2]), _FROB6_C2),
    )


def _f6_frob_p2(a):
    return (a[0], _f2_smul(a[1], _FROB6_P2_C1), _f2_smul(a[2], _FROB6_P2_C2))


# ---------------------------------------------------------------------------
# Fp12 = Fp6[w] / (w^2 - v), elements as (c0, c1)
# ---------------------------------------------------------------------------

_F12_ONE = (_F6_ONE, _F6_ZERO)


def _f12_mul(a, b):
    t0 = _f6_mul(a[0], b[0])
    t1 = _f6_mul(a[1], b[1])
    c1 = _f6_sub(_f6_sub(_f6_mul(_f6_add(a[0], a[1]), _f6_add(b[0], b[1])), t0), t1)
    return (_f6_add(t0, _f6_mul_v(t1)), c1)


def _f12_sqr(a):
    t = _f6_mul(a[0], a[1])
    c0 = _f6_sub(_f6_sub(_f6_mul(_f6_add(a[0], a[1]), _f6_add(a[0], _f6_mul_v(a[1]))), t), _f6_mul_v(t))
    return (c0, _f6_add(t, t))


def _f12_conj(a):
    return (a[0], _f6_neg(a[1]))


def _f12_inv(a):
    n = _f6_inv(_f6_sub(_f6_sqr(a[0]), _f6_mul_v(_f6_sqr(a[1]))))
    return (_f6_mul(a[0], n), _f6_neg(_f6_mul(a[1], n)))


def _f12_frob(a):
    return (_f6_frob(a[0]), _f6_smul(_f6_frob(a[1]), _FROB12_C1))


def _f12_frob_p2(a):
    c1 = _f6_frob_p2(a[1])
    return (_f6_frob_p2(a[0]), (_f2_smul(c1[0], _FROB12_P2_C1), _f2_smul(c1[1], _FROB12_P2_C1), _f2_smul(c1[2], _FROB12_P2_C1)))


def _f12_pow(a, e):
    out = _F12_ONE
    for bit in bin(e)[2:]:
        out = _f12_sqr(out)
        if bit == "1":
            out = _f12_mul(out, a)
    return out


# ---------------------------------------------------------------------------
# G1: y^2 = x^3 + 3 over Fp, Jacobian coordinates (X, Y, Z); Z = 0 at infinity
# ---------------------------------------------------------------------------

_G1_INF = (_mpz(1), _mpz(1), _mpz(0))


def _g1_double(a):
    x, y, z = a
    if not z:
        return a
    aa = x * x % _P
    bb = y * y % _P
    cc = bb * bb % _P
    d = 2 * ((x + bb) ** 2 - aa - cc) % _P
    e = 3 * aa % _P
    f = e * e % _P
    x3 = (f - 2 * d) % _P
    y3 = (e * (d - x3) - 8 * cc) % _P
    z3 = 2 * y * z % _P
    return (x3, y3, z3)


def _g1_add(a, b):
    if not a[2]:
        return b
    if not b[2]:
        return a
    x1, y1, z1 = a
    x2, y2, z2 = b
    z1z1 = z1 * z1 % _P
    z2z2 = z2 * z2 % _P
    u1 = x1 * z2z2 % _P
    u2 = x2 * z1z1 % _P
    s1 = y1 * z2 * z2z2 % _P
    s2 = y2 * z1 * z1z1 % _P
    h = (u2 - u1) % _P
    if not h:
        if s1 == s2:
            return _g1_double(a)
        return _G1_INF
    i = 4 * h * h % _P
    j = h * i % _P
    rr = 2 * (s2 - s1) % _P
    v = u1 * i % _P
    x3 = (rr * rr - j - 2 * v) % _P
    y3 = (rr * (v - x3) - 2 * s1 * j) % _P
    z3 = ((z1 + z2) ** 2 - z1z1 - z2z2) * h % _P
    return (x3, y3, z3)


def _g1_neg(a):
    return (a[0], -a[1] % _P, a[2])


def _g1_mul(a, k):
    if k == 0 or not a[2]:
        return _G1_INF
    acc = _G1_INF
    for bit in bin(k)[2:]:
        acc = _g1_double(acc)
        if bit == "1":
            acc = _g1_add(acc, a)
    return acc


def _g1_affine(a):
    if not a[2]:
        return None
    zinv = gmpy2.invert(a[2], _P)
    zinv2 = zinv * zinv % _P
    return (a[0] * zinv2 % _P, a[1] * zinv2 * zinv % _P)


# ---------------------------------------------------------------------------
# G2: y^2 = x^3 + 3/xi over Fp2 (the sextic twist), Jacobian over Fp2
# ---------------------------------------------------------------------------

_TWIST_B = _f2_smul(_f2_inv(_XI), 3)
assert _TWIST_B == (
    _mpz(19485874751759354771024239261021720505790618469301721065564631296452457478373),
    _mpz(266929791119991161246907387137283842545076965332900288569378510910307636690),
)

_G2_INF = (_F2_ONE, _F2_ONE, _F2_ZERO)


def _g2_double(a):
    x, y, z = a
    if z == _F2_ZERO:
        return a
    aa = _f2_sqr(x)
    bb = _f2_sqr(y)
    cc = _f2_sqr(bb)
    d = _f2_double(_f2_sub(_f2_sub(_f2_sqr(_f2_add(x, bb)), aa), cc))
    e = _f2_add(_f2_double(aa), aa)
    f = _f2_sqr(e)
    x3 = _f2_sub(f, _f2_double(d))
    c8 = _f2_double(_f2_double(_f2_double(cc)))
    y3 = _f2_sub(_f2_mul(e, _f2_sub(d, x3)), c8)
    z3 = _f2_double(_f2_mul(y, z))
    return (x3, y3, z3)


def _g2_add(a, b):
    if a[2] == _F2_ZERO:
        return b
    if b[2] == _F2_ZERO:
        return a
    x1, y1, z1 = a
    x2, y2, z2 = b
    z1z1 = _f2_sqr(z1)
    z2z2 = _f2_sqr(z2)
    u1 = _f2_mul(x1, z2z2)
    u2 = _f2_mul(x2, z1z1)
    s1 = _f2_mul(_f2_mul(y1, z2), z2z2)
    s2 = _f2_mul(_f2_mul(y2, z1), z1z1)
    h = _f2_sub(u2, u1)
    if h == _F2_ZERO:
        if s1 == s2:
            return _g2_double(a)
        return _G2_INF
    i = _f2_sqr(_f2_double(h))
    j = _f2_mul(h, i)
    rr = _f2_double(_f2_sub(s2, s1))
    v = _f2_mul(u1, i)
    x3 = _f2_sub(_f2_sub(_f2_sqr(rr), j), _f2_double(v))
    y3 = _f2_sub(_f2_mul(rr, _f2_sub(v, x3)), _f2_double(_f2_mul(s1, j)))
    z3 = _f2_mul(_f2_sub(_f2_sub(_f2_sqr(_f2_add(z1, z2)), z1z1), z2z2), h)
    return (x3, y3, z3)


def _g2_neg(a):
    return (a[0], _f2_neg(a[1]), a[2])


def _g2_mul(a, k):
    if k == 0 or a[2] == _F2_ZERO:
        return _G2_INF
    acc = _G2_INF
    for bit in bin(k)[2:]:
        acc = _g2_double(acc)
        if bit == "1":
            acc = _g2_add(acc, a)
    return acc


def _g2_affine(a):
    if a[2] == _F2_ZERO:
        return None
    zinv = _f2_inv(a[2])
    zinv2 = _f2_sqr(zinv)
    return (_f2_mul(a[0], zinv2), _f2_mul(_f2_mul(a[1], zinv2), zinv))


def _g2_on_curve(x, y):
    return _f2_sqr(y) == _f2_add(_f2_mul(_f2_sqr(x), x), _TWIST_B)


# Untwist-Frobenius-twist endomorphism constants (also used in the Miller tail).
_PSI_X = _f2_pow(_XI, (FIELD_MODULUS - 1) // 3)
_PSI_Y = _f2_pow(_XI, (FIELD_MODULUS - 1) // 2)
# On the order-r subgroup the endomorphism acts as multiplication by 6u^2.
_PSI_EIGENVALUE = 6 * BN_U * BN_U


def _g2_in_subgroup(x, y):
    """Membership test for the order-r subgroup of the twist.

    Checks psi(Q) == [6u^2]Q where psi is the untwist-Frobenius-twist map
    (the Galbraith-Scott criterion for BN curves).
    """
    psi = (_f2_mul(_f2_conj(x), _PSI_X), _f2_mul(_f2_conj(y), _PSI_Y))
    m = _g2_affine(_g2_mul((x, y, _F2_ONE), _PSI_EIGENVALUE))
    return m is not None and m == psi


def _g2_has_order_r(x, y):
    """Reference membership test: [r]Q == infinity.  Slow; kept as an oracle."""
    return _g2_mul((x, y, _F2_ONE), CURVE_ORDER)[2] == _F2_ZERO


# ---------------------------------------------------------------------------
# Optimal ate pairing: Miller loop over NAF(6u+2) plus two Frobenius steps
# ---------------------------------------------------------------------------

def _naf(x):
    digits = []
    while x:
        if x & 1:
            d = 2 - (x & 3)
            x -= d
        else:
            d = 0
        digits.append(d)
        x >>= 1
    return digits

_ATE_DIGITS = _naf(6 * BN_U + 2)
assert _ATE_DIGITS[-1] == 1


def _line_double(r, qx, qy):
    """Tangent line at twist point r, evaluated at the G1 point (qx, qy).

    r is (X, Y, Z, T) Jacobian with cached T = Z^2.  Returns the sparse line
    coefficients (a, b, c) and the doubled point.
    """
    rx, ry, rz, rt = r
    aa = _f2_sqr(rx)
    bb = _f2_sqr(ry)
    cc = _f2_sqr(bb)
    d = _f2_double(_f2_sub(_f2_sub(_f2_sqr(_f2_add(rx, bb)), aa), cc))
    e = _f2_add(_f2_double(aa), aa)
    f = _f2_sqr(e)
    c8 = _f2_double(_f2_double(_f2_double(cc)))
    ox = _f2_sub(f, _f2_double(d))
    oy = _f2_sub(_f2_mul(e, _f2_sub(d, ox)), c8)
    oz = _f2_sub(_f2_sub(_f2_sqr(_f2_add(ry, rz)), bb), rt)
    ot = _f2_sqr(oz)

    a = _f2_sqr(_f2_add(rx, e))
    b4 = _f2_double(_f2_double(bb))
    a = _f2_sub(a, _f2_add(aa, _f2_add(f, b4)))
    t = _f2_double(_f2_mul(e, rt))
    b = _f2_smul(_f2_neg(t), qx)
    c = _f2_smul(_f2_double(_f2_mul(oz, rt)), qy)
    return a, b, c, (ox, oy, oz, ot)


def _line_add(r, px, py, qx, qy, py2):
    """Line through twist points r and (px, py), evaluated at (qx, qy).

    py2 caches py^2 across calls with the same added point.
    """
    rx, ry, rz, rt = r
    b = _f2_mul(px, rt)
    d = _f2_mul(_f2_sub(_f2_sub(_f2_sqr(_f2_add(py, rz)), py2), rt), rt)
    h = _f2_sub(b, rx)
    i = _f2_sqr(h)
    e = _f2_double(_f2_double(i))
    j = _f2_mul(h, e)
    l1 = _f2_sub(_f2_sub(d, ry), ry)
    v = _f2_mul(rx, e)
    ox = _f2_sub(_f2_sub(_f2_sqr(l1), j), _f2_double(v))
    oz = _f2_sub(_f2_sub(_f2_sqr(_f2_add(rz, h)), rt), i)
    t = _f2_mul(_f2_sub(v, ox), l1)
    t2 = _f2_double(_f2_mul(ry, j))
    oy = _f2_sub(t, t2)
    ot = _f2_sqr(oz)

    t = _f2_sub(_f2_sub(_f2_sqr(_f2_add(py, oz)), py2), ot)
    t2 = _f2_double(_f2_mul(l1, px))
    a = _f2_sub(t2, t)
    c = _f2_smul(_f2_double(oz), qy)
    b = _f2_smul(_f2_double(_f2_neg(l1)), qx)
    return a, b, c, (ox, oy, oz, ot)


def _mul_line(f, a, b, c):
    """Multiply f by the sparse Fp12 element c + b*w + a*v*w."""
    g1 = (b, a, _F2_ZERO)
    t1 = _f6_mul(f[1], g1)
    t3 = _f6_smul(f[0], c)
    t2 = (_f2_add(b, c), a, _F2_ZERO)
    c1 = _f6_sub(_f6_sub(_f6_mul(_f6_add(f[0], f[1]), t2), t1), t3)
    return (_f6_add(t3, _f6_mul_v(t1)), c1)


def _miller(qx, qy, px, py):
    """Miller loop for the optimal ate pairing; inputs are affine coordinates."""
    global _PAIRING_OPS
    _PAIRING_OPS += 1

    f = _F12_ONE
    t = (qx, qy, _F2_ONE, _F2_ONE)
    nqy = _f2_neg(qy)
    py2 = _f2_sqr(qy)

    for i in range(len(_ATE_DIGITS) - 2, -1, -1):
        f = _f12_sqr(f)
        a, b, c, t = _line_double(t, px, py)
        f = _mul_line(f, a, b, c)
        d = _ATE_DIGITS[i]
        if d == 1:
            a, b, c, t = _line_add(t, qx, qy, px, py, py2)
            f = _mul_line(f, a, b, c)
        elif d == -1:
            a, b, c, t = _line_add(t, qx, nqy, px, py, py2)
            f = _mul_line(f, a, b, c)

    # Frobenius-image points close out the optimal ate formula.
    q1x = _f2_mul(_f2_conj(qx), _PSI_X)
    q1y = _f2_mul(_f2_conj(qy), _PSI_Y)
    q2x = _f2_smul(qx, _FROB6_P2_C1)

    r2 = _f2_sqr(q1y)
    a, b, c, t = _line_add(t, q1x, q1y, px, py, r2)
    f = _mul_line(f, a, b, c)

    r2 = _f2_sqr(qy)
    a, b, c, t = _line_add(t, q2x, qy, px, py, r2)
    f = _mul_line(f, a, b, c)
    return f


def _final_exp(f):
    """Map a Miller-loop output into the order-r cyclotomic subgroup."""
    # Easy part: f^((p^6 - 1)(p^2 + 1)).
    t1 = _f12_mul(_f12_conj(f), _f12_inv(f))
    t1 = _f12_mul(t1, _f12_frob_p2(t1))

    # Hard part (Algorithm 31 of eprint 2010/354).
    fp = _f12_frob(t1)
    fp2 = _f12_frob_p2(t1)
    fp3 = _f12_frob(fp2)

    fu = _f12_pow(t1, BN_U)
    fu2 = _f12_pow(fu, BN_U)
    fu3 = _f12_pow(fu2, BN_U)

    y3 = _f12_conj(_f12_frob(fu))
    fu2p = _f12_frob(fu2)
    fu3p = _f12_frob(fu3)
    y2 = _f12_frob_p2(fu2)

    y0 = _f12_mul(_f12_mul(fp, fp2), fp3)
    y1 = _f12_conj(t1)
    y5 = _f12_conj(fu2)
    y4 = _f12_conj(_f12_mul(fu, fu2p))
    y6 = _f12_conj(_f12_mul(fu3, fu3p))

    t0 = _f12_mul(_f12_mul(_f12_sqr(y6), y4), y5)
    t1 = _f12_mul(_f12_mul(y3, y5), t0)
    t0 = _f12_mul(t0, y2)
    t1 = _f12_mul(_f12_sqr(t1), t0)
    t1 = _f12_sqr(t1)
    t0 = _f12_mul(t1, y1)
    t1 = _f12_mul(t1, y0)
    t0 = _f12_sqr(t0)
    return _f12_mul(t0, t1)


# ---------------------------------------------------------------------------
# Scalar field
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scalar:
    """Element of the prime-order scalar field, kept in canonical form."""

    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % CURVE_ORDER)

    def __add__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.value + other.value)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.value - other.value)

    def __mul__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.value * other.value)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.value)

    def inverse(self) -> "Scalar":
        if self.value == 0:
            raise InversionOfZero("zero has no multiplicative inverse")
        return Scalar(int(gmpy2.invert(self.value, _R)))

    def is_zero(self) -> bool:
        return self.value == 0


def scalar_arith(op: str, a: Scalar, b: Scalar | None = None) -> Scalar:
    """Field arithmetic dispatcher: op is one of add | sub | mul | inv."""
    if op == "inv":
        if b is not None:
            raise ValueError("inv takes a single operand")
        return a.inverse()
    if b is None:
        raise ValueError(f"{op} requires two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# Group element types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class G1Point:
    """Affine point on the base curve y^2 = x^3 + 3; cofactor is 1."""

    x: int
    y: int
    infinity: bool = False

    def __post_init__(self):
        if self.infinity:
            object.__setattr__(self, "x", 0)
            object.__setattr__(self, "y", 0)
            return
        x, y = int(self.x) % FIELD_MODULUS, int(self.y) % FIELD_MODULUS
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if (y * y - x * x * x - 3) % FIELD_MODULUS != 0:
            raise ValueError("point is not on the G1 curve")


@dataclass(frozen=True)
class G2Point:
    """Affine point on the sextic twist, restricted to the order-r subgroup.

    Coordinates are Fp2 elements as (real, imaginary) integer pairs.
    """

    x: tuple[int, int]
    y: tuple[int, int]
    infinity: bool = False

    def __post_init__(self):
        if self.infinity:
            object.__setattr__(self, "x", (0, 0))
            object.__setattr__(self, "y", (0, 0))
            return
        x = (int(self.x[0]) % FIELD_MODULUS, int(self.x[1]) % FIELD_MODULUS)
        y = (int(self.y[0]) % FIELD_MODULUS, int(self.y[1]) % FIELD_MODULUS)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        fx = (_mpz(x[0]), _mpz(x[1]))
        fy = (_mpz(y[0]), _mpz(y[1]))
        if not _g2_on_curve(fx, fy):
            raise ValueError("point is not on the G2 twist")
        if not _g2_in_subgroup(fx, fy):
            raise ValueError("point is outside the order-r subgroup")


@dataclass(frozen=True)
class TargetElement:
    """Pairing output: element of the order-r subgroup of Fp12.

    `value` is the coefficient tower ((c0, c1, c2), (c3, c4, c5)) of integer
    pairs, constant term first.
    """

    value: tuple

    def _raw(self):
        return tuple(
            tuple((_mpz(c[0]), _mpz(c[1])) for c in half) for half in self.value
        )

    def __mul__(self, other: "TargetElement") -> "TargetElement":
        return TargetElement(_freeze_f12(_f12_mul(self._raw(), other._raw())))

    def __pow__(self, exponent) -> "TargetElement":
        e = exponent.value if isinstance(exponent, Scalar) else int(exponent) % CURVE_ORDER
        if e == 0:
            return TargetElement(_freeze_f12(_F12_ONE))
        return TargetElement(_freeze_f12(_f12_pow(self._raw(), e)))

    def inverse(self) -> "TargetElement":
        # elements of the cyclotomic subgroup are unitary: inverse == conjugate
        return TargetElement(_freeze_f12(_f12_conj(self._raw())))

    def is_identity(self) -> bool:
        return self._raw() == _F12_ONE

    @classmethod
    def identity(cls) -> "TargetElement":
        return cls(_freeze_f12(_F12_ONE))


def _freeze_f12(f):
    return tuple(tuple((int(c[0]), int(c[1])) for c in half) for half in f)


# Canonical generators.
_G1_GEN = (_mpz(1), _mpz(2), _mpz(1))
_G2_GEN_X = (
    _mpz(10857046999023057135944570762232829481370756359578518086990519993285655852781),
    _mpz(11559732032986387107991004021392285783925812861821192530917403151452391805634),
)
_G2_GEN_Y = (
    _mpz(8495653923123431417604973247489272438418190587263600148770280649306958101930),
    _mpz(4082367875863433681332203403145435568316851327593401208105741076214120093531),
)


def g1_generator() -> G1Point:
    return G1Point(1, 2)


def g2_generator() -> G2Point:
    return G2Point(
        (int(_G2_GEN_X[0]), int(_G2_GEN_X[1])),
        (int(_G2_GEN_Y[0]), int(_G2_GEN_Y[1])),
    )


# --- conversions between public points and internal Jacobian tuples ---------

def _g1_to_jac(p: G1Point):
    if p.infinity:
        return _G1_INF
    return (_mpz(p.x), _mpz(p.y), _mpz(1))


def _g1_from_jac(a) -> G1Point:
    aff = _g1_affine(a)
    if aff is None:
        return G1Point(0, 0, infinity=True)
    return G1Point(int(aff[0]), int(aff[1]))


def _g2_to_jac(p: G2Point):
    if p.infinity:
        return _G2_INF
    return ((_mpz(p.x[0]), _mpz(p.x[1])), (_mpz(p.y[0]), _mpz(p.y[1])), _F2_ONE)


def _g2_from_jac(a) -> G2Point:
    aff = _g2_affine(a)
    if aff is None:
        return G2Point((0, 0), (0, 0), infinity=True)
    return G2Point(
        (int(aff[0][0]), int(aff[0][1])),
        (int(aff[1][0]), int(aff[1][1])),
    )


# ---------------------------------------------------------------------------
# Group operations
# ---------------------------------------------------------------------------

def group_add(p, q):
    """Add two points of the same group."""
    if isinstance(p, G1Point) and isinstance(q, G1Point):
        return _g1_from_jac(_g1_add(_g1_to_jac(p), _g1_to_jac(q)))
    if isinstance(p, G2Point) and isinstance(q, G2Point):
        return _g2_from_jac(_g2_add(_g2_to_jac(p), _g2_to_jac(q)))
    raise TypeError("points must belong to the same group")


def group_neg(p):
    """Additive inverse of a point."""
    if isinstance(p, G1Point):
        if p.infinity:
            return p
        return G1Point(p.x, -p.y % FIELD_MODULUS)
    if isinstance(p, G2Point):
        if p.infinity:
            return p
        return G2Point(p.x, (-p.y[0] % FIELD_MODULUS, -p.y[1] % FIELD_MODULUS))
    raise TypeError("expected a G1Point or G2Point")


def group_mul(p, k):
    """Scalar multiplication [k]P; [0]P is the point at infinity."""
    k = k.value if isinstance(k, Scalar) else int(k) % CURVE_ORDER
    if isinstance(p, G1Point):
        return _g1_from_jac(_g1_mul(_g1_to_jac(p), k))
    if isinstance(p, G2Point):
        return _g2_from_jac(_g2_mul(_g2_to_jac(p), k))
    raise TypeError("expected a G1Point or G2Point")


def multi_scalar_mul(points, scalars):
    """Sum of [k_i]P_i over same-group points; the SNARK workhorse."""
    points = list(points)
    scalars = [s.value if isinstance(s, Scalar) else int(s) % CURVE_ORDER for s in scalars]
    if len(points) != len(scalars):
        raise ValueError("points and scalars must have equal length")
    if not points:
        raise ValueError("empty multi-scalar multiplication is ambiguous")
    if isinstance(points[0], G1Point):
        acc = _G1_INF
        for p, k in zip(points, scalars):
            if k:
                acc = _g1_add(acc, _g1_mul(_g1_to_jac(p), k))
        return _g1_from_jac(acc)
    acc = _G2_INF
    for p, k in zip(points, scalars):
        if k:
            acc = _g2_add(acc, _g2_mul(_g2_to_jac(p), k))
    return _g2_from_jac(acc)


def pairing(p: G1Point, q: G2Point) -> TargetElement:
    """Optimal ate pairing e(P, Q), final exponentiation included."""
    if p.infinity or q.infinity:
        return TargetElement.identity()
    f = _miller(
        (_mpz(q.x[0]), _mpz(q.x[1])),
        (_mpz(q.y[0]), _mpz(q.y[1])),
        _mpz(p.x),
        _mpz(p.y),
    )
    return TargetElement(_freeze_f12(_final_exp(f)))


def pairing_product(pairs) -> TargetElement:
    """Product of pairings over (G1, G2) pairs with one shared final exponentiation."""
    f = _F12_ONE
    nontrivial = False
    for p, q in pairs:
        if p.infinity or q.infinity:
            continue
        nontrivial = True
        f = _f12_mul(
            f,
            _miller((_mpz(q.x[0]), _mpz(q.x[1])), (_mpz(q.y[0]), _mpz(q.y[1])), _mpz(p.x), _mpz(p.y)),
        )
    if not nontrivial:
        return TargetElement.identity()
    return TargetElement(_freeze_f12(_final_exp(f)))


def pairing_check(pairs) -> bool:
    """True iff the product of pairings over the pairs equals the identity."""
    return pairing_product(pairs).is_identity()


# ---------------------------------------------------------------------------
# Serialization: uncompressed big-endian, calldata-style layout
# ---------------------------------------------------------------------------

G1_ENCODED_LENGTH = 64
G2_ENCODED_LENGTH = 128


def encode_point(p) -> bytes:
    """Serialize a point; G1 -> 64 bytes, G2 -> 128 bytes, infinity -> zeros."""
    if isinstance(p, G1Point):
        if p.infinity:
            return bytes(G1_ENCODED_LENGTH)
        return p.x.to_bytes(32, "big") + p.y.to_bytes(32, "big")
    if isinstance(p, G2Point):
        if p.infinity:
            return bytes(G2_ENCODED_LENGTH)
        # imaginary limb first, matching on-chain calldata conventions
        return (
            p.x[1].to_bytes(32, "big")
            + p.x[0].to_bytes(32, "big")
            + p.y[1].to_bytes(32, "big")
            + p.y[0].to_bytes(32, "big")
        )
    raise TypeError("expected a G1Point or G2Point")


def _read_coord(data: bytes, offset: int) -> int:
    c = int.from_bytes(data[offset:offset + 32], "big")
    if c >= FIELD_MODULUS:
        raise MalformedEncoding("coordinate not below the field modulus")
    return c


def decode_point(data: bytes):
    """Inverse of encode_point; length selects the group.

    Rejects wrong lengths, out-of-range coordinates, points off the curve,
    and G2 points outside the order-r subgroup.
    """
    if len(data) == G1_ENCODED_LENGTH:
        if data == bytes(G1_ENCODED_LENGTH):
            return G1Point(0, 0, infinity=True)
        x = _read_coord(data, 0)
        y = _read_coord(data, 32)
        try:
            return G1Point(x, y)
        except ValueError as exc:
            raise MalformedEncoding(str(exc)) from exc
    if len(data) == G2_ENCODED_LENGTH:
        if data == bytes(G2_ENCODED_LENGTH):
            return G2Point((0, 0), (0, 0), infinity=True)
        x1 = _read_coord(data, 0)
        x0 = _read_coord(data, 32)
        y1 = _read_coord(data, 64)
        y0 = _read_coord(data, 96)
        try:
            return G2Point((x0, x1), (y0, y1))
        except ValueError as exc:
            raise MalformedEncoding(str(exc)) from exc
    raise MalformedEncoding(f"unsupported point encoding length {len(data)}")


# ---------------------------------------------------------------------------
# Roots of unity in the scalar field (QAP evaluation domains)
# ---------------------------------------------------------------------------

TWO_ADICITY = 28
assert (CURVE_ORDER - 1) % (1 << TWO_ADICITY) == 0
assert ((CURVE_ORDER - 1) >> TWO_ADICITY) % 2 == 1


def _find_two_adic_root() -> int:
    odd = (CURVE_ORDER - 1) >> TWO_ADICITY
    g = 2
    while True:
        h = pow(g, odd, CURVE_ORDER)
        if pow(h, 1 << (TWO_ADICITY - 1), CURVE_ORDER) != 1:
            return h
        g += 1


_TWO_ADIC_ROOT = _find_two_adic_root()


def root_of_unity(order: int) -> Scalar:
    """Primitive root of unity of the given power-of-two order."""
    if order < 1 or order & (order - 1):
        raise ValueError("order must be a power of two")
    k = order.bit_length() - 1
    if k > TWO_ADICITY:
        raise ValueError(f"order exceeds the 2-adicity {TWO_ADICITY} of the field")
    return Scalar(pow(_TWO_ADIC_ROOT, 1 << (TWO_ADICITY - k), CURVE_ORDER))


# ---------------------------------------------------------------------------
# Test-support helpers (not part of the stable API)
# ---------------------------------------------------------------------------

def _f2_sqrt(a):
    """Tonelli-Shanks square root in Fp2; returns None for non-residues."""
    q = FIELD_MODULUS * FIELD_MODULUS
    if a == _F2_ZERO:
        return _F2_ZERO
    if _f2_pow(a, (q - 1) // 2) != _F2_ONE:
        return None
    s = 0
    m = q - 1
    while m % 2 == 0:
        m //= 2
        s += 1
    z = _XI  # quadratic non-residue by tower construction
    c = _f2_pow(z, m)
    t = _f2_pow(a, m)
    root = _f2_pow(a, (m + 1) // 2)
    while t != _F2_ONE:
        i = 0
        probe = t
        while probe != _F2_ONE:
            probe = _f2_sqr(probe)
            i += 1
        b = c
        for _ in range(s - i - 1):
            b = _f2_sqr(b)
        root = _f2_mul(root, b)
        c = _f2_sqr(b)
        t = _f2_mul(t, c)
        s = i
    return root


def _twist_point_of_unknown_order(seed_x: int):
    """Point on the twist obtained by x-coordinate search; w.h.p. NOT order r.

    Used by tests to fabricate curve points that must fail subgroup checks.
    Returns affine ((x0, x1), (y0, y1)) integer pairs.
    """
    x = (_mpz(seed_x % FIELD_MODULUS), _mpz(0))
    while True:
        rhs = _f2_add(_f2_mul(_f2_sqr(x), x), _TWIST_B)
        y = _f2_sqrt(rhs)
        if y is not None:
            return ((int(x[0]), int(x[1])), (int(y[0]), int(y[1])))
        x = (x[0] + 1, x[1])
