#!/usr/bin/env python3
"""Derives the BLS12-381 constants used by src/ec from the curve parameter x,
verifies them (primality, curve orders, subgroup checks), and regenerates

    include/zkpot/ec/curve_constants.hpp
    tests/vectors/ec_vectors.hpp

Run from the repository root:  python3 scripts/gen_curve_constants.py
"""

import random
import sympy

# BLS12 family parameter for the 381-bit instantiation.
X = -0xD201000000010000

P = (X - 1) ** 2 * (X**4 - X**2 + 1) // 3 + X
R = X**4 - X**2 + 1

assert sympy.isprime(P), "base field modulus must be prime"
assert sympy.isprime(R), "scalar field modulus must be prime"
assert P % 4 == 3, "sqrt via (p+1)/4 requires p = 3 mod 4"
assert (P**4 - P**2 + 1) % R == 0

FP_LIMBS = 6
FR_LIMBS = 4


def limbs(n, count):
    out = []
    for _ in range(count):
        out.append(n & 0xFFFFFFFFFFFFFFFF)
        n >>= 64
    assert n == 0
    return out


def fmt_limbs(n, count):
    return "{" + ", ".join(f"0x{l:016x}ULL" for l in limbs(n, count)) + "}"


def mont_params(mod, nlimbs):
    bits = 64 * nlimbs
    r = (1 << bits) % mod
    r2 = (r * r) % mod
    inv = pow(-mod, -1, 1 << 64)
    return r, r2, inv


P_R, P_R2, P_INV = mont_params(P, FP_LIMBS)
R_R, R_R2, R_INV = mont_params(R, FR_LIMBS)


def to_mont_p(v):
    return (v % P) * P_R % P


def to_mont_r(v):
    return (v % R) * R_R % R


# ---------------------------------------------------------------------------
# Fp / Fp2 helpers
# ---------------------------------------------------------------------------

def fp_sqrt(a):
    a %= P
    if a == 0:
        return 0
    s = pow(a, (P + 1) // 4, P)
    return s if s * s % P == a else None


class Fp2:
    """Fp[u]/(u^2+1)."""

    __slots__ = ("c0", "c1")

    def __init__(self, c0, c1=0):
        self.c0 = c0 % P
        self.c1 = c1 % P

    def __add__(self, o):
        return Fp2(self.c0 + o.c0, self.c1 + o.c1)

    def __sub__(self, o):
        return Fp2(self.c0 - o.c0, self.c1 - o.c1)

    def __mul__(self, o):
        if isinstance(o, int):
            return Fp2(self.c0 * o, self.c1 * o)
        return Fp2(self.c0 * o.c0 - self.c1 * o.c1,
                   self.c0 * o.c1 + self.c1 * o.c0)

    def __eq__(self, o):
        return self.c0 == o.c0 and self.c1 == o.c1

    def is_zero(self):
        return self.c0 == 0 and self.c1 == 0

    def inv(self):
        n = pow(self.c0 * self.c0 + self.c1 * self.c1, -1, P)
        return Fp2(self.c0 * n, -self.c1 * n)

    def sqrt(self):
        if self.is_zero():
            return Fp2(0)
        if self.c1 == 0:
            s = fp_sqrt(self.c0)
            if s is not None:
                return Fp2(s)
            s = fp_sqrt(-self.c0 % P)
            if s is None:
                return None
            return Fp2(0, s)
        alpha = fp_sqrt(self.c0 * self.c0 + self.c1 * self.c1)
        if alpha is None:
            return None
        inv2 = pow(2, -1, P)
        for a in (alpha, (-alpha) % P):
            delta = (self.c0 + a) * inv2 % P
            x0 = fp_sqrt(delta)
            if x0 is None or x0 == 0:
                continue
            x1 = self.c1 * pow(2 * x0, -1, P) % P
            cand = Fp2(x0, x1)
            if cand * cand == self:
                return cand
        return None


# ---------------------------------------------------------------------------
# Short Weierstrass points, affine, parameterised over the field class
# ---------------------------------------------------------------------------

class Point:
    def __init__(self, x, y, infinity=False):
        self.x, self.y, self.inf = x, y, infinity

    @staticmethod
    def infinity_of(zero):
        return Point(zero, zero, True)


def ec_add(p, q, field_inv):
    if p.inf:
        return q
    if q.inf:
        return p
    if p.x == q.x:
        if (p.y + q.y).is_zero():
            zero = p.x * 0
            return Point(zero, zero, True)
        lam = (p.x * p.x * 3) * field_inv(p.y * 2)
    else:
        lam = (q.y - p.y) * field_inv(q.x - p.x)
    x3 = lam * lam - p.x - q.x
    y3 = lam * (p.x - x3) - p.y
    return Point(x3, y3)


def ec_mul(p, k, field_inv):
    acc = Point.infinity_of(p.x * 0)
    add = p
    while k:
        if k & 1:
            acc = ec_add(acc, add, field_inv)
        add = ec_add(add, add, field_inv)
        k >>= 1
    return acc


class FpW:
    """Wrap plain ints so the generic point code can use operators."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v % P

    def __add__(self, o):
        return FpW(self.v + (o.v if isinstance(o, FpW) else o))

    def __sub__(self, o):
        return FpW(self.v - o.v)

    def __mul__(self, o):
        return FpW(self.v * (o.v if isinstance(o, FpW) else o))

    def __eq__(self, o):
        return self.v == o.v

    def is_zero(self):
        return self.v == 0


def fp_inv_w(a):
    return FpW(pow(a.v, -1, P))


def fp2_inv_w(a):
    return a.inv()


# --- G1: y^2 = x^3 + 4 over Fp --------------------------------------------
T_TRACE = X + 1
N_E1 = P + 1 - T_TRACE
H1 = N_E1 // R
assert H1 * R == N_E1

gx = 1
G1 = None
while True:
    rhs = (gx**3 + 4) % P
    y = fp_sqrt(rhs)
    if y is not None:
        cand = ec_mul(Point(FpW(gx), FpW(min(y, P - y))), H1, fp_inv_w)
        if not cand.inf:
            assert ec_mul(cand, R, fp_inv_w).inf, "G1 generator must have order r"
            G1 = cand
            break
    gx += 1

# --- G2: y^2 = x^3 + 4(u+1) over Fp2 ---------------------------------------
# The sextic twist order is p^2 + 1 - t' where t' is one of (+-t2 +- 3f)/2
# with t2 = t^2 - 2p and 4p^2 = t2^2 + 3f^2.  Pick the candidate that both
# is divisible by r and annihilates sample points of the twist.
B2 = Fp2(4, 4)

T2 = T_TRACE * T_TRACE - 2 * P
F2 = (4 * P * P - T2 * T2) // 3
F = sympy.integer_nthroot(F2, 2)[0]
assert F * F == F2 and 4 * P * P == T2 * T2 + 3 * F2


def twist_points(count):
    pts = []
    gx2 = 1
    while len(pts) < count:
        xx = Fp2(gx2, gx2 + 3)
        rhs = xx * xx * xx + B2
        y = rhs.sqrt()
        if y is not None:
            pts.append(Point(xx, y))
        gx2 += 1
    return pts


samples = twist_points(3)
N_E2 = None
for tp in ((T2 + 3 * F) // 2, (T2 - 3 * F) // 2, -(T2 + 3 * F) // 2, -(T2 - 3 * F) // 2):
    cand_order = P * P + 1 - tp
    if cand_order % R != 0:
        continue
    if all(ec_mul(q, cand_order, fp2_inv_w).inf for q in samples):
        N_E2 = cand_order
        break
assert N_E2 is not None, "no twist order candidate matched"
H2 = N_E2 // R

gx2 = 1
G2 = None
while True:
    xx = Fp2(gx2)
    rhs = xx * xx * xx + B2
    y = rhs.sqrt()
    if y is not None:
        cand = ec_mul(Point(xx, y), H2, fp2_inv_w)
        if not cand.inf:
            assert ec_mul(cand, R, fp2_inv_w).inf, "G2 generator must have order r"
            G2 = cand
            break
    gx2 += 1

# --- Fr: multiplicative generator and the 2^32 root of unity ---------------
TWO_ADICITY = 0
odd = R - 1
while odd % 2 == 0:
    odd //= 2
    TWO_ADICITY += 1
assert TWO_ADICITY == 32

factors = sympy.factorint(R - 1)
gen = None
for g in range(2, 100):
    if all(pow(g, (R - 1) // q, R) != 1 for q in factors):
        gen = g
        break
assert gen is not None
ROOT32 = pow(gen, (R - 1) // (1 << TWO_ADICITY), R)
assert pow(ROOT32, 1 << TWO_ADICITY, R) == 1
assert pow(ROOT32, 1 << (TWO_ADICITY - 1), R) == R - 1

MIMC_ALPHA = next(a for a in (3, 5, 7, 11) if sympy.gcd(a, R - 1) == 1)

# --- final exponentiation: f -> (conj(f) * f^-1) ^ E2 -----------------------
E2 = (P**2 + 1) * ((P**4 - P**2 + 1) // R)
E2_LIMBS = (E2.bit_length() + 63) // 64

# ---------------------------------------------------------------------------
# Emit the constants header
# ---------------------------------------------------------------------------

hdr = []
hdr.append("// Generated by scripts/gen_curve_constants.py -- do not edit by hand.")
hdr.append("#pragma once")
hdr.append("")
hdr.append("#include <array>")
hdr.append("#include <cstdint>")
hdr.append("")
hdr.append("namespace zkpot::ec::consts {")
hdr.append("")
hdr.append("inline constexpr std::size_t kFpLimbs = 6;")
hdr.append("inline constexpr std::size_t kFrLimbs = 4;")
hdr.append("")
hdr.append(f"inline constexpr std::array<std::uint64_t, 6> kP = {fmt_limbs(P, 6)};")
hdr.append(f"inline constexpr std::array<std::uint64_t, 6> kPR2 = {fmt_limbs(P_R2, 6)};")
hdr.append(f"inline constexpr std::array<std::uint64_t, 6> kPMontOne = {fmt_limbs(P_R, 6)};")
hdr.append(f"inline constexpr std::uint64_t kPInv = 0x{P_INV:016x}ULL;")
hdr.append(f"inline constexpr std::array<std::uint64_t, 6> kPPlus1Div4 = {fmt_limbs((P + 1) // 4, 6)};")
hdr.append(f"inline constexpr std::array<std::uint64_t, 6> kPMinus1Div2 = {fmt_limbs((P - 1) // 2, 6)};")
hdr.append("")
hdr.append(f"inline constexpr std::array<std::uint64_t, 4> kR = {fmt_limbs(R, 4)};")
hdr.append(f"inline constexpr std::array<std::uint64_t, 4> kRR2 = {fmt_limbs(R_R2, 4)};")
hdr.append(f"inline constexpr std::array<std::uint64_t, 4> kRMontOne = {fmt_limbs(R_R, 4)};")
hdr.append(f"inline constexpr std::uint64_t kRInv = 0x{R_INV:016x}ULL;")
hdr.append(f"inline constexpr unsigned kFrTwoAdicity = {TWO_ADICITY};")
hdr.append(f"inline constexpr std::array<std::uint64_t, 4> kFrRootOfUnity = {fmt_limbs(to_mont_r(ROOT32), 4)};  // order 2^32, Montgomery form")
hdr.append(f"inline constexpr unsigned kMimcAlpha = {MIMC_ALPHA};")
hdr.append("")
hdr.append("// Curve coefficients and subgroup generators, Montgomery form.")
hdr.append(f"inline constexpr std::array<std::uint64_t, 6> kG1B = {fmt_limbs(to_mont_p(4), 6)};")
hdr.append(f"inline constexpr std::array<std::uint64_t, 6> kG1GenX = {fmt_limbs(to_mont_p(G1.x.v), 6)};")
hdr.append(f"inline constexpr std::array<std::uint64_t, 6> kG1GenY = {fmt_limbs(to_mont_p(G1.y.v), 6)};")
hdr.append(f"inline constexpr std::array<std::uint64_t, 2> kG1Cofactor = {fmt_limbs(H1, 2)};")
hdr.append("")
hdr.append(f"inline constexpr std::array<std::uint64_t, 6> kG2Bc0 = {fmt_limbs(to_mont_p(4), 6)};")
hdr.append(f"inline constexpr std::array<std::uint64_t, 6> kG2Bc1 = {fmt_limbs(to_mont_p(4), 6)};")
hdr.append(f"inline constexpr std::array<std::uint64_t, 6> kG2GenXc0 = {fmt_limbs(to_mont_p(G2.x.c0), 6)};")
hdr.append(f"inline constexpr std::array<std::uint64_t, 6> kG2GenXc1 = {fmt_limbs(to_mont_p(G2.x.c1), 6)};")
hdr.append(f"inline constexpr std::array<std::uint64_t, 6> kG2GenYc0 = {fmt_limbs(to_mont_p(G2.y.c0), 6)};")
hdr.append(f"inline constexpr std::array<std::uint64_t, 6> kG2GenYc1 = {fmt_limbs(to_mont_p(G2.y.c1), 6)};")
hdr.append("")
hdr.append("// Miller loop runs over |x|; the parameter is negative for this curve.")
hdr.append(f"inline constexpr std::uint64_t kBlsX = 0x{-X:016x}ULL;")
hdr.append("inline constexpr bool kBlsXNegative = true;")
hdr.append("")
hdr.append("// Final exponentiation: with m = conj(f) * f^-1 (the p^6-1 part),")
hdr.append("// the pairing output is m^kFinalExp where kFinalExp = (p^2+1)(p^4-p^2+1)/r.")
hdr.append(f"inline constexpr std::array<std::uint64_t, {E2_LIMBS}> kFinalExp = {fmt_limbs(E2, E2_LIMBS)};")
hdr.append("")
hdr.append("}  // namespace zkpot::ec::consts")
hdr.append("")

with open("include/zkpot/ec/curve_constants.hpp", "w") as f:
    f.write("\n".join(hdr))

# ---------------------------------------------------------------------------
# Frozen test vectors
# ---------------------------------------------------------------------------

rng = random.Random(20240817)

vec = []
vec.append("// Generated by scripts/gen_curve_constants.py -- do not edit by hand.")
vec.append("#pragma once")
vec.append("")
vec.append("#include <array>")
vec.append("#include <cstdint>")
vec.append("")
vec.append("namespace zkpot::testvec {")
vec.append("")


def emit_field_vectors(name, mod, nlimbs, count=24):
    rows = []
    for _ in range(count):
        a = rng.randrange(1, mod)
        b = rng.randrange(1, mod)
        rows.append((a, b, a * b % mod, (a + b) % mod, (a - b) % mod, pow(a, -1, mod)))
    vec.append(f"// a, b, a*b, a+b, a-b, a^-1 (mod {name}), raw little-endian limbs")
    vec.append(f"inline constexpr std::array<std::array<std::array<std::uint64_t, {nlimbs}>, 6>, {count}> k{name}MulVectors = {{{{")
    for row in rows:
        vec.append("    {{" + ", ".join(fmt_limbs(v, nlimbs) for v in row) + "}},")
    vec.append("}};")
    vec.append("")


emit_field_vectors("Fp", P, FP_LIMBS)
emit_field_vectors("Fr", R, FR_LIMBS)

g1_rows = []
for _ in range(8):
    k = rng.randrange(1, R)
    q = ec_mul(G1, k, fp_inv_w)
    g1_rows.append((k, q.x.v, q.y.v))
vec.append("// scalar k, then affine coordinates of k*G1 (raw form)")
vec.append("inline constexpr std::array<std::array<std::uint64_t, 4>, 8> kG1MulScalars = {{")
for k, _, _ in g1_rows:
    vec.append(f"    {fmt_limbs(k, 4)},")
vec.append("}};")
vec.append("inline constexpr std::array<std::array<std::array<std::uint64_t, 6>, 2>, 8> kG1MulPoints = {{")
for _, x, y in g1_rows:
    vec.append("    {{" + fmt_limbs(x, 6) + ", " + fmt_limbs(y, 6) + "}},")
vec.append("}};")
vec.append("")

g2_rows = []
for _ in range(6):
    k = rng.randrange(1, R)
    q = ec_mul(G2, k, fp2_inv_w)
    g2_rows.append((k, q.x, q.y))
vec.append("// scalar k, then affine coordinates (x.c0, x.c1, y.c0, y.c1) of k*G2")
vec.append("inline constexpr std::array<std::array<std::uint64_t, 4>, 6> kG2MulScalars = {{")
for k, _, _ in g2_rows:
    vec.append(f"    {fmt_limbs(k, 4)},")
vec.append("}};")
vec.append("inline constexpr std::array<std::array<std::array<std::uint64_t, 6>, 4>, 6> kG2MulPoints = {{")
for _, x, y in g2_rows:
    vec.append("    {{" + ", ".join(fmt_limbs(v, 6) for v in (x.c0, x.c1, y.c0, y.c1)) + "}},")
vec.append("}};")
vec.append("")
vec.append("}  // namespace zkpot::testvec")
vec.append("")

with open("tests/vectors/ec_vectors.hpp", "w") as f:
    f.write("\n".join(vec))

print(f"p bits={P.bit_length()} r bits={R.bit_length()} h1=0x{H1:x}")
print(f"G1 gen x=0x{G1.x.v:x}")
print(f"G2 gen x=(0x{G2.x.c0:x}, 0x{G2.x.c1:x})")
print(f"Fr generator={gen} mimc_alpha={MIMC_ALPHA} final_exp_limbs={E2_LIMBS}")
print("wrote include/zkpot/ec/curve_constants.hpp, tests/vectors/ec_vectors.hpp")
