#include "zkpot/ec/pairing.hpp"

#include <stdexcept>

namespace zkpot::ec {

namespace {

// Sparse Fp12 embeddings. Fp12 = Fp6[w]/(w^2 - v), Fp6 = Fp2[v]/(v^3 - xi),
// so w^6 = xi and the sextic twist (x', y') on y^2 = x^3 + 4*xi untwists to
// (x'/w^2, y'/w^3) on y^2 = x^3 + 4 over Fp12.
Fp12 embed_fp2(const Fp2& a) {
    Fp12 r = Fp12::zero();
    r.c0.c0 = a;
    return r;
}

Fp12 embed_fp(const Fp& a) { return embed_fp2({a, Fp::zero()}); }

const Fp12& w2_inv() {
    static const Fp12 val = [] {
        Fp12 w2 = Fp12::zero();
        w2.c0.c1 = Fp2::one();  // w^2 = v
        return w2.inverse();
    }();
    return val;
}

const Fp12& w3_inv() {
    static const Fp12 val = [] {
        Fp12 w3 = Fp12::zero();
        w3.c1.c1 = Fp2::one();  // w^3 = v*w
        return w3.inverse();
    }();
    return val;
}

struct PointF12 {
    Fp12 x, y;
};

// Line through t (doubling) or through t and q (addition), evaluated at p.
Fp12 line_double(PointF12& t, const Fp12& px, const Fp12& py) {
    Fp12 xx = t.x.square();
    Fp12 lambda = (xx + xx + xx) * (t.y + t.y).inverse();
    Fp12 l = (py - t.y) - lambda * (px - t.x);
    Fp12 x3 = lambda.square() - t.x - t.x;
    Fp12 y3 = lambda * (t.x - x3) - t.y;
    t = {x3, y3};
    return l;
}

Fp12 line_add(PointF12& t, const PointF12& q, const Fp12& px, const Fp12& py) {
    if (t.x == q.x) throw std::logic_error("degenerate addition in miller loop");
    Fp12 lambda = (q.y - t.y) * (q.x - t.x).inverse();
    Fp12 l = (py - q.y) - lambda * (px - q.x);
    Fp12 x3 = lambda.square() - t.x - q.x;
    Fp12 y3 = lambda * (t.x - x3) - t.y;
    t = {x3, y3};
    return l;
}

}  // namespace

Fp12 miller_loop(const G1Affine& p, const G2Affine& q) {
    if (p.infinity || q.infinity) return Fp12::one();

    const Fp12 px = embed_fp(p.x);
    const Fp12 py = embed_fp(p.y);
    const PointF12 q12{embed_fp2(q.x) * w2_inv(), embed_fp2(q.y) * w3_inv()};

    PointF12 t = q12;
    Fp12 f = Fp12::one();

    const std::uint64_t x = consts::kBlsX;
    int top = 63;
    while (top >= 0 && !((x >> top) & 1)) --top;
    for (int i = top - 1; i >= 0; --i) {
        f = f.square() * line_double(t, px, py);
        if ((x >> i) & 1) f = f * line_add(t, q12, px, py);
    }
    if (consts::kBlsXNegative) f = f.conjugate();
    return f;
}

Fp12 final_exponentiation(const Fp12& f) {
    // Easy part f^(p^6 - 1) via conjugation, then one big exponentiation by
    // (p^2 + 1)(p^4 - p^2 + 1)/r.
    Fp12 m = f.conjugate() * f.inverse();
    return m.pow(consts::kFinalExp);
}

Fp12 pairing(const G1Affine& p, const G2Affine& q) {
    return final_exponentiation(miller_loop(p, q));
}

}  // namespace zkpot::ec
