#include "zkpot/ec/fft.hpp"

#include <stdexcept>

namespace zkpot::ec {

FftDomain::FftDomain(std::size_t min_size) {
    if (min_size == 0) min_size = 1;
    while (size_ < min_size) {
        size_ <<= 1;
        ++log_size_;
    }
    if (log_size_ > consts::kFrTwoAdicity) throw std::length_error("domain too large for field");
    Fr root = Fr::from_mont_limbs(consts::kFrRootOfUnity);
    for (unsigned i = consts::kFrTwoAdicity; i > log_size_; --i) root = root.square();
    omega_ = root;
    omega_inv_ = root.inverse();
    size_inv_ = Fr::from_u64(size_).inverse();
}

void FftDomain::transform(std::span<Fr> a, const Fr& root) const {
    const std::size_t n = size_;
    if (a.size() != n) throw std::invalid_argument("fft input size mismatch");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        Fr wlen = root;
        for (std::size_t l = len; l < n; l <<= 1) wlen = wlen.square();
        const std::size_t half = len >> 1;
        const long long blocks = static_cast<long long>(n / len);
#pragma omp parallel for schedule(static) if (n >= 8192)
        for (long long blk = 0; blk < blocks; ++blk) {
            std::size_t base = static_cast<std::size_t>(blk) * len;
            Fr w = Fr::one();
            for (std::size_t k = 0; k < half; ++k) {
                Fr u = a[base + k];
                Fr v = a[base + k + half] * w;
                a[base + k] = u + v;
                a[base + k + half] = u - v;
                w *= wlen;
            }
        }
    }
}

void FftDomain::ifft(std::span<Fr> a) const {
    transform(a, omega_inv_);
    for (auto& x : a) x *= size_inv_;
}

void FftDomain::coset_fft(std::span<Fr> a) const {
    Fr shift = coset_shift();
    Fr cur = Fr::one();
    for (auto& x : a) {
        x *= cur;
        cur *= shift;
    }
    fft(a);
}

void FftDomain::coset_ifft(std::span<Fr> a) const {
    ifft(a);
    Fr shift_inv = coset_shift().inverse();
    Fr cur = Fr::one();
    for (auto& x : a) {
        x *= cur;
        cur *= shift_inv;
    }
}

Fr FftDomain::coset_vanishing_value() const {
    std::array<std::uint64_t, 1> n{size_};
    return coset_shift().pow(n) - Fr::one();
}

std::vector<Fr> naive_dft(std::span<const Fr> a, bool inverse) {
    FftDomain dom(a.size());
    if (dom.size() != a.size()) throw std::invalid_argument("naive_dft needs power-of-two input");
    Fr root = inverse ? dom.group_gen().inverse() : dom.group_gen();
    std::vector<Fr> out(a.size(), Fr::zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Fr wi = Fr::one();
        Fr w_step = root.pow(std::array<std::uint64_t, 1>{i});
        for (std::size_t j = 0; j < a.size(); ++j) {
            out[i] += a[j] * wi;
            wi *= w_step;
        }
    }
    if (inverse) {
        Fr ninv = Fr::from_u64(a.size()).inverse();
        for (auto& x : out) x *= ninv;
    }
    return out;
}

}  // namespace zkpot::ec
