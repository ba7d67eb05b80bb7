#pragma once

#include <vector>

#include "zkpot/ec/fields.hpp"

namespace zkpot::ec {

// Radix-2 evaluation domain over Fr (two-adicity 32).
class FftDomain {
public:
    explicit FftDomain(std::size_t min_size);

    std::size_t size() const { return size_; }
    unsigned log_size() const { return log_size_; }
    Fr group_gen() const { return omega_; }

    // In-place (inverse) FFT; input length must equal size().
    void fft(std::span<Fr> a) const { transform(a, omega_); }
    void ifft(std::span<Fr> a) const;

    // Evaluate/interpolate over the coset shift*H, shift = multiplicative
    // generator 7. The vanishing polynomial X^n - 1 is the nonzero constant
    // shift^n - 1 on that coset.
    void coset_fft(std::span<Fr> a) const;
    void coset_ifft(std::span<Fr> a) const;
    Fr coset_vanishing_value() const;

    static Fr coset_shift() { return Fr::from_u64(7); }

private:
    void transform(std::span<Fr> a, const Fr& root) const;

    std::size_t size_ = 1;
    unsigned log_size_ = 0;
    Fr omega_;
    Fr omega_inv_;
    Fr size_inv_;
};

// Quadratic-time reference DFT used by tests as the independent oracle.
std::vector<Fr> naive_dft(std::span<const Fr> a, bool inverse);

}  // namespace zkpot::ec
