// Generated by scripts/gen_curve_constants.py -- do not edit by hand.
#pragma once

#include <array>
#include <cstdint>

namespace zkpot::ec::consts {

inline constexpr std::size_t kFpLimbs = 6;
inline constexpr std::size_t kFrLimbs = 4;

inline constexpr std::array<std::uint64_t, 6> kP = {0xb9feffffffffaaabULL, 0x1eabfffeb153ffffULL, 0x6730d2a0f6b0f624ULL, 0x64774b84f38512bfULL, 0x4b1ba7b6434bacd7ULL, 0x1a0111ea397fe69aULL};
inline constexpr std::array<std::uint64_t, 6> kPR2 = {0xf4df1f341c341746ULL, 0x0a76e6a609d104f1ULL, 0x8de5476c4c95b6d5ULL, 0x67eb88a9939d83c0ULL, 0x9a793e85b519952dULL, 0x11988fe592cae3aaULL};
inline constexpr std::array<std::uint64_t, 6> kPMontOne = {0x760900000002fffdULL, 0xebf4000bc40c0002ULL, 0x5f48985753c758baULL, 0x77ce585370525745ULL, 0x5c071a97a256ec6dULL, 0x15f65ec3fa80e493ULL};
inline constexpr std::uint64_t kPInv = 0x89f3fffcfffcfffdULL;
inline constexpr std::array<std::uint64_t, 6> kPPlus1Div4 = {0xee7fbfffffffeaabULL, 0x07aaffffac54ffffULL, 0xd9cc34a83dac3d89ULL, 0xd91dd2e13ce144afULL, 0x92c6e9ed90d2eb35ULL, 0x0680447a8e5ff9a6ULL};
inline constexpr std::array<std::uint64_t, 6> kPMinus1Div2 = {0xdcff7fffffffd555ULL, 0x0f55ffff58a9ffffULL, 0xb39869507b587b12ULL, 0xb23ba5c279c2895fULL, 0x258dd3db21a5d66bULL, 0x0d0088f51cbff34dULL};

inline constexpr std::array<std::uint64_t, 4> kR = {0xffffffff00000001ULL, 0x53bda402fffe5bfeULL, 0x3339d80809a1d805ULL, 0x73eda753299d7d48ULL};
inline constexpr std::array<std::uint64_t, 4> kRR2 = {0xc999e990f3f29c6dULL, 0x2b6cedcb87925c23ULL, 0x05d314967254398fULL, 0x0748d9d99f59ff11ULL};
inline constexpr std::array<std::uint64_t, 4> kRMontOne = {0x00000001fffffffeULL, 0x5884b7fa00034802ULL, 0x998c4fefecbc4ff5ULL, 0x1824b159acc5056fULL};
inline constexpr std::uint64_t kRInv = 0xfffffffeffffffffULL;
inline constexpr unsigned kFrTwoAdicity = 32;
inline constexpr std::array<std::uint64_t, 4> kFrRootOfUnity = {0xb9b58d8c5f0e466aULL, 0x5b1b4c801819d7ecULL, 0x0af53ae352a31e64ULL, 0x5bf3adda19e9b27bULL};  // order 2^32, Montgomery form
inline constexpr unsigned kMimcAlpha = 5;

// Curve coefficients and subgroup generators, Montgomery form.
inline constexpr std::array<std::uint64_t, 6> kG1B = {0xaa270000000cfff3ULL, 0x53cc0032fc34000aULL, 0x478fe97a6b0a807fULL, 0xb1d37ebee6ba24d7ULL, 0x8ec9733bbf78ab2fULL, 0x09d645513d83de7eULL};
inline constexpr std::array<std::uint64_t, 6> kG1GenX = {0x5cb38790fd530c16ULL, 0x7817fc679976fff5ULL, 0x154f95c7143ba1c1ULL, 0xf0ae6acdf3d0e747ULL, 0xedce6ecc21dbf440ULL, 0x120177419e0bfb75ULL};
inline constexpr std::array<std::uint64_t, 6> kG1GenY = {0xbaac93d50ce72271ULL, 0x8c22631a7918fd8eULL, 0xdd595f13570725ceULL, 0x51ac582950405194ULL, 0x0e1c8c3fad0059c0ULL, 0x0bbc3efc5008a26aULL};
inline constexpr std::array<std::uint64_t, 2> kG1Cofactor = {0x8c00aaab0000aaabULL, 0x396c8c005555e156ULL};

inline constexpr std::array<std::uint64_t, 6> kG2Bc0 = {0xaa270000000cfff3ULL, 0x53cc0032fc34000aULL, 0x478fe97a6b0a807fULL, 0xb1d37ebee6ba24d7ULL, 0x8ec9733bbf78ab2fULL, 0x09d645513d83de7eULL};
inline constexpr std::array<std::uint64_t, 6> kG2Bc1 = {0xaa270000000cfff3ULL, 0x53cc0032fc34000aULL, 0x478fe97a6b0a807fULL, 0xb1d37ebee6ba24d7ULL, 0x8ec9733bbf78ab2fULL, 0x09d645513d83de7eULL};
inline constexpr std::array<std::uint64_t, 6> kG2GenXc0 = {0xf5f28fa202940a10ULL, 0xb3f5fb2687b4961aULL, 0xa1a893b53e2ae580ULL, 0x9894999d1a3caee9ULL, 0x6f67b7631863366bULL, 0x058191924350bcd7ULL};
inline constexpr std::array<std::uint64_t, 6> kG2GenXc1 = {0xa5a9c0759e23f606ULL, 0xaaa0c59dbccd60c3ULL, 0x3bb17e18e2867806ULL, 0x1b1ab6cc8541b367ULL, 0xc2b6ed0ef2158547ULL, 0x11922a097360edf3ULL};
inline constexpr std::array<std::uint64_t, 6> kG2GenYc0 = {0x6d8bf5079fb65e61ULL, 0xc52f05df531d63a5ULL, 0x7f4a4d344ca692c9ULL, 0xa887959b8577c95fULL, 0x4347fe40525c8734ULL, 0x197d145bbaff0bb5ULL};
inline constexpr std::array<std::uint64_t, 6> kG2GenYc1 = {0x0c3e036d209afa4eULL, 0x0601d8f4863f9e23ULL, 0xe0832636bacc0a84ULL, 0xeb2def362a476f84ULL, 0x64044f659f0ee1e9ULL, 0x0ed54f48d5a1caa7ULL};

// Miller loop runs over |x|; the parameter is negative for this curve.
inline constexpr std::uint64_t kBlsX = 0xd201000000010000ULL;
inline constexpr bool kBlsXNegative = true;

// Final exponentiation: with m = conj(f) * f^-1 (the p^6-1 part),
// the pairing output is m^kFinalExp where kFinalExp = (p^2+1)(p^4-p^2+1)/r.
inline constexpr std::array<std::uint64_t, 32> kFinalExp = {0x8739e1cdc0705d6aULL, 0x09a5256de0381a16ULL, 0x9cf0f70a61c791e2ULL, 0x3a09c4497903f76eULL, 0x2d7271563890f133ULL, 0x224741b36fec7760ULL, 0x338259c22a12bd40ULL, 0x38ee1cd4778e0de7ULL, 0xc3b5ef4b188a20b0ULL, 0x1d615d49e2764d7bULL, 0x816101ddd076117dULL, 0xf007c01e7ebe3afcULL, 0x27d7bd90935021c3ULL, 0xc3b5e2f557c0b15fULL, 0x5e886c94c4f82384ULL, 0xee6a95db11e63f56ULL, 0x2b822f514a9c4f6fULL, 0x12d6a874d21b73daULL, 0x1304275ef499dffbULL, 0x967878febcb95d1fULL, 0x4744497f8b2f2922ULL, 0x85a2e707f0841855ULL, 0x9f0c50126c802eecULL, 0xfb46e197bd2fa489ULL, 0x548ce0809bc5f61aULL, 0xcf56fb1573beaa8cULL, 0xad7375a3763bdf7cULL, 0xe0ec9031179bdeccULL, 0x6579aea83c48c1daULL, 0xdbf85ae664cf5bb3ULL, 0x7b6f235c55ca7566ULL, 0x000028b314877503ULL};

}  // namespace zkpot::ec::consts
