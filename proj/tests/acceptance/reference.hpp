#pragma once
// Published reference values, copied as printed.

#include <cstdint>
#include <map>
#include <vector>

namespace reference {

inline const std::vector<const char*> known = {
    "1",
    "2",
    "2*3",
    "2^2*3",
    "2^3*3*7",
    "2^4*3*5",
    "2^5*3*5*31",
    "2^8*3*5*17",
    "2^11*3*5*11^2*23*89",
    "2^16*3*5*17*257",
    "2^17*3*5*17*257*131071",
    "2^32*3*5*17*257*65537",
};

inline std::vector<std::uint64_t> upto(std::uint64_t n, std::vector<std::uint64_t> more) {
  std::vector<std::uint64_t> v;
  for (std::uint64_t k = 1; k <= n; ++k) v.push_back(k);
  v.insert(v.end(), more.begin(), more.end());
  return v;
}

// k with P(2^k - 1) < 10^5 ("k <= 16 or k in {...}").
inline const std::vector<std::uint64_t> exponents_1e5 =
    upto(16, {18, 20, 21, 22, 24, 25, 26, 28, 29, 30, 32, 36, 40, 42, 44, 45, 48, 50, 52, 60, 84});

// k with P(2^k - 1) < 10^8 ("k <= 30 or k in {...}").
inline const std::vector<std::uint64_t> exponents_1e8 =
    upto(30, {32, 33, 34, 35, 36, 38, 39, 40, 42, 43, 44, 45, 46, 47, 48, 50, 51, 52, 53, 54, 55, 56, 57, 58, 60,
              63, 64, 66, 68, 70, 72, 75, 76, 78, 81, 84, 90, 92, 96, 100, 102, 105, 108, 110, 132, 140, 156, 180,
              210});

// Primes p < 10^5 with P(p^k - 1) < 10^5, by k.
inline const std::map<unsigned, std::vector<std::uint64_t>> table_rows = {
    {7, {2, 3, 5, 7, 11, 19, 59, 79, 269, 359}},
    {8, {3,     5,     7,     11,    13,    17,    19,    31,    37,    41,    43,    47,    59,    67,    79,
         83,    107,   127,   137,   149,   223,   227,   233,   239,   263,   269,   271,   359,   389,   401,
         499,   563,   571,   587,   617,   773,   809,   823,   881,   971,   1061,  1091,  1201,  1213,  1319,
         1487,  1579,  1637,  1657,  1669,  1783,  1907,  2351,  2383,  2399,  2677,  2741,  3109,  3163,  3373,
         3631,  3847,  3851,  4877,  5167,  6451,  7237,  7699,  8081,  9239,  9397,  9733,  10099, 10181, 10691,
         11483, 12721, 14051, 14149, 15427, 16067, 16607, 16987, 18979, 19531, 20129, 25253, 25633, 27073, 35837,
         37783, 41893, 42391, 46327, 46889, 47041, 49253, 53831, 57173, 58013, 60101, 62497, 65951, 66541, 69457,
         75931, 82241, 82261, 84229, 87721, 88339, 88819, 91499, 92333, 95917, 99523}},
    {9, {2, 3, 5, 7, 19, 29, 31, 37, 43, 53, 379, 1019, 63599}},
    {10, {3, 5, 7, 11, 13, 17, 19, 31, 53, 67, 113, 197, 421, 569}},
    {12, {3,   5,   7,   11,  13,  17,  19,  23,  29,  41,  47,  53,   73,   79,   89,    97,    101,   103,  113,  137,  139,  197,
          251, 271, 307, 367, 389, 397, 401, 421, 467, 479, 487, 907, 1013, 1319, 1451, 1627, 1697, 3083, 4027, 22051, 30977, 52889}},
    {20, {3, 5, 7, 13, 17}},
};
inline constexpr std::size_t k8_claimed_count = 116;
inline constexpr std::size_t k5_claimed_count = 125;

inline const char* q_minus_one_210 = "2^35*3^20*5^15*7^15*11*23*43*113*127*139*181*439*1231";

// Values where N equals 2^(2^(r+1)) - 2^(2^r), as listed.
inline const std::vector<const char*> cooper_equality = {"2", "12", "240", "65280", "18446744069414584320"};

}  // namespace reference
