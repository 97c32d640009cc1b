#pragma once
// Regression data: arrow chains and exact h-evaluations displayed in the
// source proofs, copied as written.

#include <string>
#include <vector>

namespace corpus {

struct Chain {
  const char* start;                // q^g
  std::vector<const char*> steps;   // squarefree m_i, as products
  const char* target;               // p^f
  // Set when a link fails as printed; the corrected chain inserts the missing step.
  std::vector<const char*> corrected_steps = {};
  const char* note = nullptr;
};

inline const std::vector<Chain>& chains() {
  static const std::vector<Chain> c = {
      {"5^7", {"19531"}, "3^2"},
      {"5^11", {"12207031", "521"}, "13"},
      {"5^13", {"305175781"}, "3^2"},
      {"5^17", {"409*466344409"}, "3^2"},
      {"5^19", {"191", "19"}, "3"},
      {"5^19", {"6271"}, "3"},
      {"5^23", {"332207361361"}, "3^2"},
      {"7^3", {}, "3^2"},
      {"7^7", {"4733"}, "3", {"4733", "13"}, "4733 - 1 = 2^2*7*13^2 has no factor 3; the 3 comes from 13 - 1"},
      {"7^11", {"1123"}, "3"},
      {"7^17", {"2767631689"}, "3^2"},
      {"7^19", {"419", "19"}, "3^2"},
      {"7", {}, "3"},
      {"7^4", {}, "5^2"},
      {"7^5", {"2801"}, "5^2"},
      {"7^13", {"16148168401"}, "5^2"},
  };
  return c;
}

// Forced prime powers reached by combining several chains (closure, not a
// single chain): 5^11 gives 12207031 and 13, and 13*12207031 -> 3^2.
struct Forced {
  const char* seed;
  unsigned depth;
  const char* target;
};

inline const std::vector<Forced>& closures() {
  static const std::vector<Forced> c = {
      {"5^7", 2, "3^2"},   {"5^11", 4, "3^2"}, {"5^13", 2, "3^2"}, {"5^17", 2, "3^2"},
      {"5^19", 3, "3"},    {"5^23", 2, "3^2"}, {"7^3", 1, "3^2"},  {"7^7", 3, "3^2"},
      {"7^11", 2, "3"},    {"7^17", 2, "3^2"}, {"7^19", 3, "3^2"}, {"7", 1, "3"},
      {"7^4", 1, "5^2"},   {"7^5", 2, "5^2"},  {"7^13", 2, "5^2"}, {"5^11", 3, "13"},
  };
  return c;
}

enum class Rel { Less, Greater, Equal };

// h(expr) rel bound. `expr` is the displayed product (bases need not be prime).
// `corrected` is set when the display cannot hold as printed and an obvious
// single-factor correction exists.
struct Inequality {
  const char* expr;
  Rel rel;
  const char* bound;
  const char* corrected = nullptr;
  const char* note = nullptr;
};

inline const std::vector<Inequality>& h_displays() {
  static const std::vector<Inequality> c = {
      {"2^5*3*5*7*11*13*17", Rel::Less, "3"},
      {"2^5*5*7*11*13*17", Rel::Less, "2"},
      {"2^6*5*7*11*13*17*19", Rel::Less, "2"},
      {"2^7*3^2*5*7*17*19*23", Rel::Less, "2"},
      {"2^7*3*13*17*23*29*47", Rel::Less, "2"},
      {"2^9*3*7*17*29*59*113", Rel::Less, "2"},
      {"2^6*3*5*29*59*113*127", Rel::Less, "2", "2^6*3*7*29*59*113*127",
       "case p_2 = 7, so 5 does not divide N; the display has 5 in place of 7"},
      {"2^9*3*5^2*11*17*23*29", Rel::Less, "2"},
      {"2^8*3*5^3*13*17*19*23", Rel::Less, "2"},
      {"2^8*3*5^3*7^2*11*17*23", Rel::Less, "2"},
      {"2^8*3*5^3*7*23*29*41", Rel::Less, "2"},
      {"2^8*3*5^3*7*11^2*17*23", Rel::Less, "2"},
      {"3*5^3*7*11*29", Rel::Greater, "2"},
      {"2^9*3*5^3*7*11*41*281", Rel::Greater, "2"},
      {"2^10*3*5^3*7*11*41*257", Rel::Less, "2"},
      {"2^8*3*5^3*7*11*71*89", Rel::Less, "2"},
      {"2^8*3*5^5*11*13*17*71", Rel::Less, "2"},
      {"2^8*3*5^5*7*11*53*71", Rel::Less, "2"},
      {"2^8*3*5^5*7*11*17^2*71", Rel::Less, "2"},
      {"3*7*11*41*71", Rel::Greater, "2"},
      {"105", Rel::Greater, "2"},
      {"2^10*3*5*7^2*71*73*77", Rel::Less, "2", "2^10*3*5*7^2*71*73*79",
       "77 is not prime; the next prime after 73 is 79"},
      {"3*5*7^2*17", Rel::Greater, "2"},
      {"2^12*3*5*7^2*29*197*281", Rel::Greater, "2"},
      {"2^13*3*5*7^2*29*197*281", Rel::Less, "2"},
      {"3*5*13", Rel::Greater, "2"},
      {"3*5*13", Rel::Equal, "195/96"},
      {"2^11*3*5*11^2*23*89", Rel::Equal, "2"},
      {"3*5*17*251", Rel::Greater, "2"},
      {"2^11*3*5*17*769*1021*1031", Rel::Less, "2"},
  };
  return c;
}

// Products of p/(p-1) factors written out as fractions, with the stated value
// or bound.
struct FractionProduct {
  std::vector<const char*> factors;
  Rel rel;
  const char* bound;
};

inline const std::vector<FractionProduct>& fraction_displays() {
  static const std::vector<FractionProduct> c = {
      {{"2", "3/2"}, Rel::Equal, "3"},
      {{"4/3", "3/2"}, Rel::Equal, "2"},
      {{"4/3", "3/2", "7/6"}, Rel::Equal, "7/3"},
      {{"4/3", "3/2", "7/6"}, Rel::Less, "3"},
      {{"8/7", "3/2", "7/6", "11/10"}, Rel::Equal, "11/5"},
      {{"8/7", "3/2", "7/6", "11/10"}, Rel::Less, "3"},
      {{"16/15", "3/2", "7/6", "11/10", "19/18"}, Rel::Less, "3"},
      {{"8/7", "3/2", "5/4"}, Rel::Equal, "15/7"},
      {{"8/7", "3/2", "5/4"}, Rel::Less, "3"},
      {{"8/7", "3/2", "7/6"}, Rel::Equal, "2"},
      {{"16/15", "3/2", "5/4"}, Rel::Equal, "2"},
      {{"16/15", "3/2", "5/4", "7/6"}, Rel::Equal, "7/3"},
      {{"16/15", "3/2", "5/4", "7/6"}, Rel::Less, "3"},
      {{"32/31", "3/2", "5/4", "7/6", "11/10", "13/12", "17/16"}, Rel::Less, "3"},
  };
  return c;
}

}  // namespace corpus
