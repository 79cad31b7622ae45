#pragma once

#include "cqinterp/quadform.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace cqi {

// Sum of coeff * form^2 terms plus a nonnegative constant. Forms are affine;
// when a term comes from completing the square on a variable, `pivot` names it
// and `form` is (pivot - l) with l over the variables after it in the
// elimination order.
struct SosSquare {
    Rat coeff;       // > 0 for stored squares
    Polynomial form; // affine
    std::string pivot;
};

struct SosDecomposition {
    std::vector<SosSquare> squares;
    Rat constant{0};

    Polynomial reconstruct() const;
    bool is_zero() const { return squares.empty() && constant == 0; }
};

struct NotSos {
    std::map<std::string, Rat> witness; // point with value < 0
};

using SosResult = std::variant<SosDecomposition, NotSos>;

// Sequential completing-the-square in the given pivot order (remaining
// variables of h that are absent from `order` are appended in name order).
// Succeeds exactly when h is a sum of squares; otherwise returns an exact
// witness point where h evaluates negative.
SosResult complete_squares(const Polynomial& h, const std::vector<std::string>& order);

// Degree-2 SOS decision through the bordered Gram matrix.
SosResult check_sos_exact(const Polynomial& p);

struct MixedTermPresent : std::runtime_error {
    explicit MixedTermPresent(const std::string& w) : std::runtime_error(w) {}
};

// h = h1 + h2 with h1 over x∪y, h2 over x∪z; y-squares go to h1, z-squares to
// h2, x-squares and the constant split in half. Requires h SOS with no y_i z_j
// monomial.
struct SosSplit {
    SosDecomposition h1, h2;
};
SosSplit split_sos(const Polynomial& h,
                   const std::vector<std::string>& x,
                   const std::vector<std::string>& y,
                   const std::vector<std::string>& z);

} // namespace cqi
