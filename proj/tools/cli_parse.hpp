#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ktinv/analysis.hpp"
#include "ktinv/kt_core.hpp"
#include "ktinv/se2.hpp"

namespace ktinv::cli {

/// Malformed command-line input (exit code 64).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep);

/// Real literal: decimal, p/q, sqrt(n), pi, pi/m, with optional leading minus.
double parse_real(const std::string& token);

/// k value keeping the literal as its label; k = 0 is left to the library.
KValue parse_k(const std::string& token);
std::vector<KValue> parse_k_list(const std::string& list);

/// metric | polar:a,b | eh:ell | cart:phi | raw:b1,b2,b3,b4,b5,b6
KtParams parse_tensor(const std::string& literal);

/// p1,p2,p3
SE2Element parse_group_element(const std::string& literal);

}  // namespace ktinv::cli
