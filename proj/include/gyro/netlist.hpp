#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gyro/system.hpp"

namespace gyro {

/// One loop of the circuit description: inductance L (> 0, required for
/// compilation), self capacitance C (> 0) and resistance R (>= 0) optional.
struct LoopDecl {
    int index = 0;
    std::optional<double> l;
    std::optional<double> c;
    std::optional<double> r;
    bool operator==(const LoopDecl&) const = default;
};

/// Pairwise coupling between loops i < j: coupling capacitance C (> 0)
/// and/or gyration coefficient G.
struct CouplingDecl {
    int i = 0;
    int j = 0;
    std::optional<double> c;
    std::optional<double> g;
    bool operator==(const CouplingDecl&) const = default;
};

struct Netlist {
    std::vector<LoopDecl> loops;
    std::vector<CouplingDecl> couplings;
    bool operator==(const Netlist&) const = default;
};

/// Parses the loop-based circuit description:
///   netlist := (loopdecl | coupledecl)*
///   loopdecl := "loop" INT "{" elem* "}"
///   coupledecl := "couple" INT INT "{" elem* "}"
///   elem := ("L"|"C"|"R"|"G") NUMBER   ("G" only in couple, "L" only in loop)
/// '#' starts a comment; whitespace is insignificant. Loop indices must be
/// contiguous from 1; at most one coupling per unordered pair.
Netlist parse_netlist(std::string_view text);

/// Circuit-to-Lagrangian compilation: alpha = diag(L_i), eta from the 1/C
/// terms (Laplacian-plus-diagonal), theta from the gyration coefficients,
/// r = diag(R_i). beta stays an external analysis parameter scaling r.
LagrangianSystem compile_netlist(const Netlist& nl);

/// Canonical text form; parse(emit(nl)) == nl with bit-exact numbers.
std::string emit_netlist(const Netlist& nl);

}  // namespace gyro
