#pragma once

#include "pddlsim/pddl.hpp"

#include <string>
#include <vector>

namespace pddlsim {

// A fully instantiated action. Atom vectors are sorted and duplicate-free.
struct GroundAction {
    std::string name;
    std::vector<std::string> args;
    std::string signature; // "(name arg1 ... argk)"
    std::vector<Atom> pre_pos;
    std::vector<Atom> pre_neg;
    std::vector<Atom> adds;
    std::vector<Atom> dels;
};

// Instantiates every schema over every type-consistent object tuple.
// "=" preconditions are resolved here: instantiations violating one are
// dropped. Result is sorted by (name, args) and deterministic.
std::vector<GroundAction> ground(const Domain& domain, const Problem& problem);

} // namespace pddlsim
