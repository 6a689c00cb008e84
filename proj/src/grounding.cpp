#include "pddlsim/grounding.hpp"

#include <algorithm>
#include <map>

namespace pddlsim {
namespace {

void sort_unique(std::vector<Atom>& atoms) {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

Atom substitute(const Literal& lit, const std::map<std::string, std::string>& binding) {
    Atom atom;
    atom.pred = lit.pred;
    atom.args.reserve(lit.args.size());
    for (const auto& term : lit.args) {
        auto it = binding.find(term);
        atom.args.push_back(it != binding.end() ? it->second : term);
    }
    return atom;
}

} // namespace

std::vector<GroundAction> ground(const Domain& domain, const Problem& problem) {
    const std::vector<TypedName> objects = problem.all_objects(domain);
    std::vector<GroundAction> result;

    for (const auto& schema : domain.actions) {
        // Candidate objects per parameter, honoring the type hierarchy.
        std::vector<std::vector<const TypedName*>> candidates(schema.params.size());
        for (std::size_t i = 0; i < schema.params.size(); ++i)
            for (const auto& obj : objects)
                if (domain.is_subtype(obj.type, schema.params[i].type))
                    candidates[i].push_back(&obj);

        std::vector<std::size_t> cursor(schema.params.size(), 0);
        bool exhausted = std::any_of(candidates.begin(), candidates.end(),
                                     [](const auto& c) { return c.empty(); });
        while (!exhausted) {
            std::map<std::string, std::string> binding;
            for (std::size_t i = 0; i < schema.params.size(); ++i)
                binding[schema.params[i].name] = candidates[i][cursor[i]]->name;

            GroundAction ga;
            ga.name = schema.name;
            for (std::size_t i = 0; i < schema.params.size(); ++i)
                ga.args.push_back(candidates[i][cursor[i]]->name);

            bool equality_ok = true;
            for (const auto& lit : schema.precondition) {
                if (lit.pred == "=") {
                    Atom resolved = substitute(lit, binding);
                    bool equal = resolved.args[0] == resolved.args[1];
                    if (equal != lit.positive) {
                        equality_ok = false;
                        break;
                    }
                    continue;
                }
                (lit.positive ? ga.pre_pos : ga.pre_neg).push_back(substitute(lit, binding));
            }
            if (equality_ok) {
                for (const auto& lit : schema.add_effects) ga.adds.push_back(substitute(lit, binding));
                for (const auto& lit : schema.delete_effects) ga.dels.push_back(substitute(lit, binding));
                sort_unique(ga.pre_pos);
                sort_unique(ga.pre_neg);
                sort_unique(ga.adds);
                sort_unique(ga.dels);
                ga.signature = make_signature(ga.name, ga.args);
                result.push_back(std::move(ga));
            }

            // Advance the odometer over candidate tuples.
            std::size_t i = schema.params.size();
            for (;;) {
                if (i == 0) {
                    exhausted = true;
                    break;
                }
                --i;
                if (++cursor[i] < candidates[i].size()) break;
                cursor[i] = 0;
            }
        }
    }

    std::sort(result.begin(), result.end(), [](const GroundAction& a, const GroundAction& b) {
        if (a.name != b.name) return a.name < b.name;
        return a.args < b.args;
    });
    return result;
}

} // namespace pddlsim
