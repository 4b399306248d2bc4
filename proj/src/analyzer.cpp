#include "xdnp/analyzer.hpp"

#include <utility>

namespace xdnp {

DnfPredicate normalize(const Rule& rule) {
    DnfPredicate predicate;
    Clause clause;
    for (const Condition& cond : rule.conditions) {
        if (cond.connector == Connector::Or && !clause.all_of.empty()) {
            predicate.any_of.push_back(std::move(clause));
            clause = {};
        }
        clause.all_of.push_back({cond.field, cond.value});
    }
    if (!clause.all_of.empty()) predicate.any_of.push_back(std::move(clause));
    return predicate;
}

std::vector<Diagnostic> unsatisfiable_clause_warnings(const Rule& rule) {
    std::vector<Diagnostic> warnings;
    const DnfPredicate predicate = normalize(rule);
    for (std::size_t ci = 0; ci < predicate.any_of.size(); ++ci) {
        const auto& atoms = predicate.any_of[ci].all_of;
        bool conflict = false;
        for (std::size_t i = 0; i < atoms.size() && !conflict; ++i) {
            for (std::size_t j = i + 1; j < atoms.size() && !conflict; ++j) {
                conflict = atoms[i].field == atoms[j].field && atoms[i].value != atoms[j].value;
            }
        }
        if (conflict) {
            warnings.push_back({Severity::Warning,
                                "clause " + std::to_string(ci + 1) +
                                    " requires two different values for the same field "
                                    "and can never match",
                                rule.span});
        }
    }
    return warnings;
}

CompileResult compile(const Policy& policy, DefaultAction default_action) {
    CompileResult result;
    result.diagnostics = validate(policy);
    for (const Rule& rule : policy.rules) {
        std::vector<Diagnostic> warnings = unsatisfiable_clause_warnings(rule);
        result.diagnostics.insert(result.diagnostics.end(), warnings.begin(), warnings.end());
    }
    if (has_errors(result.diagnostics)) return result;

    CompiledPolicy compiled;
    compiled.name = policy.name;
    compiled.default_action = default_action;
    const int n = static_cast<int>(policy.rules.size());
    for (int i = 0; i < n; ++i) {
        compiled.entries.push_back({n - i, normalize(policy.rules[i]), policy.rules[i].action});
    }
    result.policy = std::move(compiled);
    return result;
}

}  // namespace xdnp
