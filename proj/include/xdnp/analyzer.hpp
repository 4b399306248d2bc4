#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xdnp/diagnostics.hpp"
#include "xdnp/model.hpp"

namespace xdnp {

struct AtomicMatch {
    Field field = Field::SrcIp;
    Value value = PortNumber{0};

    bool operator==(const AtomicMatch&) const = default;
};

struct Clause {
    std::vector<AtomicMatch> all_of;  // non-empty

    bool operator==(const Clause&) const = default;
};

// OR of ANDs of atomic field=value matches.
struct DnfPredicate {
    std::vector<Clause> any_of;  // non-empty

    bool operator==(const DnfPredicate&) const = default;
};

enum class DefaultAction { NormalForwarding, Drop };

struct FlowEntry {
    int priority = 1;  // strictly decreasing in list order
    DnfPredicate predicate;
    Action action = xdnp::Drop{};

    bool operator==(const FlowEntry&) const = default;
};

struct CompiledPolicy {
    std::string name;
    std::vector<FlowEntry> entries;  // document order; priority = n - index
    DefaultAction default_action = DefaultAction::NormalForwarding;

    bool operator==(const CompiledPolicy&) const = default;
};

// Interprets the connector chain c1 .. cn with And binding tighter than Or:
// each maximal run of And-joined conditions becomes one clause, Or starts
// the next one. The result is the DNF of the flat boolean expression the
// generated code would contain.
DnfPredicate normalize(const Rule& rule);

// A clause holding two atoms on the same field with different values can
// never match; such clauses are legal but earn a warning.
std::vector<Diagnostic> unsatisfiable_clause_warnings(const Rule& rule);

struct CompileResult {
    std::optional<CompiledPolicy> policy;  // set iff no error diagnostics
    std::vector<Diagnostic> diagnostics;   // validation errors + clause warnings

    bool ok() const { return policy.has_value(); }
};

CompileResult compile(const Policy& policy,
                      DefaultAction default_action = DefaultAction::NormalForwarding);

}  // namespace xdnp
