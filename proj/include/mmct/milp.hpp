#pragma once

#include "mmct/errors.hpp"
#include "mmct/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mmct {

enum class VarKind { Binary, Continuous };
enum class Sense { LE, EQ, GE };

inline const char* to_string(Sense s) {
    switch (s) {
        case Sense::LE: return "<=";
        case Sense::EQ: return "=";
        case Sense::GE: return ">=";
    }
    return "?";
}

/// Semantic key of a variable: a symbol tag plus its index tuple, so decoders
/// and tests can address variables by meaning instead of position.
struct VarKey {
    std::string tag;
    std::vector<int> idx;
    auto operator<=>(const VarKey&) const = default;
};

struct Variable {
    std::string name; ///< unique, export-safe
    VarKind kind = VarKind::Continuous;
    std::optional<Rat> lb; ///< nullopt = -inf
    std::optional<Rat> ub; ///< nullopt = +inf
    VarKey key;

    bool fixed() const { return lb && ub && *lb == *ub; }
};

struct Term {
    int var = -1;
    Rat coeff;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms; ///< folded: unique variables, no zero coefficients
    Sense sense = Sense::LE;
    Rat rhs;
};

/// Solver-agnostic sparse linear model, minimization objective. Single-writer
/// while being built; immutable and freely shareable afterwards.
class MilpModel {
public:
    explicit MilpModel(std::string name) : name_(std::move(name)) {}

    int add_binary(std::string name, VarKey key = {}) {
        return add_variable(std::move(name), VarKind::Binary, Rat(0), Rat(1), std::move(key));
    }

    int add_continuous(std::string name, std::optional<Rat> lb, std::optional<Rat> ub, VarKey key = {}) {
        return add_variable(std::move(name), VarKind::Continuous, std::move(lb), std::move(ub), std::move(key));
    }

    /// Pins a variable to one value (lb = ub = value).
    void fix_variable(int id, Rat value) {
        Variable& v = var_mut(id);
        if (v.kind == VarKind::Binary && value != Rat(0) && value != Rat(1))
            throw StructuralError("binary variable " + v.name + " fixed to a non-binary value");
        v.lb = value;
        v.ub = std::move(value);
    }

    /// Folds duplicate variables, drops zero coefficients, validates ids.
    void add_constraint(std::string name, const std::vector<Term>& terms, Sense sense, Rat rhs) {
        Constraint c;
        c.name = std::move(name);
        c.sense = sense;
        c.rhs = std::move(rhs);
        for (const Term& t : terms) {
            if (t.var < 0 || t.var >= static_cast<int>(variables_.size()))
                throw StructuralError("constraint " + c.name + " references unknown variable id " + std::to_string(t.var));
            if (t.coeff == Rat(0)) continue;
            auto it = std::find_if(c.terms.begin(), c.terms.end(), [&](const Term& u) { return u.var == t.var; });
            if (it == c.terms.end())
                c.terms.push_back(t);
            else
                it->coeff += t.coeff;
        }
        std::erase_if(c.terms, [](const Term& t) { return t.coeff == Rat(0); });
        constraints_.push_back(std::move(c));
    }

    void set_objective(std::vector<Term> terms) {
        for (const Term& t : terms)
            if (t.var < 0 || t.var >= static_cast<int>(variables_.size()))
                throw StructuralError("objective references unknown variable id");
        objective_ = std::move(terms);
    }

    const std::string& name() const { return name_; }
    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const std::vector<Term>& objective() const { return objective_; }

    const Variable& variable(int id) const {
        if (id < 0 || id >= static_cast<int>(variables_.size())) throw StructuralError("variable id out of range");
        return variables_[id];
    }

    /// Id of the variable with the given semantic key, or -1.
    int find(const std::string& tag, std::vector<int> idx = {}) const {
        auto it = by_key_.find(VarKey{tag, std::move(idx)});
        return it == by_key_.end() ? -1 : it->second;
    }

    int find_by_name(const std::string& name) const {
        auto it = by_name_.find(name);
        return it == by_name_.end() ? -1 : it->second;
    }

    int require(const std::string& tag, std::vector<int> idx = {}) const {
        int id = find(tag, idx);
        if (id < 0) {
            std::string k = tag;
            for (int v : idx) k += "_" + std::to_string(v);
            throw StructuralError("model " + name_ + " has no variable " + k);
        }
        return id;
    }

private:
    int add_variable(std::string name, VarKind kind, std::optional<Rat> lb, std::optional<Rat> ub, VarKey key) {
        if (lb && ub && *lb > *ub)
            throw StructuralError("variable " + name + " has lb > ub");
        if (!by_name_.emplace(name, static_cast<int>(variables_.size())).second)
            throw StructuralError("duplicate variable name " + name);
        if (!key.tag.empty() && !by_key_.emplace(key, static_cast<int>(variables_.size())).second)
            throw StructuralError("duplicate variable key " + key.tag);
        variables_.push_back({std::move(name), kind, std::move(lb), std::move(ub), std::move(key)});
        return static_cast<int>(variables_.size()) - 1;
    }

    Variable& var_mut(int id) {
        if (id < 0 || id >= static_cast<int>(variables_.size())) throw StructuralError("variable id out of range");
        return variables_[id];
    }

    std::string name_;
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    std::vector<Term> objective_;
    std::map<std::string, int> by_name_;
    std::map<VarKey, int> by_key_;
};

/// LP relaxation: every binary becomes continuous on [0,1] (tighter fixed
/// bounds are kept). Constraints, names and coefficients are untouched.
inline MilpModel relax(const MilpModel& model) {
    MilpModel out(model.name());
    for (const Variable& v : model.variables()) out.add_continuous(v.name, v.lb, v.ub, v.key);
    for (const Constraint& c : model.constraints()) out.add_constraint(c.name, c.terms, c.sense, c.rhs);
    out.set_objective(model.objective());
    return out;
}

struct ModelStats {
    int variables = 0;
    int binaries = 0;
    int constraints = 0;
    long long nonzeros = 0; ///< constraint-matrix entries
};

inline ModelStats stats(const MilpModel& model) {
    ModelStats s;
    s.variables = static_cast<int>(model.variables().size());
    for (const Variable& v : model.variables())
        if (v.kind == VarKind::Binary) ++s.binaries;
    s.constraints = static_cast<int>(model.constraints().size());
    for (const Constraint& c : model.constraints()) s.nonzeros += static_cast<long long>(c.terms.size());
    return s;
}

/// Value per variable name. May be assembled incrementally; evaluation
/// requires every model variable to be present.
class PointAssignment {
public:
    void set(const std::string& name, Rat value) { values_[name] = std::move(value); }
    bool has(const std::string& name) const { return values_.count(name) != 0; }
    const Rat& at(const std::string& name) const {
        auto it = values_.find(name);
        if (it == values_.end()) throw StructuralError("point assigns no value to variable " + name);
        return it->second;
    }
    const std::map<std::string, Rat>& values() const { return values_; }
    size_t size() const { return values_.size(); }

private:
    std::map<std::string, Rat> values_;
};

struct PointViolation {
    bool is_bound = false;
    std::string name; ///< variable name for bounds, constraint name otherwise
    Rat excess;       ///< violation magnitude beyond the tolerance argument
    Rat lhs;          ///< evaluated variable value / constraint activity
};

struct EvalReport {
    std::vector<PointViolation> violations;
    Rat objective;
    bool feasible() const { return violations.empty(); }
};

/// Evaluates a fully specified point against every bound and constraint.
/// Assignments for unknown variables and missing assignments are structural
/// errors; infeasibility is reported with per-item slack.
inline EvalReport eval_point(const MilpModel& model, const PointAssignment& point, const Rat& tol) {
    for (const auto& [name, value] : point.values()) {
        (void)value;
        if (model.find_by_name(name) < 0) throw StructuralError("point assigns unknown variable " + name);
    }

    EvalReport report;
    report.objective = Rat(0);

    std::vector<Rat> value(model.variables().size());
    for (size_t id = 0; id < model.variables().size(); ++id) {
        const Variable& v = model.variables()[id];
        value[id] = point.at(v.name);
        if (v.lb && value[id] < *v.lb - tol)
            report.violations.push_back({true, v.name, *v.lb - value[id], value[id]});
        if (v.ub && value[id] > *v.ub + tol)
            report.violations.push_back({true, v.name, value[id] - *v.ub, value[id]});
    }

    for (const Constraint& c : model.constraints()) {
        Rat lhs(0);
        for (const Term& t : c.terms) lhs += t.coeff * value[t.var];
        Rat excess(0);
        switch (c.sense) {
            case Sense::LE: excess = lhs - c.rhs; break;
            case Sense::GE: excess = c.rhs - lhs; break;
            case Sense::EQ: excess = rat_abs(lhs - c.rhs); break;
        }
        if (excess > tol) report.violations.push_back({false, c.name, excess, lhs});
    }

    for (const Term& t : model.objective()) report.objective += t.coeff * value[t.var];
    return report;
}

} // namespace mmct
