#pragma once

#include "mmct/milp.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace mmct {

namespace detail {

/// Restricts a name to [A-Za-z0-9_], forces a non-digit first character and
/// applies the length limit with a short hash suffix. Collisions after
/// sanitization are the caller's problem (writers reject them).
inline std::string sanitize_name(const std::string& raw, size_t max_len) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw)
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '_' ? c : '_');
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out.insert(out.begin(), 'n');
    if (max_len > 0 && out.size() > max_len) {
        size_t h = std::hash<std::string>{}(out);
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%08zx", h & 0xffffffffu);
        size_t keep = max_len > 9 ? max_len - 9 : 0;
        out = out.substr(0, keep) + "_" + buf;
    }
    return out;
}

struct ExportNames {
    std::vector<std::string> vars, rows;
    std::string objective;
};

inline ExportNames export_names(const MilpModel& model, size_t max_len) {
    ExportNames names;
    std::map<std::string, int> used;
    auto claim = [&](const std::string& raw) {
        std::string s = sanitize_name(raw, max_len);
        if (!used.emplace(s, 1).second)
            throw StructuralError("name collision after sanitization: " + s);
        return s;
    };
    names.objective = claim("COST");
    for (const Variable& v : model.variables()) names.vars.push_back(claim(v.name));
    for (const Constraint& c : model.constraints()) names.rows.push_back(claim(c.name));
    return names;
}

} // namespace detail

/// Writes free-format MPS (whitespace-delimited ROWS/COLUMNS/RHS/BOUNDS,
/// binaries wrapped in INTORG/INTEND markers and given BV/FX bound entries).
/// Output is deterministic: declaration order everywhere. Every variable
/// appears in COLUMNS even if all its coefficients are zero.
inline std::string write_mps(const MilpModel& model, size_t max_name_len = 255) {
    const auto names = detail::export_names(model, max_name_len);
    std::ostringstream out;
    out << "NAME " << detail::sanitize_name(model.name().empty() ? "model" : model.name(), max_name_len) << "\n";

    out << "ROWS\n";
    out << " N " << names.objective << "\n";
    for (size_t c = 0; c < model.constraints().size(); ++c) {
        char sense = 'L';
        switch (model.constraints()[c].sense) {
            case Sense::LE: sense = 'L'; break;
            case Sense::EQ: sense = 'E'; break;
            case Sense::GE: sense = 'G'; break;
        }
        out << " " << sense << " " << names.rows[c] << "\n";
    }

    // column-major coefficients, in declaration order
    std::vector<std::vector<std::pair<int, const Rat*>>> columns(model.variables().size());
    for (size_t c = 0; c < model.constraints().size(); ++c)
        for (const Term& t : model.constraints()[c].terms)
            columns[t.var].push_back({static_cast<int>(c), &t.coeff});
    std::vector<const Rat*> obj_coeff(model.variables().size(), nullptr);
    for (const Term& t : model.objective()) obj_coeff[t.var] = &t.coeff;

    out << "COLUMNS\n";
    bool in_integer_block = false;
    int marker = 0;
    for (size_t v = 0; v < model.variables().size(); ++v) {
        const bool integer = model.variables()[v].kind == VarKind::Binary;
        if (integer != in_integer_block) {
            out << "    MARKER" << marker++ << " 'MARKER' " << (integer ? "'INTORG'" : "'INTEND'") << "\n";
            in_integer_block = integer;
        }
        bool wrote_any = false;
        if (obj_coeff[v]) {
            out << "    " << names.vars[v] << " " << names.objective << " " << to_decimal(*obj_coeff[v]) << "\n";
            wrote_any = true;
        }
        for (auto [row, coeff] : columns[v]) {
            out << "    " << names.vars[v] << " " << names.rows[row] << " " << to_decimal(*coeff) << "\n";
            wrote_any = true;
        }
        if (!wrote_any) // keep the column alive so readers see the variable
            out << "    " << names.vars[v] << " " << names.objective << " 0\n";
    }
    if (in_integer_block) out << "    MARKER" << marker++ << " 'MARKER' 'INTEND'\n";

    out << "RHS\n";
    for (size_t c = 0; c < model.constraints().size(); ++c)
        if (model.constraints()[c].rhs != Rat(0))
            out << "    RHS " << names.rows[c] << " " << to_decimal(model.constraints()[c].rhs) << "\n";

    out << "BOUNDS\n";
    for (size_t v = 0; v < model.variables().size(); ++v) {
        const Variable& var = model.variables()[v];
        const std::string& n = names.vars[v];
        if (var.fixed()) {
            out << " FX BND " << n << " " << to_decimal(*var.lb) << "\n";
        } else if (var.kind == VarKind::Binary) {
            out << " BV BND " << n << "\n";
        } else {
            if (!var.lb) out << " MI BND " << n << "\n";
            else if (*var.lb != Rat(0)) out << " LO BND " << n << " " << to_decimal(*var.lb) << "\n";
            if (var.ub) out << " UP BND " << n << " " << to_decimal(*var.ub) << "\n";
        }
    }
    out << "ENDATA\n";
    return out.str();
}

/// CPLEX-style LP text. Same determinism rules as the MPS writer.
inline std::string write_lp(const MilpModel& model, size_t max_name_len = 255) {
    const auto names = detail::export_names(model, max_name_len);
    std::ostringstream out;
    auto term_list = [&](const std::vector<Term>& terms) {
        std::string s;
        for (const Term& t : terms) {
            const Rat& c = t.coeff;
            s += (c < Rat(0) ? " - " : " + ") + to_decimal(rat_abs(c)) + " " + names.vars[t.var];
        }
        if (s.empty()) s = " 0 " + names.vars[0];
        return s;
    };

    out << "\\ " << model.name() << "\n";
    out << "Minimize\n obj:" << term_list(model.objective()) << "\n";
    out << "Subject To\n";
    for (size_t c = 0; c < model.constraints().size(); ++c) {
        const Constraint& con = model.constraints()[c];
        out << " " << names.rows[c] << ":" << term_list(con.terms) << " " << to_string(con.sense) << " "
            << to_decimal(con.rhs) << "\n";
    }
    out << "Bounds\n";
    for (size_t v = 0; v < model.variables().size(); ++v) {
        const Variable& var = model.variables()[v];
        const std::string& n = names.vars[v];
        if (var.fixed())
            out << " " << n << " = " << to_decimal(*var.lb) << "\n";
        else if (var.kind == VarKind::Binary)
            out << " 0 <= " << n << " <= 1\n";
        else if (!var.lb && !var.ub)
            out << " " << n << " free\n";
        else if (var.lb && var.ub)
            out << " " << to_decimal(*var.lb) << " <= " << n << " <= " << to_decimal(*var.ub) << "\n";
        else if (var.lb && *var.lb != Rat(0))
            out << " " << n << " >= " << to_decimal(*var.lb) << "\n";
        else if (!var.lb && var.ub)
            out << " -inf <= " << n << " <= " << to_decimal(*var.ub) << "\n";
        else if (var.ub)
            out << " " << n << " <= " << to_decimal(*var.ub) << "\n";
    }
    out << "Binaries\n";
    for (size_t v = 0; v < model.variables().size(); ++v)
        if (model.variables()[v].kind == VarKind::Binary && !model.variables()[v].fixed())
            out << " " << names.vars[v] << "\n";
    out << "End\n";
    return out.str();
}

} // namespace mmct
