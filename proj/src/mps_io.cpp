#include "mgplan/mps_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "mgplan/csv.hpp"

namespace mgplan::milp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kObjRow = "COST";

std::string fmtnum(double v) { return csv::format_double(v); }

}  // namespace

MpsParseError::MpsParseError(const std::string& msg, const std::string& sec,
                             int line_number)
    : std::runtime_error(fmt::format("MPS parse error in {} (line {}): {}",
                                     sec.empty() ? "header" : sec, line_number,
                                     msg)),
      section(sec),
      line(line_number) {}

std::string to_mps_string(const MilpModel& model) {
    if (model.num_variables() == 0)
        throw FormulationError("cannot export an empty model");

    const int n = model.num_variables();
    const int m = model.num_constraints();

    std::size_t wcol = 3;  // "RHS"
    for (const auto& v : model.variables()) wcol = std::max(wcol, v.name.size());
    std::size_t wrow = 4;  // "COST"
    for (const auto& c : model.constraints()) wrow = std::max(wrow, c.name.size());

    // column-major view of the rows, row indices ascending
    std::vector<std::vector<std::pair<int, double>>> by_col(n);
    for (int i = 0; i < m; ++i)
        for (const auto& t : model.constraints()[i].terms)
            by_col[t.col].emplace_back(i, t.coef);

    std::string out;
    out.reserve(1 << 16);
    out += fmt::format("NAME          {}\n", model.name());
    out += "ROWS\n";
    out += fmt::format(" N  {}\n", kObjRow);
    for (const auto& c : model.constraints()) {
        char sense = 'E';
        if (c.sense == RowSense::le) sense = 'L';
        if (c.sense == RowSense::ge) sense = 'G';
        out += fmt::format(" {}  {}\n", sense, c.name);
    }

    out += "COLUMNS\n";
    bool in_int = false;
    for (int j = 0; j < n; ++j) {
        const auto& var = model.variables()[j];
        const bool want_int = var.kind == VarKind::binary;
        if (want_int != in_int) {
            out += fmt::format("    MARKER{}  'MARKER'                 '{}'\n",
                               std::string(wcol > 6 ? wcol - 6 : 0, ' '),
                               want_int ? "INTORG" : "INTEND");
            in_int = want_int;
        }
        bool wrote = false;
        auto emit = [&](const std::string& row, double v) {
            out += fmt::format("    {:<{}}  {:<{}}  {}\n", var.name, wcol, row,
                               wrow, fmtnum(v));
            wrote = true;
        };
        if (model.objective()[j] != 0.0) emit(kObjRow, model.objective()[j]);
        for (const auto& [row, coef] : by_col[j])
            emit(model.constraints()[row].name, coef);
        if (!wrote) emit(kObjRow, 0.0);  // keep empty columns alive
    }
    if (in_int) {
        out += fmt::format("    MARKER{}  'MARKER'                 'INTEND'\n",
                           std::string(wcol > 6 ? wcol - 6 : 0, ' '));
    }

    out += "RHS\n";
    if (model.objective_constant() != 0.0) {
        out += fmt::format("    {:<{}}  {:<{}}  {}\n", "RHS", wcol, kObjRow, wrow,
                           fmtnum(-model.objective_constant()));
    }
    for (const auto& c : model.constraints()) {
        if (c.rhs == 0.0) continue;
        out += fmt::format("    {:<{}}  {:<{}}  {}\n", "RHS", wcol, c.name, wrow,
                           fmtnum(c.rhs));
    }

    out += "BOUNDS\n";
    for (const auto& var : model.variables()) {
        auto bound = [&](const char* type, bool with_value, double v = 0.0) {
            if (with_value) {
                out += fmt::format(" {:<2} {:<3}  {:<{}}  {}\n", type, "BND",
                                   var.name, wcol, fmtnum(v));
            } else {
                out += fmt::format(" {:<2} {:<3}  {}\n", type, "BND", var.name);
            }
        };
        if (var.lower == var.upper) {
            bound("FX", true, var.lower);
            continue;
        }
        if (var.kind == VarKind::binary) {
            if (var.lower != 0.0) bound("LO", true, var.lower);
            bound("UP", true, var.upper);
            continue;
        }
        if (var.lower == -kInf && var.upper == kInf) {
            bound("FR", false);
            continue;
        }
        if (var.lower == -kInf)
            bound("MI", false);
        else if (var.lower != 0.0)
            bound("LO", true, var.lower);
        if (var.upper != kInf) bound("UP", true, var.upper);
    }
    out += "ENDATA\n";
    return out;
}

namespace {

struct PendingVar {
    std::string name;
    bool integer = false;
    std::vector<std::pair<int, double>> entries;  // (row or -1 for objective)
    double obj = 0.0;
    double lo = 0.0, hi = kInf;
    bool lo_set = false, hi_set = false, fixed = false, free_var = false;
};

double parse_num(const std::string& tok, const std::string& section, int line) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        throw MpsParseError("bad number '" + tok + "'", section, line);
    return v;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

}  // namespace

MilpModel model_from_mps_string(const std::string& text,
                                const std::string& name_hint) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::string section;
    std::string model_name = name_hint;

    std::string obj_row_name;
    std::vector<std::pair<std::string, RowSense>> rows;  // constraint rows
    std::map<std::string, int> row_index;
    std::vector<PendingVar> vars;
    std::map<std::string, int> var_index;
    std::map<std::string, double> rhs;
    double obj_rhs = 0.0;
    bool in_int = false;

    auto find_var = [&](const std::string& name) -> PendingVar& {
        auto it = var_index.find(name);
        if (it == var_index.end()) {
            var_index.emplace(name, static_cast<int>(vars.size()));
            vars.push_back({});
            vars.back().name = name;
            vars.back().integer = in_int;
            return vars.back();
        }
        return vars[it->second];
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '*') continue;
        const bool indented = line[0] == ' ' || line[0] == '\t';
        auto toks = tokenize(line);
        if (toks.empty()) continue;

        if (!indented) {
            const std::string& kw = toks[0];
            if (kw == "NAME") {
                if (toks.size() > 1) model_name = toks[1];
                continue;
            }
            if (kw == "ROWS" || kw == "COLUMNS" || kw == "RHS" ||
                kw == "BOUNDS" || kw == "ENDATA") {
                section = kw;
                if (kw == "ENDATA") break;
                continue;
            }
            if (kw == "RANGES")
                throw MpsParseError("RANGES section not supported", section,
                                    line_no);
            throw MpsParseError("unknown section '" + kw + "'", section, line_no);
        }

        if (section == "ROWS") {
            if (toks.size() != 2)
                throw MpsParseError("expected '<sense> <name>'", section, line_no);
            const std::string& sense = toks[0];
            const std::string& name = toks[1];
            if (sense == "N") {
                if (!obj_row_name.empty())
                    throw MpsParseError("multiple objective (N) rows", section,
                                        line_no);
                obj_row_name = name;
            } else {
                RowSense rs;
                if (sense == "L") rs = RowSense::le;
                else if (sense == "G") rs = RowSense::ge;
                else if (sense == "E") rs = RowSense::eq;
                else
                    throw MpsParseError("unknown row sense '" + sense + "'",
                                        section, line_no);
                if (!row_index.emplace(name, static_cast<int>(rows.size())).second)
                    throw MpsParseError("duplicate row " + name, section, line_no);
                rows.emplace_back(name, rs);
            }
        } else if (section == "COLUMNS") {
            if (toks.size() >= 3 && toks[1] == "'MARKER'") {
                if (toks[2] == "'INTORG'") in_int = true;
                else if (toks[2] == "'INTEND'") in_int = false;
                else
                    throw MpsParseError("unknown marker " + toks[2], section,
                                        line_no);
                continue;
            }
            if (toks.size() != 3 && toks.size() != 5)
                throw MpsParseError("expected '<col> <row> <value>' pairs",
                                    section, line_no);
            PendingVar& var = find_var(toks[0]);
            for (std::size_t f = 1; f + 1 < toks.size(); f += 2) {
                const std::string& row = toks[f];
                const double v = parse_num(toks[f + 1], section, line_no);
                if (row == obj_row_name) {
                    var.obj += v;
                } else {
                    auto it = row_index.find(row);
                    if (it == row_index.end())
                        throw MpsParseError("unknown row " + row, section, line_no);
                    var.entries.emplace_back(it->second, v);
                }
            }
        } else if (section == "RHS") {
            if (toks.size() != 3 && toks.size() != 5)
                throw MpsParseError("expected '<set> <row> <value>' pairs",
                                    section, line_no);
            for (std::size_t f = 1; f + 1 < toks.size(); f += 2) {
                const std::string& row = toks[f];
                const double v = parse_num(toks[f + 1], section, line_no);
                if (row == obj_row_name) {
                    obj_rhs = v;
                } else {
                    auto it = row_index.find(row);
                    if (it == row_index.end())
                        throw MpsParseError("unknown row " + row, section, line_no);
                    rhs[row] = v;
                }
            }
        } else if (section == "BOUNDS") {
            if (toks.size() < 3)
                throw MpsParseError("expected '<type> <set> <col> [value]'",
                                    section, line_no);
            const std::string& type = toks[0];
            auto it = var_index.find(toks[2]);
            if (it == var_index.end())
                throw MpsParseError("bound on unknown column " + toks[2], section,
                                    line_no);
            PendingVar& var = vars[it->second];
            auto value = [&]() {
                if (toks.size() < 4)
                    throw MpsParseError("bound type " + type + " needs a value",
                                        section, line_no);
                return parse_num(toks[3], section, line_no);
            };
            if (type == "LO") {
                var.lo = value();
                var.lo_set = true;
            } else if (type == "UP") {
                var.hi = value();
                var.hi_set = true;
            } else if (type == "FX") {
                var.lo = var.hi = value();
                var.lo_set = var.hi_set = var.fixed = true;
            } else if (type == "FR") {
                var.lo = -kInf;
                var.hi = kInf;
                var.lo_set = var.hi_set = var.free_var = true;
            } else if (type == "MI") {
                var.lo = -kInf;
                var.lo_set = true;
            } else if (type == "PL") {
                var.hi = kInf;
                var.hi_set = true;
            } else if (type == "BV") {
                var.integer = true;
                var.lo = 0.0;
                var.hi = 1.0;
                var.lo_set = var.hi_set = true;
            } else {
                throw MpsParseError("unknown bound type '" + type + "'", section,
                                    line_no);
            }
        } else if (section.empty()) {
            throw MpsParseError("data before any section", section, line_no);
        } else {
            throw MpsParseError("unexpected line", section, line_no);
        }
    }
    if (section != "ENDATA")
        throw MpsParseError("missing ENDATA", section, line_no);
    if (obj_row_name.empty())
        throw MpsParseError("no objective (N) row", "ROWS", line_no);

    MilpModel model(model_name);
    for (auto& var : vars) {
        double lo = var.lo, hi = var.hi;
        VarKind kind = VarKind::continuous;
        if (var.integer) {
            if (!var.hi_set) hi = 1.0;  // integer default: binary range
            if (lo < 0.0 || hi > 1.0)
                throw MpsParseError(
                    "integer column " + var.name + " is not binary", "BOUNDS",
                    line_no);
            kind = VarKind::binary;
        }
        model.add_variable(var.name, kind, lo, hi);
    }
    std::vector<std::vector<Term>> terms(rows.size());
    for (std::size_t j = 0; j < vars.size(); ++j) {
        if (vars[j].obj != 0.0)
            model.add_objective_term(static_cast<int>(j), vars[j].obj);
        for (const auto& [row, v] : vars[j].entries)
            terms[row].push_back({static_cast<int>(j), v});
    }
    model.add_objective_constant(-obj_rhs);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto rit = rhs.find(rows[i].first);
        model.add_constraint(rows[i].first, std::move(terms[i]), rows[i].second,
                             rit == rhs.end() ? 0.0 : rit->second);
    }
    return model;
}

void export_mps(const MilpModel& model, const std::filesystem::path& path) {
    const std::string text = to_mps_string(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

MilpModel import_mps(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_mps_string(ss.str(), path.stem().string());
}

}  // namespace mgplan::milp
