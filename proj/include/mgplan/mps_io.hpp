// MPS export/import for MilpModel. The writer emits aligned fixed-style
// sections (ROWS/COLUMNS/RHS/BOUNDS) with INTORG/INTEND markers around
// binary columns, one coefficient per line, and shortest round-trip number
// formatting, so export -> import -> export is byte-stable. The objective
// constant follows the usual convention of an RHS entry on the objective
// row holding its negative.

#ifndef MGPLAN_MPS_IO_HPP
#define MGPLAN_MPS_IO_HPP

#include <filesystem>
#include <stdexcept>
#include <string>

#include "mgplan/milp_model.hpp"

namespace mgplan::milp {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MpsParseError : std::runtime_error {
    MpsParseError(const std::string& msg, const std::string& section, int line);
    std::string section;
    int line = 0;
};

std::string to_mps_string(const MilpModel& model);
MilpModel model_from_mps_string(const std::string& text,
                                const std::string& name_hint = "model");

void export_mps(const MilpModel& model, const std::filesystem::path& path);
MilpModel import_mps(const std::filesystem::path& path);

}  // namespace mgplan::milp

#endif
