#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace chronosite::project {

// Writes the constructed high-mountain observatory demo inputs into `dir`:
// site.json (six reference states, attributes, persons, palette),
// records.jsonl, notes.json and clouds/ (one 1:500 scale-model scan as XYZ
// and one partial aerial cloud as PLY per state). Output is byte-identical
// across runs (fixed seeds, no library distributions, fixed-precision text).
void write_demo_inputs(const std::filesystem::path& dir);

// The CLI invocations (without program name) that turn the demo inputs in
// `data_dir` into a built project at `project_dir`, in order.
std::vector<std::vector<std::string>> demo_pipeline(const std::filesystem::path& data_dir,
                                                    const std::filesystem::path& project_dir);

}  // namespace chronosite::project
