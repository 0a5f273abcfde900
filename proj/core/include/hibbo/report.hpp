#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hibbo/bo_loop.hpp"
#include "hibbo/problems.hpp"

namespace hibbo::cli {

struct ReportResult {
    std::string comparison_csv;  // path written
    std::string summary_txt;     // path written
    std::string best_method;     // by median final best-so-far
};

// Reads every *.jsonl record under run_dir (skipping *.partial), writes
// comparison.csv (method,query,median_best,q1_best,q3_best) and summary.txt
// into out_dir, and names the best method.
ReportResult write_report(const std::string& run_dir, const std::string& out_dir);

struct Fig2Summary {
    double final_distance = 0.0;  // running HiPPO distance at the last step
    std::size_t rows = 0;
};

// One Figure-2 style demo: writes a CSV with one row per time step holding
// the two sequences, both HiPPO coefficient trajectories, the running state
// distance, and the rows of both degree-1 polynomial kernel matrices.
Fig2Summary write_fig2_csv(problems::Fig2Family family, std::uint64_t seed,
                           std::size_t order, const std::string& path);

}  // namespace hibbo::cli
