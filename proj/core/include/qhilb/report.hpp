#pragma once

#include <string>

namespace qhilb {

struct ReportOptions {
    int c_max = 4;
    bool enable_bidegree_vanishing = false;
    std::string relations_path; // empty: shipped relations
};

// Everything the library computes for one configuration, as pretty-printed JSON:
// ring data, seeds, the derived two-point table, all basis products, relation residuals
// and a few hyperelliptic columns. Uses a fresh engine each call.
std::string full_report_json(const ReportOptions& options);

} // namespace qhilb
