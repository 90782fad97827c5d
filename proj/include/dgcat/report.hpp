#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "dgcat/realize.hpp"

namespace dgcat {

/* Exit codes: 0 certified pass, 2 certified failure (with witness),
 * 3 inconclusive (bounds), 1 usage or parse error. */
enum class RunStatus { pass = 0, usage_error = 1, fail = 2, inconclusive = 3 };

/* Fixed top-level report schema: command, bounds, status, witnesses,
 * timings. Timings stay null unless explicitly requested so identical
 * inputs give byte-identical output. */
class Report {
  public:
    Report(std::string command, const Bounds& b, const Field& ring);

    void set_status(RunStatus s) { status_ = s; }
    RunStatus status() const { return status_; }
    void add_witness(nlohmann::ordered_json w) { witnesses_.push_back(std::move(w)); }
    void add_line(const std::string& text) { lines_.push_back(text); }
    void set_timing_ms(long ms) { timing_ms_ = ms; }

    nlohmann::ordered_json json() const;
    std::string text() const;  // human-readable
    int exit_code() const { return static_cast<int>(status_); }

  private:
    std::string command_;
    Bounds bounds_;
    Field ring_;
    RunStatus status_ = RunStatus::inconclusive;
    std::vector<nlohmann::ordered_json> witnesses_;
    std::vector<std::string> lines_;
    long timing_ms_ = -1;
};

std::string run_status_str(RunStatus s);

}  // namespace dgcat
