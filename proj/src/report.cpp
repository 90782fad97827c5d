#include "dgcat/report.hpp"

namespace dgcat {

std::string run_status_str(RunStatus s)
{
    switch (s) {
        case RunStatus::pass: return "pass";
        case RunStatus::fail: return "fail";
        case RunStatus::inconclusive: return "inconclusive";
        case RunStatus::usage_error: return "usage-error";
    }
    return "?";
}

Report::Report(std::string command, const Bounds& b, const Field& ring)
    : command_(std::move(command)), bounds_(b), ring_(ring)
{
}

nlohmann::ordered_json Report::json() const
{
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["bounds"] = {{"window", {bounds_.window.lo, bounds_.window.hi}},
                   {"maxlen", bounds_.maxlen},
                   {"ring", ring_.str()}};
    j["status"] = run_status_str(status_);
    nlohmann::ordered_json ws = nlohmann::ordered_json::array();
    for (const auto& w : witnesses_)
        ws.push_back(w);
    for (const auto& l : lines_)
        ws.push_back(nlohmann::ordered_json{{"type", "note"}, {"text", l}});
    j["witnesses"] = ws;
    if (timing_ms_ >= 0)
        j["timings"] = {{"total_ms", timing_ms_}};
    else
        j["timings"] = nullptr;
    return j;
}

std::string Report::text() const
{
    std::string out = command_ + ": " + run_status_str(status_) + "\n";
    out += "bounds: window " + bounds_.window.str() + ", maxlen " + std::to_string(bounds_.maxlen) +
           ", ring " + ring_.str() + "\n";
    for (const auto& l : lines_)
        out += l + "\n";
    for (const auto& w : witnesses_)
        out += "witness: " + w.dump() + "\n";
    return out;
}

}  // namespace dgcat
