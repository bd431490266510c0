// io.hpp — instance files, run records, CSV emission, and trace rendering. The
// instance format is JSON with exact numerics: integers stay integers, and anything
// fractional travels as a string ("0.25", "16/19") so values survive a round trip
// bit-for-bit.
#pragma once

#include <map>
#include <optional>
#include <string>

#include "netauct/analysis.hpp"
#include "netauct/mechanisms.hpp"
#include "netauct/model.hpp"

namespace netauct {

// Parses an instance document. Throws input_error with the offending field (or byte
// position for malformed JSON), prefixed by source_name.
AuctionInstance parse_instance(const std::string& text,
                               const std::string& source_name = "<input>");
AuctionInstance load_instance_file(const std::string& path);

// Deterministic rendering; parse(serialize(x)) reproduces x exactly.
std::string serialize_instance(const AuctionInstance& instance);
void save_instance_file(const AuctionInstance& instance, const std::string& path);

// One mechanism evaluation on one instance, ready for printing or a CSV row.
struct RunRecord {
    std::string mechanism;
    std::string instance_id;
    int n = 0;
    int k = 1;
    std::string parameter;               // "alpha=1/2", "variant=max", ... or empty
    std::map<BuyerId, int> allocation;   // nonzero entries only
    std::map<BuyerId, Rat> net_payment;  // nonzero entries only
    WelfareReport welfare;
    RevenueReport revenue;
};

RunRecord make_run_record(std::string mechanism, std::string instance_id,
                          const AuctionInstance& instance, const Outcome& outcome,
                          std::string parameter = {});

// Human-readable multi-line rendering of a record.
std::string format_run_record(const RunRecord& record);

// CSV layout documented in the README. Packed per-buyer cells use "id:value"
// pairs joined by semicolons so the row stays comma-safe.
std::string run_csv_header();
std::string run_csv_row(const RunRecord& record);

std::string sweep_csv_header();
std::string sweep_csv_row(const std::string& parameter, const Rat& efficiency,
                          const std::optional<Rat>& beta);

// The item-passing trace, one event per line, using instance labels when present
// ("c takes from d at price 3") and "buyer <id>" otherwise.
std::string format_gidm_trace(const AuctionInstance& instance, const GidmTreeState& state);

}  // namespace netauct
