#include "netauct/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <type_traits>

#include <json.hpp>

namespace netauct {

namespace {

using Json = nlohmann::ordered_json;

Rat to_rat(const Json& j, const std::string& context) {
    try {
        if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
        if (j.is_number_unsigned()) {
            const auto u = j.get<std::uint64_t>();
            if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
                throw std::invalid_argument("out of 64-bit range");
            return Rat(static_cast<std::int64_t>(u));
        }
        if (j.is_string()) return Rat::parse(j.get<std::string>());
        // Doubles are snapped through their shortest decimal rendering, so a literal
        // like 0.25 means exactly 1/4 rather than its nearest binary neighbour.
        if (j.is_number_float()) return Rat::from_double(j.get<double>());
    } catch (const std::exception& e) {
        throw input_error(context + ": " + e.what());
    }
    throw input_error(context + ": expected a number or a numeric string");
}

int to_id(const Json& j, const std::string& context) {
    if (!j.is_number_integer() && !j.is_number_unsigned())
        throw input_error(context + ": expected an integer buyer id");
    const auto v = j.get<std::int64_t>();
    if (v < 1 || v > std::numeric_limits<int>::max())
        throw input_error(context + ": buyer id out of range");
    return static_cast<int>(v);
}

std::set<BuyerId> to_id_set(const Json& j, const std::string& context) {
    if (!j.is_array()) throw input_error(context + ": expected an array of buyer ids");
    std::set<BuyerId> ids;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const BuyerId id = to_id(j[i], context + "[" + std::to_string(i) + "]");
        if (!ids.insert(id).second)
            throw input_error(context + ": duplicate entry " + std::to_string(id));
    }
    return ids;
}

void require_keys(const Json& j, std::initializer_list<const char*> allowed,
                  const std::string& context) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) throw input_error(context + ": unknown field '" + key + "'");
    }
}

std::pair<BuyerId, BuyerType> parse_buyer(const Json& j, const std::string& context) {
    if (!j.is_object()) throw input_error(context + ": expected a buyer object");
    require_keys(j, {"id", "valuations", "neighbors"}, context);
    for (const char* key : {"id", "valuations", "neighbors"})
        if (!j.contains(key))
            throw input_error(context + ": missing field '" + std::string(key) + "'");

    const BuyerId id = to_id(j["id"], context + ".id");
    BuyerType type;
    const Json& vals = j["valuations"];
    if (!vals.is_array()) throw input_error(context + ".valuations: expected an array");
    for (std::size_t l = 0; l < vals.size(); ++l)
        type.valuations.push_back(
            to_rat(vals[l], context + ".valuations[" + std::to_string(l) + "]"));
    type.neighbors = to_id_set(j["neighbors"], context + ".neighbors");
    return {id, type};
}

std::map<BuyerId, BuyerType> parse_buyer_list(const Json& j, const std::string& context) {
    if (!j.is_array()) throw input_error(context + ": expected an array of buyers");
    std::map<BuyerId, BuyerType> buyers;
    for (std::size_t i = 0; i < j.size(); ++i) {
        auto [id, type] = parse_buyer(j[i], context + "[" + std::to_string(i) + "]");
        if (!buyers.emplace(id, std::move(type)).second)
            throw input_error(context + ": duplicate buyer id " + std::to_string(id));
    }
    return buyers;
}

Json rat_to_json(const Rat& r) {
    if (r.is_integer()) return Json(r.num());
    return Json(r.to_string());
}

Json buyer_list_to_json(const std::map<BuyerId, BuyerType>& buyers) {
    Json list = Json::array();
    for (const auto& [id, type] : buyers) {
        Json entry;
        entry["id"] = id;
        entry["valuations"] = Json::array();
        for (const Rat& v : type.valuations) entry["valuations"].push_back(rat_to_json(v));
        entry["neighbors"] = Json(type.neighbors);
        list.push_back(std::move(entry));
    }
    return list;
}

}  // namespace

AuctionInstance parse_instance(const std::string& text, const std::string& source_name) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(source_name + ": " + e.what());
    }
    try {
        if (!root.is_object()) throw input_error("expected a top-level object");
        require_keys(root,
                     {"k", "value_cap", "alpha", "seller_neighbors", "buyers",
                      "true_profile", "labels"},
                     "instance");
        for (const char* key : {"k", "seller_neighbors", "buyers"})
            if (!root.contains(key))
                throw input_error("missing field '" + std::string(key) + "'");

        AuctionInstance instance;
        if (!root["k"].is_number_integer() && !root["k"].is_number_unsigned())
            throw input_error("k: expected an integer");
        instance.k = root["k"].get<int>();
        if (root.contains("value_cap"))
            instance.value_cap = to_rat(root["value_cap"], "value_cap");
        if (root.contains("alpha")) instance.alpha = to_rat(root["alpha"], "alpha");
        instance.seller_neighbors = to_id_set(root["seller_neighbors"], "seller_neighbors");
        instance.buyers = parse_buyer_list(root["buyers"], "buyers");
        instance.n = static_cast<int>(instance.buyers.size());
        if (root.contains("true_profile"))
            instance.true_profile = parse_buyer_list(root["true_profile"], "true_profile");
        if (root.contains("labels")) {
            const Json& labels = root["labels"];
            if (!labels.is_object())
                throw input_error("labels: expected an object mapping ids to names");
            for (const auto& [key, value] : labels.items()) {
                int id = 0;
                try {
                    std::size_t used = 0;
                    id = std::stoi(key, &used);
                    if (used != key.size()) throw std::invalid_argument(key);
                } catch (const std::exception&) {
                    throw input_error("labels: bad buyer id '" + key + "'");
                }
                if (!value.is_string())
                    throw input_error("labels[" + key + "]: expected a string");
                if (!instance.buyers.count(id))
                    throw input_error("labels: no buyer with id " + key);
                instance.labels[id] = value.get<std::string>();
            }
        }
        validate_instance(instance);
        return instance;
    } catch (const input_error& e) {
        throw input_error(source_name + ": " + e.what());
    }
}

AuctionInstance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot read file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_instance(buffer.str(), path);
}

std::string serialize_instance(const AuctionInstance& instance) {
    Json root;
    root["k"] = instance.k;
    if (instance.value_cap) root["value_cap"] = rat_to_json(*instance.value_cap);
    if (instance.alpha) root["alpha"] = rat_to_json(*instance.alpha);
    root["seller_neighbors"] = Json(instance.seller_neighbors);
    root["buyers"] = buyer_list_to_json(instance.buyers);
    if (instance.true_profile)
        root["true_profile"] = buyer_list_to_json(*instance.true_profile);
    if (!instance.labels.empty()) {
        Json labels = Json::object();
        for (const auto& [id, name] : instance.labels)
            labels[std::to_string(id)] = name;
        root["labels"] = std::move(labels);
    }
    return root.dump(2) + "\n";
}

void save_instance_file(const AuctionInstance& instance, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write file: " + path);
    out << serialize_instance(instance);
    if (!out) throw input_error("failed writing file: " + path);
}

RunRecord make_run_record(std::string mechanism, std::string instance_id,
                          const AuctionInstance& instance, const Outcome& outcome,
                          std::string parameter) {
    RunRecord record;
    record.mechanism = std::move(mechanism);
    record.instance_id = std::move(instance_id);
    record.n = instance.n;
    record.k = instance.k;
    record.parameter = std::move(parameter);
    for (const auto& [buyer, items] : outcome.allocation)
        if (items != 0) record.allocation[buyer] = items;
    for (const auto& [buyer, payment] : outcome.net_payment)
        if (!payment.is_zero()) record.net_payment[buyer] = payment;
    record.welfare = welfare_report(instance, instance.k, outcome);
    record.revenue = revenue_report(instance, outcome);
    return record;
}

std::string format_run_record(const RunRecord& record) {
    std::ostringstream out;
    out << "mechanism: " << record.mechanism;
    if (!record.parameter.empty()) out << " (" << record.parameter << ")";
    out << "\ninstance: " << record.instance_id << ", n=" << record.n
        << ", k=" << record.k << "\n";

    out << "allocation:";
    if (record.allocation.empty()) out << " (none)";
    for (const auto& [buyer, items] : record.allocation)
        out << " buyer " << buyer << " -> " << items;
    out << "\nnet payments:";
    if (record.net_payment.empty()) out << " (none)";
    bool first = true;
    for (const auto& [buyer, payment] : record.net_payment) {
        out << (first ? " " : ", ") << "buyer " << buyer << " -> " << payment.to_string();
        first = false;
    }
    out << "\nwelfare: achieved " << record.welfare.achieved.to_string() << ", optimal "
        << record.welfare.optimal.to_string() << ", ratio "
        << record.welfare.ratio.to_string() << "\n";
    out << "revenue: " << record.revenue.revenue.to_string();
    if (record.revenue.normalized)
        out << " (normalized " << record.revenue.normalized->to_string() << ")";
    out << "\n";
    return out.str();
}

namespace {

template <typename Value>
std::string pack_cell(const std::map<BuyerId, Value>& entries) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [buyer, value] : entries) {
        if (!first) out << ";";
        out << buyer << ":";
        if constexpr (std::is_same_v<Value, Rat>) out << value.to_string();
        else out << value;
        first = false;
    }
    return out.str();
}

}  // namespace

std::string run_csv_header() {
    return "mechanism,instance,n,k,parameter,allocation,net_payments,"
           "welfare_achieved,welfare_optimal,efficiency_ratio,revenue,"
           "normalized_revenue\n";
}

std::string run_csv_row(const RunRecord& record) {
    std::ostringstream out;
    out << record.mechanism << "," << record.instance_id << "," << record.n << ","
        << record.k << "," << record.parameter << "," << pack_cell(record.allocation)
        << "," << pack_cell(record.net_payment) << ","
        << record.welfare.achieved.to_string() << ","
        << record.welfare.optimal.to_string() << "," << record.welfare.ratio.to_string()
        << "," << record.revenue.revenue.to_string() << ",";
    if (record.revenue.normalized) out << record.revenue.normalized->to_string();
    out << "\n";
    return out.str();
}

std::string sweep_csv_header() { return "parameter,efficiency,beta\n"; }

std::string sweep_csv_row(const std::string& parameter, const Rat& efficiency,
                          const std::optional<Rat>& beta) {
    std::ostringstream out;
    out << parameter << "," << efficiency.to_string() << ",";
    if (beta) out << beta->to_string();
    out << "\n";
    return out.str();
}

std::string format_gidm_trace(const AuctionInstance& instance,
                              const GidmTreeState& state) {
    auto name = [&](BuyerId id) -> std::string {
        if (auto it = instance.labels.find(id); it != instance.labels.end())
            return it->second;
        return "buyer " + std::to_string(id);
    };
    auto items = [](int count) {
        return std::to_string(count) + (count == 1 ? " item" : " items");
    };

    std::ostringstream out;
    for (const GidmEvent& ev : state.trace) {
        switch (ev.kind) {
            case GidmEvent::Kind::send:
                if (ev.actor == 0)
                    out << "seller sends " << items(ev.count) << " to " << name(ev.target);
                else if (ev.target == 0)
                    out << name(ev.actor) << " returns " << items(ev.count)
                        << " to the seller";
                else
                    out << name(ev.actor) << " sends " << items(ev.count) << " to "
                        << name(ev.target);
                break;
            case GidmEvent::Kind::take_away:
                out << name(ev.actor) << " takes from " << name(ev.target) << " at price "
                    << ev.price->to_string();
                break;
            case GidmEvent::Kind::receive:
                out << name(ev.actor) << " receives an item at price "
                    << ev.price->to_string();
                break;
            case GidmEvent::Kind::decline:
                out << name(ev.actor) << " declines at price " << ev.price->to_string();
                break;
            case GidmEvent::Kind::allocate:
                out << name(ev.actor) << " ends with " << items(ev.count) << ", paying "
                    << ev.price->to_string();
                break;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace netauct
