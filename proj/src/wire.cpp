#include "fedkm/wire.hpp"

#include <json.hpp>

#include "fedkm/errors.hpp"

namespace fedkm {

namespace {

constexpr const char* wire_format = "fkm/1";

nlohmann::json clusters_to_json(const ClusterSet& cs) {
    return {
        {"k", cs.k},
        {"d", cs.d},
        {"means", cs.means},
        {"counts", cs.counts},
    };
}

ClusterSet clusters_from_json(const nlohmann::json& doc) {
    ClusterSet cs;
    cs.k = doc.at("k").get<int>();
    cs.d = doc.at("d").get<int>();
    cs.means = doc.at("means").get<std::vector<double>>();
    cs.counts = doc.at("counts").get<std::vector<std::int64_t>>();
    if (cs.means.size() != static_cast<std::size_t>(cs.k) * cs.d ||
        cs.counts.size() != static_cast<std::size_t>(cs.k))
        throw protocol_error("message shape does not match its payload", -1);
    cs.validate(/*allow_empty=*/true);
    return cs;
}

nlohmann::json decode(std::span<const std::uint8_t> bytes, const char* expect_type) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::from_cbor(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw protocol_error(std::string("undecodable message: ") + e.what(), -1);
    }
    if (!doc.is_object() || doc.value("format", "") != wire_format)
        throw protocol_error("unknown message format", -1);
    if (doc.value("type", "") != expect_type)
        throw protocol_error("unexpected message type '" + doc.value("type", "") + "'",
                             -1);
    return doc;
}

} // namespace

std::vector<std::uint8_t> to_wire(const ClientUpdate& update) {
    nlohmann::json doc = clusters_to_json(update.clusters);
    doc["format"] = wire_format;
    doc["type"] = "client_update";
    doc["client_id"] = update.client_id;
    return nlohmann::json::to_cbor(doc);
}

std::vector<std::uint8_t> to_wire(const GlobalModel& model) {
    nlohmann::json doc = clusters_to_json(model.means);
    doc["format"] = wire_format;
    doc["type"] = "global_model";
    doc["round"] = model.round;
    return nlohmann::json::to_cbor(doc);
}

ClientUpdate client_update_from_wire(std::span<const std::uint8_t> bytes) {
    const nlohmann::json doc = decode(bytes, "client_update");
    ClientUpdate update;
    update.client_id = doc.at("client_id").get<int>();
    update.clusters = clusters_from_json(doc);
    return update;
}

GlobalModel global_model_from_wire(std::span<const std::uint8_t> bytes) {
    const nlohmann::json doc = decode(bytes, "global_model");
    GlobalModel model;
    model.round = doc.at("round").get<int>();
    model.means = clusters_from_json(doc);
    if (model.means.k < 1)
        throw protocol_error("global model must carry at least one mean", -1);
    return model;
}

} // namespace fedkm
