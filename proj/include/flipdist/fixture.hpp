#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "flipdist/embedding.hpp"
#include "flipdist/flips.hpp"
#include "flipdist/oracle.hpp"
#include "flipdist/orientation.hpp"

namespace flipdist {

// An input document: the embedding plus optional alpha and named orientations.
//
// {"mode":"plane|sphere",
//  "vertices":[{"id":int,"rotation":[edgeId,...]}],
//  "edges":[{"id":int,"ends":[vid,vid]}],
//  "outer_face":[edgeId, tailVid],          // plane mode only
//  "alpha":{"vid":int},                     // optional
//  "orientations":{"name":{"edgeId":[tail,head]}}}  // optional
struct Fixture {
    Embedding embedding;
    std::optional<AlphaSpec> alpha;
    std::map<std::string, std::map<EdgeId, std::pair<VertexId, VertexId>>> orientations;

    Orientation orientation(const std::string& name) const;
};

Embedding parse_embedding(const nlohmann::json& doc);
Fixture parse_fixture(const nlohmann::json& doc);
Fixture load_fixture(const std::string& path);

nlohmann::json fixture_json(const Fixture& fixture);
nlohmann::json orientation_json(const Orientation& d);
nlohmann::json potential_json(const PotentialMap& map);
nlohmann::json cycle_system_json(const CycleSystem& system);
nlohmann::json certificate_json(const DistanceCertificate& cert);
nlohmann::json report_json(const VerifyReport& report);

// GraphViz export: one node per vertex; directed edges when an orientation
// is supplied, plain edges otherwise; faces (and potentials, when given)
// appear as comments.
std::string dot_export(const Embedding& emb, const Orientation* orientation,
                       const PotentialMap* potential);

}  // namespace flipdist
