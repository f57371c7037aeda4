#include "flipdist/fixture.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace flipdist {

using nlohmann::json;

namespace {

int int_field(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_number_integer())
        throw parse_error(std::string("missing or non-integer field '") + key + "'");
    return obj[key].get<int>();
}

int parse_id_key(const std::string& key, const char* what) {
    try {
        size_t used = 0;
        int value = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
        return value;
    } catch (const std::exception&) {
        throw parse_error(std::string("bad ") + what + " key '" + key + "'");
    }
}

}  // namespace

Orientation Fixture::orientation(const std::string& name) const {
    auto it = orientations.find(name);
    if (it == orientations.end())
        throw domain_error("fixture has no orientation named '" + name + "'");
    return Orientation::from_directions(embedding, it->second);
}

Embedding parse_embedding(const json& doc) {
    if (!doc.is_object()) throw parse_error("document is not a JSON object");
    if (!doc.contains("mode") || !doc["mode"].is_string())
        throw parse_error("missing mode (\"plane\" or \"sphere\")");
    std::string mode_name = doc["mode"].get<std::string>();
    SurfaceMode mode;
    if (mode_name == "plane") mode = SurfaceMode::plane;
    else if (mode_name == "sphere") mode = SurfaceMode::sphere;
    else throw parse_error("mode must be \"plane\" or \"sphere\", got \"" + mode_name + "\"");

    if (!doc.contains("vertices") || !doc["vertices"].is_array())
        throw parse_error("missing vertices array");
    if (!doc.contains("edges") || !doc["edges"].is_array())
        throw parse_error("missing edges array");

    std::vector<Embedding::VertexSpec> vertices;
    for (const json& v : doc["vertices"]) {
        Embedding::VertexSpec spec;
        spec.id = int_field(v, "id");
        if (!v.contains("rotation") || !v["rotation"].is_array())
            throw parse_error("vertex " + std::to_string(spec.id) +
                              " is missing its rotation");
        for (const json& e : v["rotation"]) {
            if (!e.is_number_integer())
                throw parse_error("rotation of vertex " + std::to_string(spec.id) +
                                  " contains a non-integer");
            spec.rotation.push_back(e.get<int>());
        }
        vertices.push_back(std::move(spec));
    }

    std::vector<Embedding::EdgeSpec> edges;
    for (const json& e : doc["edges"]) {
        Embedding::EdgeSpec spec;
        spec.id = int_field(e, "id");
        if (!e.contains("ends") || !e["ends"].is_array() || e["ends"].size() != 2 ||
            !e["ends"][0].is_number_integer() || !e["ends"][1].is_number_integer())
            throw parse_error("edge " + std::to_string(spec.id) +
                              " needs ends:[vid,vid]");
        spec.u = e["ends"][0].get<int>();
        spec.v = e["ends"][1].get<int>();
        edges.push_back(spec);
    }

    std::optional<HalfEdge> outer;
    if (doc.contains("outer_face")) {
        const json& of = doc["outer_face"];
        if (!of.is_array() || of.size() != 2 || !of[0].is_number_integer() ||
            !of[1].is_number_integer())
            throw parse_error("outer_face must be [edgeId, tailVertexId]");
        EdgeId eid = of[0].get<int>();
        VertexId tail = of[1].get<int>();
        for (const auto& spec : edges) {
            if (spec.id != eid) continue;
            if (tail != spec.u && tail != spec.v)
                throw parse_error("outer_face tail " + std::to_string(tail) +
                                  " is not an endpoint of edge " + std::to_string(eid));
            outer = HalfEdge{eid, tail, spec.u == tail ? spec.v : spec.u};
        }
        if (!outer) throw parse_error("outer_face names unknown edge " +
                                      std::to_string(eid));
    }

    return Embedding::build(mode, std::move(vertices), std::move(edges), outer);
}

Fixture parse_fixture(const json& doc) {
    Fixture fixture{parse_embedding(doc), std::nullopt, {}};

    if (doc.contains("alpha")) {
        if (!doc["alpha"].is_object()) throw parse_error("alpha must be an object");
        AlphaSpec alpha;
        for (const auto& [key, value] : doc["alpha"].items()) {
            if (!value.is_number_integer())
                throw parse_error("alpha values must be integers");
            alpha.out_degree[parse_id_key(key, "alpha vertex")] = value.get<int>();
        }
        fixture.alpha = std::move(alpha);
    }

    if (doc.contains("orientations")) {
        if (!doc["orientations"].is_object())
            throw parse_error("orientations must be an object");
        for (const auto& [name, dirs] : doc["orientations"].items()) {
            if (!dirs.is_object())
                throw parse_error("orientation '" + name + "' must map edges to "
                                  "[tail, head]");
            std::map<EdgeId, std::pair<VertexId, VertexId>> mapping;
            for (const auto& [key, value] : dirs.items()) {
                if (!value.is_array() || value.size() != 2 ||
                    !value[0].is_number_integer() || !value[1].is_number_integer())
                    throw parse_error("orientation '" + name + "' edge " + key +
                                      " must be [tail, head]");
                mapping[parse_id_key(key, "orientation edge")] = {
                    value[0].get<int>(), value[1].get<int>()};
            }
            // validate now so bad fixtures fail on load
            Orientation::from_directions(fixture.embedding, mapping);
            fixture.orientations.emplace(name, std::move(mapping));
        }
    }
    return fixture;
}

Fixture load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& ex) {
        throw parse_error("invalid JSON in '" + path + "': " + ex.what());
    }
    return parse_fixture(doc);
}

json fixture_json(const Fixture& fixture) {
    const Embedding& emb = fixture.embedding;
    json doc;
    doc["mode"] = to_string(emb.mode());
    doc["vertices"] = json::array();
    for (const auto& v : emb.vertices())
        doc["vertices"].push_back({{"id", v.id}, {"rotation", v.rotation}});
    doc["edges"] = json::array();
    for (const auto& e : emb.edges())
        doc["edges"].push_back({{"id", e.id}, {"ends", {e.u, e.v}}});
    if (emb.mode() == SurfaceMode::plane) {
        const HalfEdge& h = emb.face(emb.outer_face()).boundary.front();
        doc["outer_face"] = {h.edge, h.tail};
    }
    if (fixture.alpha) {
        json alpha = json::object();
        for (const auto& [v, a] : fixture.alpha->out_degree)
            alpha[std::to_string(v)] = a;
        doc["alpha"] = alpha;
    }
    if (!fixture.orientations.empty()) {
        json all = json::object();
        for (const auto& [name, dirs] : fixture.orientations) {
            json one = json::object();
            for (const auto& [e, dir] : dirs)
                one[std::to_string(e)] = {dir.first, dir.second};
            all[name] = one;
        }
        doc["orientations"] = all;
    }
    return doc;
}

json orientation_json(const Orientation& d) {
    json out = json::object();
    for (const auto& e : d.embedding().edges()) {
        HalfEdge h = d.directed(e.id);
        out[std::to_string(e.id)] = {h.tail, h.head};
    }
    return out;
}

json potential_json(const PotentialMap& map) {
    json out = json::object();
    for (const Face& f : map.embedding->faces())
        out[std::to_string(f.id)] = map.at(f.id);
    return out;
}

json cycle_system_json(const CycleSystem& system) {
    json out = json::array();
    for (const DirectedCycle& c : system.cycles) {
        json edges = json::array();
        for (const HalfEdge& h : c.walk) edges.push_back({h.edge, h.tail, h.head});
        json entry;
        entry["edges"] = edges;
        if (system.classified) {
            entry["class"] = c.turn == Turn::ccw ? "ccw" : "cw";
            entry["parent"] = c.parent >= 0 ? json(c.parent) : json(nullptr);
        }
        out.push_back(entry);
    }
    return out;
}

json certificate_json(const DistanceCertificate& cert) {
    json out;
    out["mode"] = to_string(cert.mode);
    out["distance"] = cert.distance ? json(*cert.distance) : json("incomparable");
    out["potential"] = potential_json(cert.potential);
    out["cycles"] = cycle_system_json(cert.cycles);
    out["sequence"] = cert.sequence.flips;
    json counts = json::object();
    for (const auto& [f, t] : cert.per_face_counts) counts[std::to_string(f)] = t;
    out["per_face_counts"] = counts;
    return out;
}

json report_json(const VerifyReport& report) {
    json out;
    out["instance"] = report.instance;
    out["pass"] = report.all_pass();
    out["checks"] = json::array();
    for (const auto& c : report.checks)
        out["checks"].push_back(
            {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return out;
}

std::string dot_export(const Embedding& emb, const Orientation* orientation,
                       const PotentialMap* potential) {
    std::ostringstream out;
    out << (orientation ? "digraph" : "graph") << " embedding {\n";
    out << "  // mode: " << to_string(emb.mode()) << "\n";
    for (const Face& f : emb.faces()) {
        out << "  // face " << f.id;
        if (emb.mode() == SurfaceMode::plane && f.id == emb.outer_face())
            out << " (outer)";
        out << ":";
        for (const HalfEdge& h : f.boundary) out << " " << h.tail;
        if (potential) out << "  potential " << potential->at(f.id);
        out << "\n";
    }
    for (const auto& v : emb.vertices()) out << "  " << v.id << ";\n";
    for (const auto& e : emb.edges()) {
        if (orientation) {
            HalfEdge h = orientation->directed(e.id);
            out << "  " << h.tail << " -> " << h.head;
        } else {
            out << "  " << e.u << " -- " << e.v;
        }
        out << " [label=\"" << e.id << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace flipdist
