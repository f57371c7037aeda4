// Command-line front end: validation, faces, potentials, distances,
// sequences, enumeration and brute-force verification of fixture files.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "flipdist/fixture.hpp"

using namespace flipdist;
using nlohmann::json;

namespace {

struct Options {
    std::string path;
    std::string from, to;
    std::string format = "text";
    std::string mode;  // empty = as the fixture says
    int ref_face = -1;
    uint64_t peel_seed = 0;
    std::size_t budget = 1'000'000;
    bool replay = false;
};

std::optional<FaceId> ref_face(const Options& opt) {
    if (opt.ref_face < 0) return std::nullopt;
    return opt.ref_face;
}

// Reinterprets the fixture on the other surface when --mode asks for it.
// Going from sphere to plane needs --ref-face to name the new outer face.
Fixture load_with_mode(const Options& opt) {
    Fixture fixture = load_fixture(opt.path);
    if (opt.mode.empty() || opt.mode == to_string(fixture.embedding.mode()))
        return fixture;
    nlohmann::json doc = fixture_json(fixture);
    doc["mode"] = opt.mode;
    if (opt.mode == "sphere") {
        doc.erase("outer_face");
    } else {
        if (opt.ref_face < 0)
            throw parse_error("turning a sphere fixture into a plane one needs "
                              "--ref-face to pick the outer face");
        const HalfEdge& h =
            fixture.embedding.face(opt.ref_face).boundary.front();
        doc["outer_face"] = {h.edge, h.tail};
    }
    return parse_fixture(doc);
}

void print(const Options& opt, const json& as_json, const std::string& as_text) {
    if (opt.format == "json") std::cout << as_json.dump(2) << "\n";
    else std::cout << as_text;
}

int cmd_check(const Options& opt) {
    Fixture fixture = load_with_mode(opt);
    const Embedding& emb = fixture.embedding;
    json out;
    out["mode"] = to_string(emb.mode());
    out["vertices"] = emb.vertex_count();
    out["edges"] = emb.edge_count();
    out["faces"] = emb.face_count();
    std::ostringstream text;
    text << "mode " << to_string(emb.mode()) << ", " << emb.vertex_count()
         << " vertices, " << emb.edge_count() << " edges, " << emb.face_count()
         << " faces";
    if (emb.mode() == SurfaceMode::plane) {
        out["outer_face"] = emb.outer_face();
        text << ", outer face " << emb.outer_face();
    }
    text << "\n";
    if (fixture.alpha) {
        out["alpha_sum"] = fixture.alpha->sum();
        text << "alpha sums to " << fixture.alpha->sum() << " (edges: "
             << emb.edge_count() << ")\n";
    }
    json named = json::object();
    for (const auto& [name, dirs] : fixture.orientations) {
        Orientation d = fixture.orientation(name);
        json entry;
        entry["strongly_connected"] = is_strongly_connected(d);
        if (fixture.alpha)
            entry["alpha_orientation"] = is_alpha_orientation(d, *fixture.alpha);
        named[name] = entry;
        text << "orientation " << name
             << (is_strongly_connected(d) ? ": strongly connected"
                                          : ": not strongly connected");
        if (fixture.alpha)
            text << (is_alpha_orientation(d, *fixture.alpha)
                         ? ", matches alpha"
                         : ", does not match alpha");
        text << "\n";
    }
    out["orientations"] = named;
    print(opt, out, text.str());
    return 0;
}

int cmd_faces(const Options& opt) {
    Fixture fixture = load_with_mode(opt);
    const Embedding& emb = fixture.embedding;
    json out = json::array();
    std::ostringstream text;
    for (const Face& f : emb.faces()) {
        json boundary = json::array();
        text << "face " << f.id;
        if (emb.mode() == SurfaceMode::plane && f.id == emb.outer_face())
            text << " (outer)";
        text << ":";
        for (const HalfEdge& h : f.boundary) {
            boundary.push_back({h.edge, h.tail, h.head});
            text << " " << h.tail << "-[" << h.edge << "]->" << h.head;
        }
        text << "\n";
        out.push_back({{"id", f.id}, {"boundary", boundary}});
    }
    print(opt, out, text.str());
    return 0;
}

int cmd_find_orientation(const Options& opt) {
    Fixture fixture = load_with_mode(opt);
    if (!fixture.alpha) throw parse_error("fixture has no alpha");
    auto found = find_alpha_orientation(fixture.embedding, *fixture.alpha);
    if (!found) {
        std::cerr << "infeasible: no orientation matches alpha\n";
        return 1;
    }
    std::ostringstream text;
    for (const auto& e : fixture.embedding.edges()) {
        HalfEdge h = found->directed(e.id);
        text << e.id << ": " << h.tail << " -> " << h.head << "\n";
    }
    print(opt, orientation_json(*found), text.str());
    return 0;
}

std::pair<Orientation, Orientation> named_pair(const Fixture& fixture,
                                               const Options& opt) {
    if (opt.from.empty() || opt.to.empty())
        throw parse_error("--from and --to orientation names are required");
    return {fixture.orientation(opt.from), fixture.orientation(opt.to)};
}

int cmd_potential(const Options& opt) {
    Fixture fixture = load_with_mode(opt);
    auto [dp, d] = named_pair(fixture, opt);
    const Embedding& emb = fixture.embedding;
    EulerianDifference diff = difference(dp, d);
    PotentialMap map =
        emb.mode() == SurfaceMode::plane
            ? plane_potential(diff, emb)
            : sphere_potential(diff, emb,
                               ref_face(opt).value_or(emb.faces().front().id));
    std::ostringstream text;
    text << "reference face " << map.reference << "\n";
    for (const Face& f : emb.faces())
        text << "face " << f.id << ": " << map.at(f.id) << "\n";
    json out;
    out["reference"] = map.reference;
    out["potential"] = potential_json(map);
    print(opt, out, text.str());
    return 0;
}

int certificate_command(const Options& opt) {
    Fixture fixture = load_with_mode(opt);
    auto [dp, d] = named_pair(fixture, opt);
    DistanceCertificate cert =
        distance_certificate(dp, d, ref_face(opt), opt.peel_seed);
    std::ostringstream text;
    if (cert.distance) {
        text << "distance " << *cert.distance << "\n";
        text << "sequence:";
        for (FaceId g : cert.sequence.flips) text << " " << g;
        text << "\n";
    } else {
        text << "incomparable\n";
    }
    if (opt.replay && cert.distance) {
        Orientation replay = apply_sequence(dp, cert.sequence);
        if (orientation_json(replay).dump() != orientation_json(d).dump())
            throw invariant_error("sequence replay did not reproduce the target");
        text << "replay ok: sequence reproduces --to exactly\n";
    }
    print(opt, certificate_json(cert), text.str());
    return cert.distance ? 0 : 1;
}

int cmd_enumerate(const Options& opt) {
    Fixture fixture = load_with_mode(opt);
    if (!fixture.alpha) throw parse_error("fixture has no alpha");
    OrientationUniverse universe =
        enumerate_alpha_orientations(fixture.embedding, *fixture.alpha, opt.budget);
    json out;
    out["count"] = universe.size();
    out["orientations"] = json::array();
    for (const Orientation& d : universe.all)
        out["orientations"].push_back(orientation_json(d));
    std::ostringstream text;
    text << universe.size() << " alpha-orientations\n";
    print(opt, out, text.str());
    return 0;
}

int cmd_verify(const Options& opt) {
    Fixture fixture = load_with_mode(opt);
    if (!fixture.alpha) throw parse_error("fixture has no alpha");
    VerifyReport report =
        verify_instance(fixture.embedding, *fixture.alpha, opt.budget);
    print(opt, report_json(report), report.text());
    return report.all_pass() ? 0 : 1;
}

int cmd_export_dot(const Options& opt) {
    Fixture fixture = load_with_mode(opt);
    const Embedding& emb = fixture.embedding;
    std::optional<Orientation> from;
    std::optional<PotentialMap> potential;
    if (!opt.from.empty()) from = fixture.orientation(opt.from);
    if (!opt.from.empty() && !opt.to.empty()) {
        EulerianDifference diff = difference(*from, fixture.orientation(opt.to));
        potential = emb.mode() == SurfaceMode::plane
                        ? plane_potential(diff, emb)
                        : sphere_potential(diff, emb,
                                           ref_face(opt).value_or(
                                               emb.faces().front().id));
    }
    std::cout << dot_export(emb, from ? &*from : nullptr,
                            potential ? &*potential : nullptr);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flip distances between alpha-orientations of plane and "
                 "sphere embedded graphs"};
    app.require_subcommand(1);

    Options opt;
    std::string command;
    struct Sub {
        const char* name;
        const char* help;
        bool pair;
    };
    const Sub subs[] = {
        {"check", "validate a fixture and report its structure", false},
        {"faces", "list the faces of the embedding", false},
        {"find-orientation", "find an orientation matching the fixture's alpha", false},
        {"potential", "face potential of the difference of two orientations", true},
        {"distance", "flip distance with a full certificate", true},
        {"sequence", "minimum flip sequence with a full certificate", true},
        {"enumerate", "list every alpha-orientation", false},
        {"verify", "brute-force verification of the whole instance", false},
        {"export-dot", "GraphViz export", false},
    };
    for (const Sub& sub : subs) {
        CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
        cmd->add_option("fixture", opt.path, "fixture JSON file")->required();
        cmd->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--mode", opt.mode,
                        "reinterpret the fixture on this surface")
            ->check(CLI::IsMember({"plane", "sphere"}));
        cmd->add_option("--from", opt.from, "source orientation name");
        cmd->add_option("--to", opt.to, "target orientation name");
        cmd->add_option("--ref-face", opt.ref_face,
                        "reference face id (sphere mode)");
        cmd->add_option("--peel-seed", opt.peel_seed,
                        "tie-break seed for the cycle decomposition");
        cmd->add_option("--budget", opt.budget, "enumeration budget");
        cmd->add_flag("--replay", opt.replay,
                      "re-apply the sequence and check it reproduces --to");
        cmd->callback([&command, name = std::string(sub.name)] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (command == "check") return cmd_check(opt);
        if (command == "faces") return cmd_faces(opt);
        if (command == "find-orientation") return cmd_find_orientation(opt);
        if (command == "potential") return cmd_potential(opt);
        if (command == "distance") return certificate_command(opt);
        if (command == "sequence") return certificate_command(opt);
        if (command == "enumerate") return cmd_enumerate(opt);
        if (command == "verify") return cmd_verify(opt);
        if (command == "export-dot") return cmd_export_dot(opt);
        std::cerr << "unknown command\n";
        return 2;
    } catch (const parse_error& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return 2;
    } catch (const invariant_error& ex) {
        std::cerr << "internal error: " << ex.what() << "\n";
        return 3;
    } catch (const domain_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
