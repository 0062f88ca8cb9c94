// Copyright 2026 The mmqubo Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "mmqubo/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mmqubo/error.hpp"

namespace mmqubo {

using nlohmann::json;

bool Route::uses(int track) const {
    return std::binary_search(tracks.begin(), tracks.end(), track);
}

std::string_view to_string(Variant v) {
    return v == Variant::TwoAlt ? "TwoAlt" : "FourAlt";
}

namespace {

std::string container_path(std::size_t i) { return "containers[" + std::to_string(i) + "]"; }

void check_cost(double value, const std::string& path) {
    if (!std::isfinite(value)) throw InstanceError(path, "cost must be finite");
    if (value < 0) throw InstanceError(path, "cost must be non-negative");
}

}  // namespace

ProblemInstance::ProblemInstance(std::vector<Container> containers, std::vector<Track> tracks)
        : containers_(std::move(containers)), tracks_(std::move(tracks)) {
    if (containers_.empty()) throw InstanceError("containers", "empty container list");

    const int m = static_cast<int>(tracks_.size());
    for (int j = 0; j < m; ++j) {
        const std::string path = "tracks[" + std::to_string(j) + "]";
        if (tracks_[j].id != j) throw InstanceError(path + ".id", "track ids must be contiguous from 0");
        if (tracks_[j].capacity < 0) throw InstanceError(path + ".capacity", "capacity must be non-negative");
    }

    const std::size_t routes = containers_.front().barge_routes.size();
    if (routes != 1 && routes != 3) {
        throw InstanceError(container_path(0) + ".routes",
                            "expected 1 or 3 barge routes, got " + std::to_string(routes));
    }
    variant_ = routes == 1 ? Variant::TwoAlt : Variant::FourAlt;

    for (std::size_t i = 0; i < containers_.size(); ++i) {
        Container& c = containers_[i];
        const std::string path = container_path(i);
        if (c.id != static_cast<int>(i)) throw InstanceError(path + ".id", "container ids must be contiguous from 0");
        check_cost(c.truck_cost, path + ".truck_cost");
        if (c.barge_routes.size() != routes) {
            throw InstanceError(path + ".routes", "mixed route counts: expected " + std::to_string(routes) +
                                                          ", got " + std::to_string(c.barge_routes.size()));
        }
        for (std::size_t k = 0; k < c.barge_routes.size(); ++k) {
            Route& r = c.barge_routes[k];
            const std::string rpath = path + ".routes[" + std::to_string(k) + "]";
            check_cost(r.cost, rpath + ".cost");
            std::sort(r.tracks.begin(), r.tracks.end());
            r.tracks.erase(std::unique(r.tracks.begin(), r.tracks.end()), r.tracks.end());
            for (int t : r.tracks) {
                if (t < 0 || t >= m) {
                    throw InstanceError(rpath + ".tracks", "container " + std::to_string(i) +
                                                                   " references track index " + std::to_string(t) +
                                                                   " outside 0.." + std::to_string(m - 1));
                }
            }
            if (r.tracks.empty()) {
                warnings_.push_back(rpath + ": route uses no tracks");
            }
        }
    }
}

double ProblemInstance::cost(std::size_t container, Mode mode) const {
    const Container& c = containers_.at(container);
    if (mode.is_truck()) return c.truck_cost;
    return c.barge_routes.at(static_cast<std::size_t>(mode.route() - 1)).cost;
}

int ProblemInstance::potential_load(int track) const {
    int count = 0;
    for (const Container& c : containers_) {
        if (std::any_of(c.barge_routes.begin(), c.barge_routes.end(),
                        [track](const Route& r) { return r.uses(track); })) {
            ++count;
        }
    }
    return count;
}

namespace {

int require_int(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw InstanceError(path + "." + key, "missing field");
    if (!it->is_number_integer()) throw InstanceError(path + "." + key, "expected an integer");
    return it->get<int>();
}

double require_number(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw InstanceError(path + "." + key, "missing field");
    if (!it->is_number()) throw InstanceError(path + "." + key, "expected a number");
    return it->get<double>();
}

const json& require_array(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw InstanceError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw InstanceError(path.empty() ? key : path + "." + key, "missing field");
    if (!it->is_array()) throw InstanceError(path.empty() ? key : path + "." + key, "expected an array");
    return *it;
}

// Accepts ids that are contiguous from 0 or from 1; returns the base.
int id_base(const json& items, const std::string& path) {
    if (items.empty()) return 0;
    bool has_ids = false;
    for (const auto& item : items) has_ids = has_ids || (item.is_object() && item.contains("id"));
    if (!has_ids) return 0;
    const int first = require_int(items[0], "id", path + "[0]");
    if (first != 0 && first != 1) throw InstanceError(path + "[0].id", "ids must start at 0 or 1");
    for (std::size_t i = 0; i < items.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (require_int(items[i], "id", p) != first + static_cast<int>(i)) {
            throw InstanceError(p + ".id", "ids must be unique and contiguous");
        }
    }
    return first;
}

Route parse_route(const json& doc, const std::string& path, int num_tracks) {
    Route r;
    r.cost = require_number(doc, "cost", path);
    const bool has_sparse = doc.contains("tracks");
    const bool has_dense = doc.contains("tracks_dense");
    if (has_sparse == has_dense) throw InstanceError(path, "exactly one of 'tracks' or 'tracks_dense' required");
    if (has_sparse) {
        const json& tracks = require_array(doc, "tracks", path);
        for (std::size_t k = 0; k < tracks.size(); ++k) {
            if (!tracks[k].is_number_integer()) {
                throw InstanceError(path + ".tracks[" + std::to_string(k) + "]", "expected an integer");
            }
            r.tracks.push_back(tracks[k].get<int>());
        }
    } else {
        const json& dense = require_array(doc, "tracks_dense", path);
        if (static_cast<int>(dense.size()) != num_tracks) {
            throw InstanceError(path + ".tracks_dense", "length " + std::to_string(dense.size()) +
                                                                " does not match track count " +
                                                                std::to_string(num_tracks));
        }
        for (std::size_t k = 0; k < dense.size(); ++k) {
            const std::string p = path + ".tracks_dense[" + std::to_string(k) + "]";
            if (!dense[k].is_number_integer()) throw InstanceError(p, "expected 0 or 1");
            const int v = dense[k].get<int>();
            if (v != 0 && v != 1) throw InstanceError(p, "expected 0 or 1");
            if (v == 1) r.tracks.push_back(static_cast<int>(k));
        }
    }
    return r;
}

}  // namespace

ProblemInstance parse_instance(const json& document) {
    if (!document.is_object()) throw InstanceError("", "instance document must be a JSON object");
    const json& tracks_doc = require_array(document, "tracks", "");
    const json& containers_doc = require_array(document, "containers", "");
    if (containers_doc.empty()) throw InstanceError("containers", "empty container list");

    id_base(tracks_doc, "tracks");
    id_base(containers_doc, "containers");

    std::vector<Track> tracks;
    for (std::size_t j = 0; j < tracks_doc.size(); ++j) {
        const std::string path = "tracks[" + std::to_string(j) + "]";
        Track t;
        t.id = static_cast<int>(j);
        t.capacity = require_int(tracks_doc[j], "capacity", path);
        if (t.capacity < 0) throw InstanceError(path + ".capacity", "capacity must be non-negative");
        if (auto it = tracks_doc[j].find("equality"); it != tracks_doc[j].end()) {
            if (!it->is_boolean()) throw InstanceError(path + ".equality", "expected a boolean");
            t.equality = it->get<bool>();
        }
        tracks.push_back(t);
    }

    const int m = static_cast<int>(tracks.size());
    std::vector<Container> containers;
    for (std::size_t i = 0; i < containers_doc.size(); ++i) {
        const std::string path = container_path(i);
        Container c;
        c.id = static_cast<int>(i);
        c.truck_cost = require_number(containers_doc[i], "truck_cost", path);
        const json& routes = require_array(containers_doc[i], "routes", path);
        for (std::size_t k = 0; k < routes.size(); ++k) {
            c.barge_routes.push_back(parse_route(routes[k], path + ".routes[" + std::to_string(k) + "]", m));
        }
        containers.push_back(std::move(c));
    }
    return ProblemInstance(std::move(containers), std::move(tracks));
}

ProblemInstance parse_instance_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InstanceError("", std::string("malformed JSON: ") + e.what());
    }
    return parse_instance(doc);
}

ProblemInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open instance file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_instance_text(buffer.str());
    } catch (const InstanceError& e) {
        throw InstanceError(e.path(), std::string(e.what()) + " (in '" + path + "')");
    }
}

json to_json(const ProblemInstance& instance) {
    json tracks = json::array();
    for (const Track& t : instance.tracks()) {
        json item = {{"id", t.id}, {"capacity", t.capacity}};
        if (t.equality) item["equality"] = true;
        tracks.push_back(item);
    }
    json containers = json::array();
    for (const Container& c : instance.containers()) {
        json routes = json::array();
        for (const Route& r : c.barge_routes) routes.push_back({{"cost", r.cost}, {"tracks", r.tracks}});
        containers.push_back({{"id", c.id}, {"truck_cost", c.truck_cost}, {"routes", routes}});
    }
    return {{"tracks", tracks}, {"containers", containers}};
}

EvaluationResult evaluate_assignment(const ProblemInstance& instance, const Assignment& a) {
    if (a.size() != instance.num_containers()) {
        throw std::invalid_argument("assignment has " + std::to_string(a.size()) + " entries, instance has " +
                                    std::to_string(instance.num_containers()) + " containers");
    }
    EvaluationResult result;
    result.track_loads.assign(instance.num_tracks(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Container& c = instance.containers()[i];
        if (a[i].is_truck()) {
            result.total_cost += c.truck_cost;
            continue;
        }
        const int k = a[i].route();
        if (k < 1 || k > static_cast<int>(c.barge_routes.size())) {
            throw std::invalid_argument("container " + std::to_string(i) + " has no barge route " +
                                        std::to_string(k));
        }
        const Route& r = c.barge_routes[static_cast<std::size_t>(k - 1)];
        result.total_cost += r.cost;
        for (int t : r.tracks) ++result.track_loads[static_cast<std::size_t>(t)];
    }
    for (std::size_t j = 0; j < instance.num_tracks(); ++j) {
        if (result.track_loads[j] > instance.tracks()[j].capacity) {
            result.violated_tracks.push_back(static_cast<int>(j));
        }
    }
    result.feasible = result.violated_tracks.empty();
    return result;
}

std::string format_truck_set(const Assignment& a) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_truck()) continue;
        if (!first) out += ",";
        out += std::to_string(i + 1);
        first = false;
    }
    return out + "}";
}

}  // namespace mmqubo
