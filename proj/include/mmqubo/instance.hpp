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

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mmqubo {

/// A capacitated network link. Ids are 0-based and equal the track's position.
struct Track {
    int id = 0;
    int capacity = 0;
    /// The capacity is always binding: the constraint is encoded as an
    /// equality and carries no slack bits.
    bool equality = false;
};

/// A multimodal route: its cost and the sorted, duplicate-free set of tracks it uses.
struct Route {
    double cost = 0.0;
    std::vector<int> tracks;

    bool uses(int track) const;
};

struct Container {
    int id = 0;
    double truck_cost = 0.0;
    /// One route for two-alternative instances, three (r_1, r_2, r_3) for
    /// four-alternative instances.
    std::vector<Route> barge_routes;
};

enum class Variant { TwoAlt, FourAlt };

std::string_view to_string(Variant v);

/// Transport choice of one container: the truck, or barge route k (1-based).
class Mode {
 public:
    constexpr Mode() = default;

    static constexpr Mode truck() { return Mode(0); }
    static constexpr Mode barge(int route) { return Mode(static_cast<std::uint8_t>(route)); }

    constexpr bool is_truck() const { return value_ == 0; }
    /// 1-based route number; 0 for the truck.
    constexpr int route() const { return value_; }

    /// Truck orders before routes 1, 2, 3.
    constexpr auto operator<=>(const Mode&) const = default;

 private:
    constexpr explicit Mode(std::uint8_t v) : value_(v) {}
    std::uint8_t value_ = 0;
};

using Assignment = std::vector<Mode>;

struct EvaluationResult {
    double total_cost = 0.0;
    std::vector<int> track_loads;
    std::vector<int> violated_tracks;
    bool feasible = true;
};

/// A validated container-assignment problem. Immutable after construction.
class ProblemInstance {
 public:
    /// Validates and normalizes (sorts route track sets). Throws InstanceError.
    ProblemInstance(std::vector<Container> containers, std::vector<Track> tracks);

    const std::vector<Container>& containers() const { return containers_; }
    const std::vector<Track>& tracks() const { return tracks_; }
    std::size_t num_containers() const { return containers_.size(); }
    std::size_t num_tracks() const { return tracks_.size(); }
    Variant variant() const { return variant_; }
    /// Number of alternatives per container including the truck (2 or 4).
    int num_alternatives() const { return variant_ == Variant::TwoAlt ? 2 : 4; }

    /// Cost of sending container i via mode m.
    double cost(std::size_t container, Mode m) const;

    /// Number of containers with at least one barge route through the track.
    int potential_load(int track) const;

    /// Non-fatal findings (e.g. empty barge routes).
    const std::vector<std::string>& warnings() const { return warnings_; }

 private:
    std::vector<Container> containers_;
    std::vector<Track> tracks_;
    Variant variant_ = Variant::TwoAlt;
    std::vector<std::string> warnings_;
};

ProblemInstance parse_instance(const nlohmann::json& document);
/// Parses JSON text; malformed JSON is reported as an InstanceError.
ProblemInstance parse_instance_text(std::string_view text);
ProblemInstance load_instance(const std::string& path);
nlohmann::json to_json(const ProblemInstance& instance);

/// Throws std::invalid_argument if the assignment has the wrong length or
/// names a route the container does not have.
EvaluationResult evaluate_assignment(const ProblemInstance& instance, const Assignment& a);

/// 1-based ids of the containers sent by truck, e.g. "{4,7,8}".
std::string format_truck_set(const Assignment& a);

}  // namespace mmqubo
