// Helpers shared by the test binaries.
#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <mindtrace/mindtrace.hpp>

namespace mindtrace::fixtures {

using verify::count_mismatches;
using verify::engine_config;
using verify::strip;

}  // namespace mindtrace::fixtures

namespace mindtrace::fixtures {

/// Sally and Anne in the kitchen; Sally leaves, Anne moves the ball from basket to box.
inline Scenario sally_anne() {
    Scenario s;
    s.id = "sally-anne";
    s.decl.agents = {"Anne", "Sally"};
    s.decl.rooms = {"kitchen", "hall"};
    s.decl.containers = {"basket", "box"};
    s.decl.objects = {"ball"};
    s.initial.agent_room = {{"Anne", "kitchen"}, {"Sally", "kitchen"}};
    s.initial.container_room = {{"basket", "kitchen"}, {"box", "kitchen"}};
    s.initial.object_loc = {{"ball", "basket"}};
    s.events = {{1, Leave{"Sally", "kitchen"}}, {2, Move{"Anne", "ball", "box"}}};
    s.question.kind_hint = "belief";
    s.question.text = "Where does Sally think the ball is?";
    s.question.target_path = {"Sally"};
    s.question.subject.object = "ball";
    s.question.options = {{"A", Claim{AtClaim{"ball", "basket"}}}, {"B", Claim{AtClaim{"ball", "box"}}}};
    s.question.gold = "A";
    s.meta = {"unit", "belief", 1, "hidden"};
    return s;
}

inline Option at_option(const std::string& label, const ObjectId& o, const ContainerId& c) {
    return {label, Claim{AtClaim{o, c}}};
}

}  // namespace mindtrace::fixtures
