#include "rtplan/generators.hpp"

#include <sstream>
#include <stdexcept>

namespace rtplan {

namespace {

constexpr const char* kGripperDomain = R"((define (domain gripper-typed)
  (:requirements :strips :typing)
  (:types room ball gripper)
  (:predicates (at-robby ?r - room)
               (at ?b - ball ?r - room)
               (free ?g - gripper)
               (carry ?o - ball ?g - gripper))
  (:action move
    :parameters (?from ?to - room)
    :precondition (at-robby ?from)
    :effect (and (at-robby ?to) (not (at-robby ?from))))
  (:action pick
    :parameters (?obj - ball ?room - room ?gripper - gripper)
    :precondition (and (at ?obj ?room) (at-robby ?room) (free ?gripper))
    :effect (and (carry ?obj ?gripper) (not (at ?obj ?room)) (not (free ?gripper))))
  (:action drop
    :parameters (?obj - ball ?room - room ?gripper - gripper)
    :precondition (and (carry ?obj ?gripper) (at-robby ?room))
    :effect (and (at ?obj ?room) (free ?gripper) (not (carry ?obj ?gripper)))))
)";

constexpr const char* kFerryDomain = R"((define (domain ferry-typed)
  (:requirements :strips :typing)
  (:types car location)
  (:predicates (at-ferry ?l - location)
               (at ?c - car ?l - location)
               (empty-ferry)
               (on ?c - car))
  (:action sail
    :parameters (?from ?to - location)
    :precondition (at-ferry ?from)
    :effect (and (at-ferry ?to) (not (at-ferry ?from))))
  (:action board
    :parameters (?car - car ?loc - location)
    :precondition (and (at ?car ?loc) (at-ferry ?loc) (empty-ferry))
    :effect (and (on ?car) (not (at ?car ?loc)) (not (empty-ferry))))
  (:action debark
    :parameters (?car - car ?loc - location)
    :precondition (and (on ?car) (at-ferry ?loc))
    :effect (and (at ?car ?loc) (empty-ferry) (not (on ?car)))))
)";

void require_positive(int n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + " size must be at least 1");
}

}  // namespace

GeneratedInstance generate_gripper(int n) {
  require_positive(n, "gripper");
  std::ostringstream p;
  p << "(define (problem gripper-" << n << ")\n  (:domain gripper-typed)\n  (:objects rooma roomb - room left right - gripper";
  for (int i = 1; i <= n; ++i) p << " ball" << i;
  p << " - ball)\n  (:init (at-robby rooma) (free left) (free right)";
  for (int i = 1; i <= n; ++i) p << " (at ball" << i << " rooma)";
  p << ")\n  (:goal (and";
  for (int i = 1; i <= n; ++i) p << " (at ball" << i << " roomb)";
  p << ")))\n";
  return {kGripperDomain, p.str()};
}

GeneratedInstance generate_ferry(int n) {
  require_positive(n, "ferry");
  std::ostringstream p;
  p << "(define (problem ferry-" << n << ")\n  (:domain ferry-typed)\n  (:objects loc1 loc2 - location";
  for (int i = 1; i <= n; ++i) p << " car" << i;
  p << " - car)\n  (:init (at-ferry loc1) (empty-ferry)";
  for (int i = 1; i <= n; ++i) p << " (at car" << i << " loc1)";
  p << ")\n  (:goal (and";
  for (int i = 1; i <= n; ++i) p << " (at car" << i << " loc2)";
  p << ")))\n";
  return {kFerryDomain, p.str()};
}

}  // namespace rtplan
