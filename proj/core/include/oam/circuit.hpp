#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oam/elements.hpp"

namespace oam {

// A directed acyclic optical circuit. Wires (ports) are produced exactly once
// (by a source declaration or an element output) and consumed at most once;
// in-place elements act on a live wire without retiring it. Elements are kept
// in the order they were added, which is by construction a topological order:
// every add validates that its inputs already exist and are still live, so
// cyclic graphs cannot be expressed.
class Circuit {
 public:
  void add_source(const PathId& port);
  void add_element(Element e);
  void add_detector(const std::string& name, const PathId& port);

  const std::vector<PathId>& sources() const { return sources_; }
  const std::vector<Element>& elements() const { return elements_; }
  // Detector (name, port) pairs in declaration order.
  const std::vector<std::pair<std::string, PathId>>& detectors() const {
    return detectors_;
  }

  bool is_source(const PathId& port) const;
  bool has_detector(const std::string& name) const;
  PathId detector_port(const std::string& name) const;  // throws if unknown

  // Wires that are still live at the end (not consumed): detector ports,
  // sorter rejects and any dangling outputs.
  std::vector<PathId> terminal_ports() const;
  // Detector name for a port, or empty if the port is not detected.
  std::string detector_name_for(const PathId& port) const;

  // Sources compare as sets, elements as an exact sequence, detectors as a map.
  bool operator==(const Circuit& other) const;

 private:
  void require_live(const PathId& port, const char* what) const;
  void produce(const PathId& port);

  std::vector<PathId> sources_;
  std::vector<Element> elements_;
  std::vector<std::pair<std::string, PathId>> detectors_;

  std::set<PathId> produced_;
  std::set<PathId> consumed_;
  std::set<PathId> detected_;
};

}  // namespace oam
