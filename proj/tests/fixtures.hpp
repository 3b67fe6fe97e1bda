#pragma once

#include <string>

#include "pathfreq/tree.hpp"

namespace pathfreq::testfix {

// 7-node fixture: root 1; children 2,3; 4,5 under 2; 6,7 under 3.
// Colors 1,2,1,2,3,1,3; weights 5,1,2,1,7,3,2.
inline std::string t7_text() {
  return "7\n1 1 2 2 3 3\n1 2 1 2 3 1 3\n5 1 2 1 7 3 2\n";
}

inline ColoredTree t7() { return parse_tree(t7_text()); }

// 6-node path 1-2-3-4-5-6 rooted at 1, all colors distinct.
inline ColoredTree path6() { return parse_tree("6\n1 2 3 4 5\n1 2 3 4 5 6\n"); }

}  // namespace pathfreq::testfix
