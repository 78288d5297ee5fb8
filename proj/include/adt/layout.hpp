/*
 * Copyright 2026 The adtool-cpp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/** \file
 * Linear time tidy tree layout: Walker's algorithm with the improvements
 * of Buchheim, Juenger and Leipert.
 *
 * Coordinates are abstract units of node centers; the root sits at (0, 0)
 * and y grows downwards. A node's counter is placed as its last child.
 */

#ifndef ADT_LAYOUT_HPP
#define ADT_LAYOUT_HPP

#include <unordered_map>

#include "adt/model.hpp"

namespace adt {

struct LayoutConfig {
    double nodeWidth = 120;
    double nodeHeight = 40;
    /// Horizontal gap between nodes with the same parent.
    double siblingGap = 20;
    /// Horizontal gap between neighbours with different parents.
    double subtreeGap = 40;
    double levelGap = 60;

    /// Throws std::invalid_argument unless every field is positive.
    void validate() const;
};

struct Point {
    double x = 0;
    double y = 0;

    friend bool operator==(const Point &, const Point &) = default;
};

struct Bounds {
    double minX = 0, minY = 0, maxX = 0, maxY = 0;

    friend bool operator==(const Bounds &, const Bounds &) = default;
};

struct LayoutResult {
    std::unordered_map<NodeId, Point, NodeIdHash> positions;
    Bounds bounds;

    bool contains(NodeId id) const { return positions.count(id) != 0; }

    friend bool operator==(const LayoutResult &, const LayoutResult &) = default;
};

/// When `respectFold` is set, descendants of folded nodes are omitted; the
/// folded node itself is still placed.
LayoutResult layout(const AdTree &tree, const LayoutConfig &config = {}, bool respectFold = false);

} // namespace adt

#endif
