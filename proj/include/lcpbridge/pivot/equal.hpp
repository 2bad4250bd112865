#pragma once

#include "lcpbridge/pivot/model.hpp"

namespace lcpbridge::pivot {

/// Structural equality up to collection ordering: classes, properties,
/// associations, enumerations and literals are compared as sets keyed by
/// name, generalizations as a set of pairs, and association ends as an
/// unordered pair.
bool model_equal(const DomainModel& a, const DomainModel& b);

}  // namespace lcpbridge::pivot
