#include "lcpbridge/pivot/equal.hpp"

#include <map>
#include <set>
#include <tuple>

namespace lcpbridge::pivot {

namespace {

template <typename T, typename KeyFn>
std::map<std::string, const T*> index(const std::vector<T>& items, KeyFn key) {
    std::map<std::string, const T*> out;
    for (const auto& item : items) out.emplace(key(item), &item);
    return out;
}

template <typename T, typename Eq>
bool same_keyed(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
    if (a.size() != b.size()) return false;
    auto by_name = [](const T& t) { return t.name; };
    const auto ia = index(a, by_name);
    const auto ib = index(b, by_name);
    if (ia.size() != a.size() || ib.size() != b.size()) return false;
    for (const auto& [name, item] : ia) {
        auto it = ib.find(name);
        if (it == ib.end() || !eq(*item, *it->second)) return false;
    }
    return true;
}

bool class_equal(const Class& a, const Class& b) {
    return same_keyed(a.properties, b.properties, [](const Property& x, const Property& y) { return x == y; });
}

bool enum_equal(const Enumeration& a, const Enumeration& b) {
    return std::set<std::string>(a.literals.begin(), a.literals.end()) ==
           std::set<std::string>(b.literals.begin(), b.literals.end());
}

bool assoc_equal(const Association& a, const Association& b) {
    return (a.end1 == b.end1 && a.end2 == b.end2) || (a.end1 == b.end2 && a.end2 == b.end1);
}

std::set<std::pair<std::string, std::string>> edge_set(const std::vector<Generalization>& gs) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& g : gs) out.emplace(g.general, g.specific);
    return out;
}

}  // namespace

bool model_equal(const DomainModel& a, const DomainModel& b) {
    return a.name == b.name && a.generalizations.size() == b.generalizations.size() &&
           edge_set(a.generalizations) == edge_set(b.generalizations) &&
           same_keyed(a.classes, b.classes, class_equal) &&
           same_keyed(a.enumerations, b.enumerations, enum_equal) &&
           same_keyed(a.associations, b.associations, assoc_equal);
}

}  // namespace lcpbridge::pivot
