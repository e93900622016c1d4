#include "typematch/type_profile.hpp"

#include <cmath>
#include <set>

#include "typematch/error.hpp"

namespace typematch {

void TypeVector::add(const std::string& type_id, double weight) {
    if (!(weight >= 0.0)) throw UsageError("type weight for '" + type_id + "' must be non-negative");
    if (weight == 0.0) return;
    weights_[type_id] += weight;
}

double TypeVector::weight(const std::string& type_id) const {
    const auto it = weights_.find(type_id);
    return it == weights_.end() ? 0.0 : it->second;
}

double TypeVector::dot(const TypeVector& other) const {
    // Walk the smaller map, but always sum in type-id order.
    const auto& [small, large] = size() <= other.size() ? std::pair{this, &other} : std::pair{&other, this};
    double sum = 0.0;
    for (const auto& [type, w] : small->weights_) sum += w * large->weight(type);
    return sum;
}

double TypeVector::squared_norm() const {
    double sum = 0.0;
    for (const auto& [type, w] : weights_) sum += w * w;
    return sum;
}

double TypeVector::norm() const { return std::sqrt(squared_norm()); }

TypeVector TypeVector::scaled(double factor) const {
    if (!(factor >= 0.0)) throw UsageError("scale factor must be non-negative");
    TypeVector out;
    for (const auto& [type, w] : weights_) out.add(type, w * factor);
    return out;
}

TypeVector ColumnTypeProfile::vector() const {
    TypeVector v;
    for (const auto& [type, total] : per_type_total) v.add(type, total);
    return v;
}

TypeVector build_type_vector(const ColumnAnnotation& annotation) {
    TypeVector column;
    for (const auto& cell : annotation.cells)
        for (const auto& c : cell.candidates) column.add(c.type_id, c.score);
    return column;
}

ColumnTypeProfile build_profile(const ColumnAnnotation& annotation) {
    ColumnTypeProfile p;
    for (const auto& cell : annotation.cells) {
        for (const auto& c : cell.candidates) {
            p.per_type_total[c.type_id] += c.score;
            p.per_type_scores[c.type_id].push_back(c.score);
            p.all_scores.push_back(c.score);
            p.type_names.try_emplace(c.type_id, c.display_name);
        }
    }
    return p;
}

double cosine_similarity(const TypeVector& v, const TypeVector& w) {
    if (v.empty() || w.empty()) return 0.0;
    const double sv = v.squared_norm();
    const double sw = w.squared_norm();
    if (sv == 0.0 || sw == 0.0) return 0.0;
    const double s = std::abs(v.dot(w)) / std::sqrt(sv * sw);
    return std::min(s, 1.0);
}

ProfileArrays build_profile_arrays(const ColumnTypeProfile& p, const ColumnTypeProfile& q) {
    if (p.empty() || q.empty()) throw EmptyProfileError("correlation needs two non-empty type profiles");

    const bool first_is_larger = p.type_count() >= q.type_count();
    const auto& larger = first_is_larger ? p : q;
    const auto& smaller = first_is_larger ? q : p;

    std::set<std::string> types;
    for (const auto& [t, _] : p.per_type_total) types.insert(t);
    for (const auto& [t, _] : q.per_type_total) types.insert(t);

    ProfileArrays out;
    out.x_from_first = first_is_larger;
    out.types.assign(types.begin(), types.end());
    out.x.reserve(types.size());
    out.y.reserve(types.size());
    const auto total = [](const ColumnTypeProfile& prof, const std::string& t) {
        const auto it = prof.per_type_total.find(t);
        return it == prof.per_type_total.end() ? 0.0 : it->second;
    };
    for (const auto& t : out.types) {
        out.x.push_back(total(larger, t));
        out.y.push_back(total(smaller, t));
    }
    return out;
}

} // namespace typematch
