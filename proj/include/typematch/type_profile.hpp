#pragma once

#include <map>
#include <string>
#include <vector>

#include "typematch/reconciliation.hpp"

namespace typematch {

/// Sparse vector over rich types: each distinct type id is one dimension.
/// Weights are non-negative and zero weights are never stored. Iteration
/// is ordered by type id, which fixes the summation order of every
/// reduction below.
class TypeVector {
public:
    TypeVector() = default;

    void add(const std::string& type_id, double weight);

    double weight(const std::string& type_id) const;
    const std::map<std::string, double>& weights() const { return weights_; }
    std::size_t size() const { return weights_.size(); }
    bool empty() const { return weights_.empty(); }

    double dot(const TypeVector& other) const;
    double squared_norm() const;
    double norm() const;

    TypeVector scaled(double factor) const;

    bool operator==(const TypeVector&) const = default;

private:
    std::map<std::string, double> weights_;
};

/// Column-level aggregate of candidate scores: per-type totals (the
/// column vector), each type's individual scores, and every score seen.
struct ColumnTypeProfile {
    std::map<std::string, double> per_type_total;
    std::map<std::string, std::vector<double>> per_type_scores;
    std::vector<double> all_scores;
    std::map<std::string, std::string> type_names;

    bool empty() const { return per_type_total.empty(); }
    std::size_t type_count() const { return per_type_total.size(); }
    TypeVector vector() const;
};

/// Sum over cells of each cell's candidate vector.
TypeVector build_type_vector(const ColumnAnnotation& annotation);

ColumnTypeProfile build_profile(const ColumnAnnotation& annotation);

/// |V.W| / (|V| |W|); 0 when either side is empty or has zero norm.
double cosine_similarity(const TypeVector& v, const TypeVector& w);

/// Aligned arrays for correlation matchers. Indexed by the union of both
/// profiles' types in lexicographic order, zero-filled where a type is
/// absent. `x` comes from the profile with more distinct types (the first
/// argument on ties).
struct ProfileArrays {
    std::vector<std::string> types;
    std::vector<double> x;
    std::vector<double> y;
    bool x_from_first = true;
};

/// Throws EmptyProfileError when either profile is empty.
ProfileArrays build_profile_arrays(const ColumnTypeProfile& p, const ColumnTypeProfile& q);

} // namespace typematch
