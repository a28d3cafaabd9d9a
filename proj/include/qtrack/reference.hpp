#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qtrack/rng.hpp"

namespace qtrack {

enum class ReferenceKind {
    Alternating, // y*(2j-1) = 1, y*(2j) = 2 + e(j) with e(j) ~ U(0, 0.1)
    Table,       // fixed list, repeated cyclically
    Custom,      // caller-supplied generator (in-process only)
};

// A realized per-trial reference sequence: deterministic given
// (master_seed, trial). at(k) is defined for k >= 1.
class RealizedReference {
public:
    double at(std::int64_t k) const;
    double bound() const { return y_bar_; } // sup_k |y*(k)|

private:
    friend class ReferenceSpec;
    RealizedReference() : stream_(0, 0, kStreamReference) {}

    ReferenceKind kind_ = ReferenceKind::Alternating;
    double y_bar_ = 0.0;
    TrialStream stream_;
    std::vector<double> table_;   // Table values, or explicit e(j) sequence
    bool explicit_eps_ = false;
    std::function<double(std::int64_t)> generator_;
};

// Reference configuration; realize() binds it to one trial's RNG stream.
class ReferenceSpec {
public:
    // The alternating 1 / 2+e(j) family; e(j) drawn i.i.d. uniform on
    // (0, 0.1) per trial, or supplied explicitly.
    static ReferenceSpec alternating();
    static ReferenceSpec alternating_with_eps(std::vector<double> eps);
    static ReferenceSpec table(std::vector<double> values);
    static ReferenceSpec custom(std::function<double(std::int64_t)> gen,
                                double y_bar);

    RealizedReference realize(std::uint64_t master_seed,
                              std::uint64_t trial) const;

    ReferenceKind kind() const { return kind_; }
    double bound() const { return y_bar_; }

private:
    ReferenceSpec() = default;

    ReferenceKind kind_ = ReferenceKind::Alternating;
    double y_bar_ = 0.0;
    std::vector<double> table_;
    bool explicit_eps_ = false;
    std::function<double(std::int64_t)> generator_;
};

} // namespace qtrack
