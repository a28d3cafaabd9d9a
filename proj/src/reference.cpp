#include "qtrack/reference.hpp"

#include <algorithm>
#include <cmath>

#include "qtrack/errors.hpp"

namespace qtrack {

double RealizedReference::at(std::int64_t k) const {
    switch (kind_) {
    case ReferenceKind::Alternating: {
        if (k % 2 == 1) return 1.0;
        std::int64_t j = k / 2; // e(j), j >= 1
        double e;
        if (explicit_eps_)
            e = table_[static_cast<std::size_t>((j - 1) %
                                                static_cast<std::int64_t>(
                                                    table_.size()))];
        else
            e = 0.1 * stream_.uniform_open(static_cast<std::uint64_t>(j), 0);
        return 2.0 + e;
    }
    case ReferenceKind::Table:
        return table_[static_cast<std::size_t>(
            (k - 1) % static_cast<std::int64_t>(table_.size()))];
    case ReferenceKind::Custom:
        return generator_(k);
    }
    return 0.0;
}

ReferenceSpec ReferenceSpec::alternating() {
    ReferenceSpec s;
    s.kind_ = ReferenceKind::Alternating;
    s.y_bar_ = 2.1;
    return s;
}

ReferenceSpec ReferenceSpec::alternating_with_eps(std::vector<double> eps) {
    if (eps.empty())
        throw ValidationError("EmptyReferenceTable",
                              "need at least one epsilon value");
    ReferenceSpec s;
    s.kind_ = ReferenceKind::Alternating;
    s.explicit_eps_ = true;
    double emax = 0.0;
    for (double e : eps) {
        if (!std::isfinite(e))
            throw ValidationError("EmptyReferenceTable",
                                  "epsilon values must be finite");
        emax = std::max(emax, std::fabs(e));
    }
    s.y_bar_ = std::max(2.0 + emax, 1.0);
    s.table_ = std::move(eps);
    return s;
}

ReferenceSpec ReferenceSpec::table(std::vector<double> values) {
    if (values.empty())
        throw ValidationError("EmptyReferenceTable",
                              "need at least one reference value");
    ReferenceSpec s;
    s.kind_ = ReferenceKind::Table;
    double b = 0.0;
    for (double v : values) {
        if (!std::isfinite(v))
            throw ValidationError("EmptyReferenceTable",
                                  "reference values must be finite");
        b = std::max(b, std::fabs(v));
    }
    s.y_bar_ = b;
    s.table_ = std::move(values);
    return s;
}

ReferenceSpec ReferenceSpec::custom(std::function<double(std::int64_t)> gen,
                                    double y_bar) {
    ReferenceSpec s;
    s.kind_ = ReferenceKind::Custom;
    s.generator_ = std::move(gen);
    s.y_bar_ = y_bar;
    return s;
}

RealizedReference ReferenceSpec::realize(std::uint64_t master_seed,
                                         std::uint64_t trial) const {
    RealizedReference r;
    r.kind_ = kind_;
    r.y_bar_ = y_bar_;
    r.stream_ = TrialStream(master_seed, trial, kStreamReference);
    r.table_ = table_;
    r.explicit_eps_ = explicit_eps_;
    r.generator_ = generator_;
    return r;
}

} // namespace qtrack
