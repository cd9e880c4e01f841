#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cascade/cascade.hpp"

namespace cascade {

//! Which factors a what-if transformation touches.
class FactorSubset {
public:
    struct All {};
    struct Group {
        FactorGroup group;
    };
    struct Ids {
        std::vector<std::string> ids;
    };

    FactorSubset() = default;
    static FactorSubset all() { return FactorSubset(All{}); }
    static FactorSubset of_group(FactorGroup g) { return FactorSubset(Group{g}); }
    static FactorSubset of_ids(std::vector<std::string> ids) { return FactorSubset(Ids{std::move(ids)}); }

    //! "all", a group name, or "ids:a,b,c".
    static FactorSubset parse(const std::string& text);
    std::string describe() const;

    //! Throws ValidationError if an id does not exist in the model.
    std::vector<bool> mask(const CascadeModel& model) const;

    const std::variant<All, Group, Ids>& selector() const { return selector_; }

private:
    explicit FactorSubset(std::variant<All, Group, Ids> s) : selector_(std::move(s)) {}
    std::variant<All, Group, Ids> selector_ = All{};
};

struct TornadoEntry {
    std::string factor_id;
    Probability low_input;
    Probability high_input;
    Probability joint_low;
    Probability joint_high;

    double width() const { return joint_high.value() - joint_low.value(); }
};

using TornadoRanges = std::vector<std::pair<std::string, std::pair<double, double>>>;

struct MultiplierSolution {
    double multiplier = 1.0;
    CascadeModel scaled;
    Probability achieved_joint;
};

//! Sets the factor to 1, which takes it out of the product.
CascadeModel remove_factor(const CascadeModel& model, const std::string& id);

//! Each selected factor becomes min(1, multiplier * p). N/A factors are left alone.
CascadeModel scale_factors(const CascadeModel& model, double multiplier, const FactorSubset& subset);

//! One-at-a-time sweep, sorted by descending range width (stable).
std::vector<TornadoEntry> tornado(const CascadeModel& model, const TornadoRanges& ranges);

//! Uniform multiplier on the subset that brings the joint odds to `target`
//! within 1e-9. Throws InfeasibleError carrying the best achievable odds.
MultiplierSolution solve_uniform_multiplier(const CascadeModel& model, Probability target,
                                            const FactorSubset& subset);

//! Value the factor must take, all others fixed, for the joint odds to equal
//! `target`. Throws InfeasibleError when that value exceeds 1.
Probability required_value(const CascadeModel& model, const std::string& factor_id, Probability target);

std::string tornado_to_csv(const std::vector<TornadoEntry>& entries);

}  // namespace cascade
