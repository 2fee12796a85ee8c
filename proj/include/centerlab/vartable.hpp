#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace centerlab {

enum class Role { state, perturbation, parameter };

// Ordered symbol table shared by every polynomial of one analysis.
// Layout is fixed: x, y, eps, then parameters in alphabetical order.
class VarTable {
public:
    static constexpr std::size_t X = 0;
    static constexpr std::size_t Y = 1;
    static constexpr std::size_t EPS = 2;

    static std::shared_ptr<const VarTable> make(std::vector<std::string> params = {})
    {
        std::sort(params.begin(), params.end());
        params.erase(std::unique(params.begin(), params.end()), params.end());
        auto t = std::shared_ptr<VarTable>(new VarTable);
        t->names_ = {"x", "y", "eps"};
        for (auto& p : params) {
            if (p == "x" || p == "y" || p == "eps")
                throw std::invalid_argument("reserved symbol used as parameter: " + p);
            t->names_.push_back(std::move(p));
        }
        return t;
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    Role role(std::size_t i) const
    {
        if (i < 2) return Role::state;
        if (i == EPS) return Role::perturbation;
        return Role::parameter;
    }

    std::optional<std::size_t> index(const std::string& n) const
    {
        if (n == "x") return X;
        if (n == "y") return Y;
        if (n == "eps") return EPS;
        auto it = std::lower_bound(names_.begin() + 3, names_.end(), n);
        if (it != names_.end() && *it == n) return std::size_t(it - names_.begin());
        return std::nullopt;
    }

    std::size_t require(const std::string& n) const
    {
        auto i = index(n);
        if (!i) throw std::invalid_argument("unknown symbol: " + n);
        return *i;
    }

    std::vector<std::string> params() const { return {names_.begin() + 3, names_.end()}; }

    bool operator==(const VarTable& o) const { return names_ == o.names_; }

private:
    VarTable() = default;
    std::vector<std::string> names_;
};

using VarTablePtr = std::shared_ptr<const VarTable>;

inline bool same_table(const VarTablePtr& a, const VarTablePtr& b)
{
    return a == b || (a && b && *a == *b);
}

inline VarTablePtr merge_tables(const VarTablePtr& a, const VarTablePtr& b)
{
    auto p = a->params();
    auto q = b->params();
    p.insert(p.end(), q.begin(), q.end());
    return VarTable::make(p);
}

} // namespace centerlab
