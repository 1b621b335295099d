#pragma once

// Canonical arithmetic of eventually periodic subsets of Z>=0.
//
// A set is stored as (threshold T, exceptions E < T, period D, residues R):
//   n is a member  <=>  n < T ? n in E : (n mod D) in R.
// The stored form is canonical (minimal D, then minimal T), so structural
// equality coincides with set equality.  Finite sets have R = {} and D = 1.

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gapcode/errors.hpp"

namespace gapcode {

class EventuallyPeriodicSet {
  public:
    using value_type = long long;

    // Empty set.
    EventuallyPeriodicSet() : threshold_(0), period_(1) {}

    static EventuallyPeriodicSet from_parts(value_type threshold,
                                            std::set<value_type> exceptions,
                                            value_type period,
                                            std::set<value_type> residues) {
        if (period < 1) throw std::invalid_argument("period must be >= 1");
        if (threshold < 0) throw std::invalid_argument("threshold must be >= 0");
        EventuallyPeriodicSet s;
        s.threshold_ = threshold;
        for (value_type e : exceptions)
            if (0 <= e && e < threshold) s.exceptions_.insert(e);
        s.period_ = period;
        for (value_type r : residues) s.residues_.insert(((r % period) + period) % period);
        s.canonicalize();
        return s;
    }

    static EventuallyPeriodicSet finite(const std::set<value_type>& members) {
        value_type t = members.empty() ? 0 : *members.rbegin() + 1;
        return from_parts(t, members, 1, {});
    }

    // {n >= start : n = start (mod step)} and friends.
    static EventuallyPeriodicSet arithmetic_from(value_type start, value_type step) {
        if (start < 0 || step < 1) throw std::invalid_argument("bad arithmetic progression");
        return from_parts(start, {}, step, {start % step});
    }

    bool contains(value_type n) const {
        if (n < 0) return false;
        if (n < threshold_) return exceptions_.count(n) > 0;
        return residues_.count(n % period_) > 0;
    }

    bool empty() const { return exceptions_.empty() && residues_.empty(); }
    bool is_finite() const { return residues_.empty(); }
    bool is_cofinite() const { return period_ == 1 && residues_.count(0) > 0; }

    // Largest member of a finite set.
    std::optional<value_type> max_element() const {
        if (!is_finite() || empty()) return std::nullopt;
        return *exceptions_.rbegin();
    }

    std::optional<value_type> min_element() const {
        if (empty()) return std::nullopt;
        value_type best = -1;
        if (!exceptions_.empty()) best = *exceptions_.begin();
        if (!residues_.empty()) {
            for (value_type r : residues_) {
                value_type first = first_member_in_class(r);
                if (best < 0 || first < best) best = first;
            }
        }
        return best;
    }

    // Least N with [N, inf) contained in the set; only defined when cofinite.
    std::optional<value_type> cofinite_onset() const {
        if (!is_cofinite()) return std::nullopt;
        auto missing = complement();
        auto m = missing.max_element();
        return m ? *m + 1 : 0;
    }

    value_type threshold() const { return threshold_; }
    value_type period() const { return period_; }
    const std::set<value_type>& exceptions() const { return exceptions_; }
    const std::set<value_type>& residues() const { return residues_; }

    std::vector<value_type> members_upto(value_type n) const {
        std::vector<value_type> out;
        for (value_type i = 0; i <= n; ++i)
            if (contains(i)) out.push_back(i);
        return out;
    }

    EventuallyPeriodicSet set_union(const EventuallyPeriodicSet& o) const {
        return combine(o, [](bool a, bool b) { return a || b; });
    }
    EventuallyPeriodicSet set_intersection(const EventuallyPeriodicSet& o) const {
        return combine(o, [](bool a, bool b) { return a && b; });
    }
    EventuallyPeriodicSet set_difference(const EventuallyPeriodicSet& o) const {
        return combine(o, [](bool a, bool b) { return a && !b; });
    }
    bool is_subset_of(const EventuallyPeriodicSet& o) const {
        return set_difference(o).empty();
    }

    // Complement within Z>=0.
    EventuallyPeriodicSet complement() const {
        std::set<value_type> exc, res;
        for (value_type n = 0; n < threshold_; ++n)
            if (!exceptions_.count(n)) exc.insert(n);
        for (value_type r = 0; r < period_; ++r)
            if (!residues_.count(r)) res.insert(r);
        return from_parts(threshold_, exc, period_, res);
    }

    // {n - 1 : n in S}; every member must be >= 1.
    EventuallyPeriodicSet shifted_down() const {
        if (contains(0)) throw std::invalid_argument("shifted_down: set contains 0");
        std::set<value_type> exc, res;
        for (value_type e : exceptions_) exc.insert(e - 1);
        for (value_type r : residues_) res.insert(((r - 1) % period_ + period_) % period_);
        return from_parts(std::max<value_type>(threshold_ - 1, 0), exc, period_, res);
    }

    bool operator==(const EventuallyPeriodicSet& o) const = default;

    // Text forms: "finite:{1,4,5}" or "eventual:T=4;exc={1};D=3;res={1}".
    std::string to_string() const {
        std::ostringstream os;
        if (is_finite()) {
            os << "finite:" << set_literal(exceptions_);
        } else {
            os << "eventual:T=" << threshold_ << ";exc=" << set_literal(exceptions_)
               << ";D=" << period_ << ";res=" << set_literal(residues_);
        }
        return os.str();
    }

    static EventuallyPeriodicSet parse(const std::string& text) {
        std::string s = strip(text);
        if (s.rfind("finite:", 0) == 0) {
            return finite(parse_set_literal(s.substr(7)));
        }
        if (s.rfind("eventual:", 0) == 0) {
            value_type t = -1, d = -1;
            std::set<value_type> exc, res;
            bool saw_exc = false, saw_res = false;
            std::stringstream body(s.substr(9));
            std::string field;
            while (std::getline(body, field, ';')) {
                auto eq = field.find('=');
                if (eq == std::string::npos) throw parse_error("bad field: " + field);
                std::string key = strip(field.substr(0, eq));
                std::string val = strip(field.substr(eq + 1));
                if (key == "T") t = parse_number(val);
                else if (key == "D") d = parse_number(val);
                else if (key == "exc") { exc = parse_set_literal(val); saw_exc = true; }
                else if (key == "res") { res = parse_set_literal(val); saw_res = true; }
                else throw parse_error("unknown field: " + key);
            }
            if (t < 0 || d < 1 || !saw_exc || !saw_res)
                throw parse_error("eventual form needs T, exc, D, res: " + text);
            return from_parts(t, exc, d, res);
        }
        throw parse_error("gap set must start with 'finite:' or 'eventual:': " + text);
    }

  private:
    value_type threshold_;
    std::set<value_type> exceptions_;
    value_type period_;
    std::set<value_type> residues_;

    value_type first_member_in_class(value_type r) const {
        value_type off = ((r - threshold_) % period_ + period_) % period_;
        return threshold_ + off;
    }

    void canonicalize() {
        // Minimal period: the minimal period of an eventually periodic set
        // divides every period, so it is found among the divisors of D.
        for (value_type d = 1; d <= period_; ++d) {
            if (period_ % d != 0) continue;
            bool ok = true;
            for (value_type r = 0; ok && r < period_; ++r)
                ok = residues_.count(r) == residues_.count((r + d) % period_);
            if (ok) {
                std::set<value_type> reduced;
                for (value_type r : residues_) reduced.insert(r % d);
                period_ = d;
                residues_ = std::move(reduced);
                break;
            }
        }
        // Minimal threshold: walk it down while membership just below the
        // threshold agrees with the residue pattern.
        while (threshold_ > 0) {
            value_type n = threshold_ - 1;
            bool in_exc = exceptions_.count(n) > 0;
            bool in_res = residues_.count(n % period_) > 0;
            if (in_exc != in_res) break;
            exceptions_.erase(n);
            --threshold_;
        }
    }

    template <typename Op>
    EventuallyPeriodicSet combine(const EventuallyPeriodicSet& o, Op op) const {
        value_type g = std::gcd(period_, o.period_);
        value_type big = period_ / g * o.period_;
        if (big > (value_type)2e6) throw std::invalid_argument("combined period too large");
        value_type t = std::max(threshold_, o.threshold_);
        std::set<value_type> exc, res;
        for (value_type n = 0; n < t; ++n)
            if (op(contains(n), o.contains(n))) exc.insert(n);
        for (value_type r = 0; r < big; ++r)
            if (op(residues_.count(r % period_) > 0, o.residues_.count(r % o.period_) > 0))
                res.insert(r);
        return from_parts(t, exc, big, res);
    }

    static std::string strip(const std::string& s) {
        size_t a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return "";
        size_t b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }

    static value_type parse_number(const std::string& s) {
        std::string t = strip(s);
        if (t.empty()) throw parse_error("expected a number");
        size_t pos = 0;
        value_type v;
        try {
            v = std::stoll(t, &pos);
        } catch (const std::exception&) {
            throw parse_error("bad number: " + s);
        }
        if (pos != t.size()) throw parse_error("bad number: " + s);
        return v;
    }

    static std::set<value_type> parse_set_literal(const std::string& s) {
        std::string t = strip(s);
        if (t.size() < 2 || t.front() != '{' || t.back() != '}')
            throw parse_error("expected {..}: " + s);
        std::set<value_type> out;
        std::string body = t.substr(1, t.size() - 2);
        if (strip(body).empty()) return out;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) out.insert(parse_number(item));
        return out;
    }

    static std::string set_literal(const std::set<value_type>& s) {
        std::ostringstream os;
        os << '{';
        bool first = true;
        for (value_type v : s) {
            if (!first) os << ',';
            os << v;
            first = false;
        }
        os << '}';
        return os.str();
    }
};

}  // namespace gapcode
