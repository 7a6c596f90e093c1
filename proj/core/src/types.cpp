#include "nullest/types.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <system_error>

namespace nullest {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidArgument("sample must contain at least one value");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw InvalidArgument("sample value at index " + std::to_string(i) + " is not finite");
    }
}

Sample Sample::shifted(double c) const {
    std::vector<double> out(values_);
    for (double& x : out) x += c;
    return Sample(std::move(out));
}

Sample Sample::scaled(double c) const {
    std::vector<double> out(values_);
    for (double& x : out) x *= c;
    return Sample(std::move(out));
}

void NullParams::validate() const {
    if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw InvalidArgument("sigma2 must be positive and finite");
}

double NullParams::sigma() const { return std::sqrt(sigma2); }

namespace {

const std::map<ContaminationKind, std::string>& kind_names() {
    static const std::map<ContaminationKind, std::string> names = {
        {ContaminationKind::zero, "zero"},
        {ContaminationKind::constant_shift, "constant_shift"},
        {ContaminationKind::pi_over_omega, "pi_over_omega"},
        {ContaminationKind::two_sided_blocks, "two_sided_blocks"},
        {ContaminationKind::prior_g0, "prior_g0"},
        {ContaminationKind::prior_g1, "prior_g1"},
        {ContaminationKind::custom, "custom"},
    };
    return names;
}

struct Field {
    std::function<void(Hyperparams&, const std::string&)> set;
    std::function<std::string(const Hyperparams&)> get;
};

template <class T>
Field field(T Hyperparams::*member);

template <>
Field field<double>(double Hyperparams::*member) {
    return {[member](Hyperparams& hp, const std::string& v) { hp.*member = parse_double(v); },
            [member](const Hyperparams& hp) { return format_double(hp.*member); }};
}

template <>
Field field<std::size_t>(std::size_t Hyperparams::*member) {
    return {[member](Hyperparams& hp, const std::string& v) {
                std::size_t out = 0;
                const auto* end = v.data() + v.size();
                auto [ptr, ec] = std::from_chars(v.data(), end, out);
                if (ec != std::errc() || ptr != end) throw InvalidArgument("expected a nonnegative integer: '" + v + "'");
                hp.*member = out;
            },
            [member](const Hyperparams& hp) { return std::to_string(hp.*member); }};
}

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> table = {
        {"c_tau", field(&Hyperparams::c_tau)},
        {"c_a", field(&Hyperparams::c_a)},
        {"C1_pilot", field(&Hyperparams::C1_pilot)},
        {"C2_pilot", field(&Hyperparams::C2_pilot)},
        {"R", field(&Hyperparams::R)},
        {"c0", field(&Hyperparams::c0)},
        {"Bc", field(&Hyperparams::Bc)},
        {"L_delta", field(&Hyperparams::L_delta)},
        {"mode_C1", field(&Hyperparams::mode_C1)},
        {"mu_grid_halfwidth_mult", field(&Hyperparams::mu_grid_halfwidth_mult)},
        {"mu_grid_step_mult", field(&Hyperparams::mu_grid_step_mult)},
        {"omega_grid_step_mult", field(&Hyperparams::omega_grid_step_mult)},
        {"ecf_floor_mult", field(&Hyperparams::ecf_floor_mult)},
        {"lepski_loc_mult", field(&Hyperparams::lepski_loc_mult)},
        {"lepski_var_mult", field(&Hyperparams::lepski_var_mult)},
        {"lepski_c_delta", field(&Hyperparams::lepski_c_delta)},
        {"lepski_ratio", field(&Hyperparams::lepski_ratio)},
        {"laplace_tau_const", field(&Hyperparams::laplace_tau_const)},
        {"caijin_omega", field(&Hyperparams::caijin_omega)},
        {"caijin_fd_step", field(&Hyperparams::caijin_fd_step)},
        {"m_cap", field(&Hyperparams::m_cap)},
        {"v_grid_points", field(&Hyperparams::v_grid_points)},
        {"variance_grid_points", field(&Hyperparams::variance_grid_points)},
    };
    return table;
}

}  // namespace

std::string to_string(ContaminationKind kind) { return kind_names().at(kind); }

ContaminationKind contamination_kind_from_string(const std::string& name) {
    for (const auto& [kind, text] : kind_names())
        if (text == name) return kind;
    throw InvalidArgument("unknown contamination kind '" + name + "'");
}

void Hyperparams::validate() const {
    const double reals[] = {c_tau, c_a, C1_pilot, C2_pilot, c0, Bc, L_delta, mode_C1,
                            mu_grid_halfwidth_mult, mu_grid_step_mult, omega_grid_step_mult,
                            lepski_loc_mult, lepski_var_mult, lepski_c_delta, laplace_tau_const,
                            caijin_fd_step};
    for (double v : reals)
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("hyperparameters must be positive and finite");
    // R = 0 and ecf_floor_mult = 0 are meaningful (degenerate interval, n^-2 guard).
    if (!(R >= 0.0) || !(ecf_floor_mult >= 0.0)) throw InvalidArgument("R and ecf_floor_mult must be nonnegative");
    if (!(lepski_ratio > 1.0)) throw InvalidArgument("lepski_ratio must exceed 1");
    if (caijin_omega == 0.0 || !std::isfinite(caijin_omega)) throw InvalidArgument("caijin_omega must be nonzero");
    if (m_cap < 1 || v_grid_points < 2 || variance_grid_points < 2)
        throw InvalidArgument("grid sizes must be at least 2 and m_cap at least 1");
}

void Hyperparams::set(const std::string& key, const std::string& value) {
    const auto it = fields().find(key);
    if (it == fields().end()) throw InvalidArgument("unknown hyperparameter '" + key + "'");
    it->second.set(*this, value);
}

std::vector<std::string> Hyperparams::keys() const {
    std::vector<std::string> out;
    for (const auto& [name, f] : fields()) out.push_back(name);
    return out;
}

std::string Hyperparams::get(const std::string& key) const {
    const auto it = fields().find(key);
    if (it == fields().end()) throw InvalidArgument("unknown hyperparameter '" + key + "'");
    return it->second.get(*this);
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw Error("failed to format number");
    return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
    double out = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (begin != end && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end || begin == end) throw InvalidArgument("expected a number: '" + text + "'");
    return out;
}

}  // namespace nullest
