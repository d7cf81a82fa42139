#include "cvqt/serialization.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "cvqt/errors.hpp"

namespace cvqt {
namespace {

double parse_real(std::string_view s, std::string_view context) {
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw DomainError("cannot parse number '" + std::string(s) + "' in " + std::string(context));
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

std::pair<std::string_view, std::string_view> split_kind(std::string_view text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw DomainError("expected '<kind>:<parameters>' but got '" + std::string(text) + "'");
    }
    return {text.substr(0, colon), text.substr(colon + 1)};
}

std::vector<Complex> parse_complex_list(std::string_view s) {
    std::vector<Complex> out;
    for (const auto part : split(s, ',')) {
        out.push_back(parse_complex(part));
    }
    return out;
}

json complex_list(std::span<const Complex> v) {
    bool real = true;
    for (const auto& z : v) {
        real = real && z.imag() == 0.0;
    }
    json a = json::array();
    for (const auto& z : v) {
        if (real) {
            a.push_back(z.real());
        } else {
            a.push_back(complex_to_json(z));
        }
    }
    return a;
}

std::vector<Complex> complex_list_from_json(const json& j) {
    if (!j.is_array()) {
        throw DomainError("expected an array of amplitudes");
    }
    std::vector<Complex> out;
    for (const auto& e : j) {
        out.push_back(complex_from_json(e));
    }
    return out;
}

void require_keys(const json& j, std::initializer_list<const char*> allowed, std::string_view what) {
    if (!j.is_object()) {
        throw DomainError(std::string(what) + " must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            ok = ok || key == a;
        }
        if (!ok) {
            throw DomainError("unknown field '" + key + "' in " + std::string(what));
        }
    }
}

} // namespace

Complex parse_complex(std::string_view text) {
    if (text.empty()) {
        throw DomainError("empty complex number");
    }
    if (text.back() != 'i') {
        return {parse_real(text, "complex number"), 0.0};
    }
    std::string_view body = text.substr(0, text.size() - 1);
    // Split at the last sign that is not the leading one nor part of an exponent.
    std::size_t split_at = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split_at = k;
            break;
        }
    }
    auto imag_part = [&](std::string_view s) {
        if (s.empty() || s == "+") {
            return 1.0;
        }
        if (s == "-") {
            return -1.0;
        }
        return parse_real(s, "imaginary part");
    };
    if (split_at == std::string_view::npos) {
        return {0.0, imag_part(body)};
    }
    return {parse_real(body.substr(0, split_at), "real part"), imag_part(body.substr(split_at))};
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(Complex z) {
    std::string s = format_double(z.real());
    if (z.imag() >= 0.0 || std::isnan(z.imag())) {
        s += '+';
    }
    return s + format_double(z.imag()) + "i";
}

ResourceKind parse_resource(std::string_view text) {
    const auto [kind, params] = split_kind(text);
    if (kind == "mend") {
        const double n = parse_real(params, "MEND truncation number");
        if (n != std::floor(n) || n < 1 || n > 1e6) {
            throw DomainError("MEND truncation number must be a positive integer");
        }
        return Mend{static_cast<int>(n)};
    }
    if (kind == "tmsv") {
        return TwoModeSqueezed{parse_real(params, "squeezing parameter")};
    }
    if (kind == "custom") {
        return CustomSpectrum{parse_complex_list(params)};
    }
    throw DomainError("unknown resource kind '" + std::string(kind) + "'");
}

InputStateSpec parse_input(std::string_view text) {
    const auto [kind, params] = split_kind(text);
    if (kind == "coherent") {
        return CoherentInput{parse_complex(params)};
    }
    if (kind == "cat") {
        return CatInput{parse_complex(params)};
    }
    if (kind == "qubit") {
        const auto v = parse_complex_list(params);
        if (v.size() != 2) {
            throw DomainError("qubit input needs exactly two amplitudes");
        }
        return QubitInput{v[0], v[1]};
    }
    if (kind == "custom") {
        return CustomInput{parse_complex_list(params)};
    }
    throw DomainError("unknown input kind '" + std::string(kind) + "'");
}

json complex_to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const json& j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_string()) {
        return parse_complex(j.get<std::string>());
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    if (j.is_object()) {
        require_keys(j, {"re", "im"}, "complex number");
        return {j.value("re", 0.0), j.value("im", 0.0)};
    }
    throw DomainError("cannot read complex number from JSON");
}

json to_json(const FockVector& v) {
    json re = json::array();
    json im = json::array();
    for (const auto& z : v.amps()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    return json{{"cutoff", v.cutoff()}, {"re", re}, {"im", im}};
}

FockVector fock_vector_from_json(const json& j) {
    require_keys(j, {"cutoff", "re", "im"}, "Fock vector");
    const int k = j.at("cutoff").get<int>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (k < 0 || re.size() != std::size_t(k) + 1 || im.size() != re.size()) {
        throw DomainError("Fock vector arrays must have cutoff + 1 entries");
    }
    std::vector<Complex> amps(re.size());
    for (std::size_t m = 0; m < amps.size(); ++m) {
        amps[m] = {re[m], im[m]};
    }
    FockVector raw(std::move(amps));
    const bool unit = std::abs(raw.norm_squared() - 1.0) <= 1e-10;
    return FockVector(std::vector<Complex>(raw.amps().begin(), raw.amps().end()), unit);
}

json to_json(const ResourceKind& kind) {
    if (const auto* t = std::get_if<TwoModeSqueezed>(&kind)) {
        return json{{"kind", "tmsv"}, {"lambda", t->lambda}};
    }
    if (const auto* m = std::get_if<Mend>(&kind)) {
        return json{{"kind", "mend"}, {"N", m->n}};
    }
    return json{{"kind", "custom"}, {"d", complex_list(std::get<CustomSpectrum>(kind).d)}};
}

json to_json(const ResourceSpectrum& r) {
    json j = to_json(r.kind());
    j["cutoff"] = r.cutoff();
    j["epsilon"] = r.epsilon();
    j["tail_mass"] = r.tail_mass();
    return j;
}

ResourceKind resource_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw DomainError("resource JSON needs a 'kind' field");
    }
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "mend") {
        require_keys(j, {"kind", "N"}, "MEND resource");
        return Mend{j.at("N").get<int>()};
    }
    if (kind == "tmsv") {
        require_keys(j, {"kind", "lambda"}, "TMSV resource");
        return TwoModeSqueezed{j.at("lambda").get<double>()};
    }
    if (kind == "custom") {
        require_keys(j, {"kind", "d"}, "custom resource");
        return CustomSpectrum{complex_list_from_json(j.at("d"))};
    }
    throw DomainError("unknown resource kind '" + kind + "'");
}

json to_json(const InputStateSpec& spec) {
    // clang-format off
    struct Visitor {
        json operator()(const CoherentInput& s) const { return {{"kind", "coherent"}, {"alpha", complex_to_json(s.alpha)}}; }
        json operator()(const CatInput& s) const { return {{"kind", "cat"}, {"alpha", complex_to_json(s.alpha)}}; }
        json operator()(const QubitInput& s) const { return {{"kind", "qubit"}, {"a", complex_to_json(s.a)}, {"b", complex_to_json(s.b)}}; }
        json operator()(const CustomInput& s) const { return {{"kind", "custom"}, {"amps", complex_list(s.amps)}}; }
    };
    // clang-format on
    return std::visit(Visitor{}, spec);
}

InputStateSpec input_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw DomainError("input JSON needs a 'kind' field");
    }
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "coherent" || kind == "cat") {
        require_keys(j, {"kind", "alpha"}, "input state");
        const Complex a = complex_from_json(j.at("alpha"));
        return kind == "cat" ? InputStateSpec{CatInput{a}} : InputStateSpec{CoherentInput{a}};
    }
    if (kind == "qubit") {
        require_keys(j, {"kind", "a", "b"}, "qubit input");
        return QubitInput{complex_from_json(j.at("a")), complex_from_json(j.at("b"))};
    }
    if (kind == "custom") {
        require_keys(j, {"kind", "amps"}, "custom input");
        return CustomInput{complex_list_from_json(j.at("amps"))};
    }
    throw DomainError("unknown input kind '" + kind + "'");
}

json to_json(const GridSpec& g) {
    return json{{"re", {g.re.min, g.re.max, g.re.step}},
                {"im", {g.im.min, g.im.max, g.im.step}},
                {"points", g.size()}};
}

json to_json(const Domain& d) {
    return json{{"center", complex_to_json(d.center)},
                {"half_width", d.half_width},
                {"step", d.step},
                {"intervals_per_side", d.intervals_per_side}};
}

json grid_metadata(const DistributionGrid& g) {
    return json{{"grid", to_json(g.spec)},
                {"resource", g.resource_label},
                {"input_family", g.input_family},
                {"input_cutoff", g.input_cutoff},
                {"input_truncation_tail", g.input_truncation_tail},
                {"resource_cutoff", g.resource_cutoff},
                {"resource_tail_mass", g.resource_tail_mass},
                {"max_leakage", g.max_leakage},
                {"leakage_checks", g.leakage_checks},
                {"max_truncation_bound", g.max_truncation_bound},
                {"max_fidelity_bound", g.max_fidelity_bound},
                {"max_fidelity_excursion", g.max_fidelity_excursion},
                {"clipped_points", g.clipped_points},
                {"undefined_points", g.undefined_points},
                {"p_max", g.p_max},
                {"boundary_ratio", g.boundary_ratio()},
                {"closed_form_used", g.closed_form_used},
                {"closed_form_checks", g.closed_form_checks},
                {"closed_form_max_deviation", g.closed_form_max_deviation},
                {"warnings", g.warnings}};
}

json to_json(const DistributionGrid& g) {
    json j = grid_metadata(g);
    std::vector<double> re(g.n_re()), im(g.n_im());
    for (int i = 0; i < g.n_re(); ++i) {
        re[i] = g.spec.re.at(i);
    }
    for (int i = 0; i < g.n_im(); ++i) {
        im[i] = g.spec.im.at(i);
    }
    j["re_beta"] = re;
    j["im_beta"] = im;
    j["P"] = g.P;
    j["F"] = g.F;
    return j;
}

void write_grid_csv(std::ostream& os, const DistributionGrid& g) {
    os << "re_beta,im_beta,P,F\n";
    for (int j = 0; j < g.n_im(); ++j) {
        const std::string im = format_double(g.spec.im.at(j));
        for (int i = 0; i < g.n_re(); ++i) {
            const std::size_t k = g.index(i, j);
            os << format_double(g.spec.re.at(i)) << ',' << im << ',' << format_double(g.P[k]) << ','
               << format_double(g.F[k]) << '\n';
        }
    }
}

json to_json(const AverageResult& r) {
    return json{{"average_fidelity", r.value},
                {"error_estimate", r.error_estimate},
                {"coarse_value", r.coarse_value},
                {"total_probability", r.total_probability},
                {"total_probability_error", r.total_probability_error},
                {"domain", to_json(r.domain)},
                {"boundary_ratio", r.boundary_ratio},
                {"warnings", r.warnings}};
}

json to_json(const AcceptanceResult& r) {
    return json{{"acceptance_probability", r.value},
                {"error_estimate", r.error_estimate},
                {"coarse_value", r.coarse_value},
                {"refined_cells", r.refined_cells},
                {"extra_points", r.extra_points},
                {"domain", to_json(r.domain)},
                {"boundary_ratio", r.boundary_ratio},
                {"warnings", r.warnings}};
}

json to_json(const MaxFidelityResult& r) {
    return json{{"beta", complex_to_json(r.beta)},
                {"fidelity", r.fidelity},
                {"probability", r.probability},
                {"plateau_points", r.plateau_points}};
}

json to_json(const SweepResult& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        json e{{"N", row.n}, {"acceptance_prob", row.acceptance_prob}, {"err_estimate", row.err_estimate}};
        if (row.error) {
            e["error"] = *row.error;
        }
        rows.push_back(e);
    }
    json viol = json::array();
    for (const auto& [a, b] : r.trend_violations) {
        viol.push_back({a, b});
    }
    return json{{"input_family", r.input_family},
                {"threshold", r.threshold},
                {"step", r.step},
                {"rows", rows},
                {"monotone", r.monotone()},
                {"trend_violations", viol}};
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
    os << "N,acceptance_prob,err_estimate\n";
    for (const auto& row : r.rows) {
        if (row.error) {
            os << row.n << ",nan,nan\n";
            continue;
        }
        os << row.n << ',' << format_double(row.acceptance_prob) << ','
           << format_double(row.err_estimate) << '\n';
    }
}

} // namespace cvqt
