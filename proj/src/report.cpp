#include "epa/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace epa::report {

using nlohmann::json;

namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

std::string fixed(double value, int decimals) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*f", decimals, value);
    return buf.data();
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return {buf.data(), end};
}

json to_json(const RunManifest& manifest) {
    return json{{"command", manifest.command},
                {"parameters", manifest.parameters},
                {"seed", manifest.seed},
                {"software_version", manifest.software_version}};
}

RunManifest manifest_from_json(const json& j) {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.software_version = j.at("software_version").get<std::string>();
    return m;
}

Method parse_method_name(const std::string& name) {
    for (Method m : {Method::dm_r, Method::dm_m, Method::dm_nw, Method::dm_nw_l, Method::dm_fb, Method::dm_ewc,
                     Method::dm_wpe, Method::dm_im}) {
        if (name == to_string(m) || name == label(m)) return m;
    }
    throw std::invalid_argument("unknown method '" + name + "'");
}

json to_json(const TestOutcome& outcome) {
    return json{{"method", to_string(outcome.method)},
                {"stat", outcome.stat},
                {"pval", optional_json(outcome.pval)},
                {"rej", outcome.rej},
                {"cl", outcome.cl},
                {"bandwidth", optional_json(outcome.bandwidth)},
                {"df", optional_json(outcome.df)},
                {"critical_value", outcome.critical_value}};
}

TestOutcome outcome_from_json(const json& j) {
    TestOutcome out;
    out.method = parse_method_name(j.at("method").get<std::string>());
    out.stat = j.at("stat").get<double>();
    out.pval = optional_from<double>(j, "pval");
    out.rej = j.at("rej").get<bool>();
    out.cl = j.at("cl").get<double>();
    out.bandwidth = optional_from<int>(j, "bandwidth");
    out.df = optional_from<int>(j, "df");
    out.critical_value = j.at("critical_value").get<double>();
    return out;
}

std::string text_row(const TestOutcome& outcome) {
    std::string head = label(outcome.method) + ":";
    if (head.size() < 7) head.resize(7, ' ');
    std::string value = fixed(outcome.stat, 2);
    if (value.size() < 5) value.insert(0, 5 - value.size(), ' ');
    return head + value + (outcome.rej ? "  (reject)" : "  (not reject)");
}

std::string tradeoff_csv(const TradeoffCurve& curve) {
    std::ostringstream out;
    out << "M,size_distortion,max_power_loss,rejected\n";
    for (const TradeoffPoint& p : curve.points) {
        out << p.M << ',' << format_double(p.size_distortion) << ',' << format_double(p.max_power_loss) << ','
            << (p.rejected ? "true" : "false") << '\n';
    }
    return out.str();
}

json tradeoff_json(const TradeoffCurve& curve, const RunManifest& manifest) {
    json points = json::array();
    for (const TradeoffPoint& p : curve.points) {
        points.push_back({{"M", p.M},
                          {"size_distortion", p.size_distortion},
                          {"max_power_loss", p.max_power_loss},
                          {"rejected", p.rejected}});
    }
    const FittedArModel& m = curve.model;
    return json{{"manifest", to_json(manifest)},
                {"P", curve.P},
                {"default_M", curve.default_M},
                {"degenerate_simulations", curve.degenerate_simulations},
                {"model",
                 {{"order", m.order},
                  {"coefficients", m.coefficients},
                  {"innovation_variance", m.innovation_variance},
                  {"sample_mean", m.sample_mean},
                  {"implied_lrv", m.implied_lrv},
                  {"fell_back", m.fell_back}}},
                {"points", points}};
}

std::string tradeoff_svg(const TradeoffCurve& curve) {
    constexpr double width = 640.0;
    constexpr double height = 480.0;
    constexpr double left = 70.0;
    constexpr double right = 30.0;
    constexpr double top = 30.0;
    constexpr double bottom = 60.0;

    double x_lo = 0.0;
    double x_hi = 0.0;
    double y_lo = 0.0;
    double y_hi = 0.0;
    for (const TradeoffPoint& p : curve.points) {
        x_hi = std::max(x_hi, p.max_power_loss);
        y_lo = std::min(y_lo, p.size_distortion);
        y_hi = std::max(y_hi, p.size_distortion);
    }
    const auto pad = [](double& lo, double& hi) {
        const double span = hi - lo > 1e-12 ? hi - lo : 0.01;
        lo -= 0.05 * span;
        hi += 0.05 * span;
    };
    pad(x_lo, x_hi);
    pad(y_lo, y_hi);
    const auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * (width - left - right); };
    const auto sy = [&](double y) { return height - bottom - (y - y_lo) / (y_hi - y_lo) * (height - top - bottom); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
        << height - bottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
        << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x_lo + (x_hi - x_lo) * k / 4.0;
        const double yv = y_lo + (y_hi - y_lo) * k / 4.0;
        svg << "<text x=\"" << sx(xv) << "\" y=\"" << height - bottom + 18 << "\" text-anchor=\"middle\">"
            << fixed(xv, 3) << "</text>\n";
        svg << "<text x=\"" << left - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << fixed(yv, 3)
            << "</text>\n";
    }
    svg << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\">Maximum power loss</text>\n";
    svg << "<text x=\"18\" y=\"" << (top + height - bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << (top + height - bottom) / 2 << ")\">Size distortion</text>\n";

    if (!curve.points.empty()) {
        svg << "<polyline fill=\"none\" stroke=\"#999999\" points=\"";
        for (const TradeoffPoint& p : curve.points) svg << sx(p.max_power_loss) << ',' << sy(p.size_distortion) << ' ';
        svg << "\"/>\n";
    }
    for (const TradeoffPoint& p : curve.points) {
        const double x = sx(p.max_power_loss);
        const double y = sy(p.size_distortion);
        if (p.M == curve.default_M) {
            svg << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"9\" fill=\"none\" stroke=\"green\" "
                << "stroke-width=\"2.5\" class=\"default\"/>\n";
        }
        if (p.rejected) {
            svg << "<path d=\"M" << x - 5 << ',' << y - 5 << " L" << x + 5 << ',' << y + 5 << " M" << x - 5 << ','
                << y + 5 << " L" << x + 5 << ',' << y - 5 << "\" stroke=\"red\" stroke-width=\"2\" class=\"reject\"/>\n";
        } else {
            svg << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"4\" fill=\"red\" class=\"accept\"/>\n";
        }
        svg << "<text x=\"" << x + 8 << "\" y=\"" << y - 6 << "\" font-size=\"10\">" << p.M << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string to_string(McMetric metric) { return metric == McMetric::size ? "size" : "power"; }

std::string mc_matrix_csv(const mc::ExperimentResult& result, mc::Family family, McMetric metric,
                          mc::McMethod method) {
    std::set<std::pair<int, int>> rows;
    std::set<std::pair<int, std::size_t>> cols;
    for (const auto& [key, cell] : result.cells) {
        if (key.family != family) continue;
        rows.insert({key.R, key.R_tilde});
        cols.insert({key.h, key.P});
    }
    std::ostringstream out;
    out << "R,R_tilde,diagonal";
    for (const auto& [h, P] : cols) out << ",h" << h << "_P" << P;
    out << '\n';
    for (const auto& [R, Rt] : rows) {
        out << R << ',' << Rt << ',' << (R == Rt ? "true" : "false");
        for (const auto& [h, P] : cols) {
            out << ',';
            const mc::CellKey key{family, R, Rt, h, P};
            if (result.cells.count(key) == 0) continue;
            if (metric == McMetric::size) {
                out << format_double(result.rejection_rate(key, method));
            } else if (result.cells.count(mc::diagonal_of(key)) != 0) {
                out << format_double(mc::size_corrected_power(result, key, method));
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string mc_matrix_filename(mc::Family family, McMetric metric, mc::McMethod method) {
    return mc::to_string(family) + "_" + to_string(metric) + "_" + mc::label(method) + ".csv";
}

}  // namespace epa::report
