// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#include "ordevo/results_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace ordevo::io {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw IoError("malformed number '" + std::string(text) + "'");
  }
  return value;
}

namespace {

template <typename Int>
Int parse_int(std::string_view text) {
  Int value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw IoError("malformed integer '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string target_field(const CurveKey& key) {
  return key.kind == TaskKind::TimeSeries ? std::string(target_name(key.target)) : "";
}

// task,target,order,self_ref,beta,k,pop
void write_key_columns(std::ostream& out, const CurveKey& key) {
  out << task_kind_name(key.kind) << ',' << target_field(key) << ','
      << key.order.order << ',' << (key.order.self_referential ? 1 : 0) << ','
      << format_double(key.beta) << ',' << key.k << ',' << key.population_size;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_runs_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << kRunsHeader << '\n';
  for (const auto& r : records) {
    const CurveKey key = CurveKey::of(r.config);
    const bool forecasting = key.kind == TaskKind::TimeSeries;
    for (std::size_t j = 0; j < r.length(); ++j) {
      write_key_columns(out, key);
      out << ',' << r.config.seed << ',' << (j + 1) << ','
          << format_double(r.best_fitness[j]) << ',';
      if (forecasting) out << format_double(r.pred_error[j]);
      out << '\n';
    }
  }
}

std::vector<RunRecord> read_runs_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRunsHeader) {
    throw IoError("runs.csv: missing or unexpected header");
  }
  std::vector<RunRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 11) {
      throw IoError("runs.csv line " + std::to_string(line_no) +
                    ": expected 11 fields");
    }
    RunConfig cfg;
    cfg.task.kind = parse_task_kind(f[0]);
    if (cfg.task.kind == TaskKind::TimeSeries) cfg.task.target = parse_target(f[1]);
    cfg.order.order = parse_int<std::size_t>(f[2]);
    cfg.order.self_referential = parse_int<int>(f[3]) != 0;
    cfg.mutation.beta = parse_double(f[4]);
    cfg.mutation.self_referential = cfg.order.self_referential;
    cfg.selection.k = parse_int<std::size_t>(f[5]);
    cfg.selection.population_size = parse_int<std::size_t>(f[6]);
    cfg.seed = parse_int<std::uint64_t>(f[7]);
    const auto generation = parse_int<std::uint64_t>(f[8]);

    const bool continues =
        !records.empty() && CurveKey::of(records.back().config) == CurveKey::of(cfg) &&
        records.back().config.seed == cfg.seed &&
        records.back().length() + 1 == generation;
    if (!continues) {
      if (generation != 1) {
        throw IoError("runs.csv line " + std::to_string(line_no) +
                      ": run does not start at generation 1");
      }
      RunRecord r;
      r.config = cfg;
      records.push_back(std::move(r));
    }
    auto& rec = records.back();
    rec.best_fitness.push_back(parse_double(f[9]));
    if (cfg.task.kind == TaskKind::TimeSeries) rec.pred_error.push_back(parse_double(f[10]));
  }
  for (auto& r : records) r.config.generations = std::max<std::uint64_t>(1, r.length());
  return records;
}

void write_aggregate_csv(std::ostream& out, std::span<const AggregateCurve> curves) {
  out << kAggregateHeader << '\n';
  for (const auto& c : curves) {
    const bool forecasting = c.key.kind == TaskKind::TimeSeries;
    for (std::size_t j = 0; j < c.length(); ++j) {
      write_key_columns(out, c.key);
      out << ',' << (j + 1) << ',' << c.seeds.size() << ','
          << format_double(c.mean_best[j]) << ',' << format_double(c.sem_best[j])
          << ',';
      if (forecasting) {
        out << format_double(c.mean_error[j]) << ',' << format_double(c.sem_error[j]);
      } else {
        out << ',';
      }
      out << '\n';
    }
  }
}

void write_table1_csv(std::ostream& out, std::span<const Table1Cell> cells) {
  out << "target,order,beta,mean_error,sem_error,best\n";
  for (const auto& c : cells) {
    for (std::size_t b = 0; b < c.betas.size(); ++b) {
      out << target_name(c.target) << ',' << c.order.label() << ','
          << format_double(c.betas[b]) << ',' << format_double(c.errors[b]) << ','
          << format_double(c.sems[b]) << ',' << (c.betas[b] == c.best_beta ? 1 : 0)
          << '\n';
    }
  }
}

void write_theorem_csv(std::ostream& out,
                       std::span<const TheoremCheckEntry> entries) {
  out << "meta_order,k,pop,trials,base_seed,mean_children_base,"
         "mean_children_perturbed,mean_diff,sem_diff,pathwise_violations,"
         "witness_count,unequal_trials,pathwise,top1_equal,strict_advantage\n";
  const auto verdict = [](bool applies, bool holds) -> std::string_view {
    if (!applies) return "n/a";
    return holds ? "pass" : "fail";
  };
  for (const auto& e : entries) {
    const auto& r = e.report;
    out << e.meta_order << ',' << e.selection.k << ',' << e.selection.population_size
        << ',' << r.trials << ',' << e.base_seed << ','
        << format_double(r.mean_children_base) << ','
        << format_double(r.mean_children_perturbed) << ','
        << format_double(r.mean_diff) << ',' << format_double(r.sem_diff) << ','
        << r.pathwise_violations << ',' << r.witness_count << ','
        << r.unequal_trials << ',' << (e.pathwise_holds ? "pass" : "fail") << ','
        << verdict(e.top1_applies, e.top1_holds) << ','
        << verdict(e.strict_applies, e.strict_holds) << '\n';
  }
}

std::string render_growth_svg(std::span<const Figure1Curve> curves,
                              std::string_view title) {
  constexpr double kPanelW = 480, kPanelH = 360, kMargin = 56, kTop = 40;
  static constexpr std::array<std::string_view, 8> kPalette{
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
      "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  const auto symlog = [](double v) {
    return std::copysign(std::log10(1.0 + std::abs(v)), v);
  };

  // One panel per k, largest k first.
  std::map<std::size_t, std::vector<const Figure1Curve*>, std::greater<>> panels;
  std::vector<OrderSpec> orders;
  for (const auto& c : curves) {
    panels[c.curve.key.k].push_back(&c);
    orders.push_back(c.curve.key.order);
  }
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  const auto colour = [&](const OrderSpec& o) {
    const auto idx = static_cast<std::size_t>(
        std::find(orders.begin(), orders.end(), o) - orders.begin());
    return kPalette[idx % kPalette.size()];
  };

  const double width = kPanelW * static_cast<double>(std::max<std::size_t>(1, panels.size()));
  const double height = kPanelH + kTop;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";

  double x_offset = 0.0;
  for (const auto& [k, members] : panels) {
    double y_min = 0.0, y_max = 1.0;
    std::size_t t_max = 1;
    for (const auto* c : members) {
      for (std::size_t j = 0; j < c->curve.length(); ++j) {
        const double lo = symlog(c->curve.mean_best[j] - c->curve.sem_best[j]);
        const double hi = symlog(c->curve.mean_best[j] + c->curve.sem_best[j]);
        y_min = std::min(y_min, lo);
        y_max = std::max(y_max, hi);
      }
      t_max = std::max(t_max, c->curve.length());
    }
    const double plot_w = kPanelW - 2 * kMargin;
    const double plot_h = kPanelH - 2 * kMargin;
    const double x0 = x_offset + kMargin;
    const double y0 = kTop + kMargin;
    const auto px = [&](std::size_t t) {
      return x0 + plot_w * static_cast<double>(t) / static_cast<double>(t_max);
    };
    const auto py = [&](double v) {
      return y0 + plot_h * (1.0 - (symlog(v) - y_min) / (y_max - y_min));
    };

    svg << "<g class=\"panel\" data-k=\"" << k << "\">\n";
    svg << "<text x=\"" << x0 + plot_w / 2 << "\" y=\"" << kTop + 20
        << "\" text-anchor=\"middle\">top-" << k << "</text>\n";
    svg << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";
    svg << "<text x=\"" << x0 + plot_w / 2 << "\" y=\"" << y0 + plot_h + 30
        << "\" text-anchor=\"middle\">generation (0.." << t_max << ")</text>\n";
    svg << "<text x=\"" << x0 - 40 << "\" y=\"" << y0 + plot_h / 2
        << "\" transform=\"rotate(-90 " << x0 - 40 << ' ' << y0 + plot_h / 2
        << ")\" text-anchor=\"middle\">symlog10 best fitness</text>\n";

    for (const auto* c : members) {
      const auto& curve = c->curve;
      if (curve.length() == 0) continue;
      const auto col = colour(curve.key.order);
      svg << "<polygon class=\"sem-band\" fill=\"" << col
          << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (std::size_t j = 0; j < curve.length(); ++j) {
        svg << px(j + 1) << ',' << py(curve.mean_best[j] + curve.sem_best[j]) << ' ';
      }
      for (std::size_t j = curve.length(); j-- > 0;) {
        svg << px(j + 1) << ',' << py(curve.mean_best[j] - curve.sem_best[j]) << ' ';
      }
      svg << "\"/>\n";
      svg << "<polyline class=\"mean\" data-order=\"" << curve.key.order.label()
          << "\" fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t j = 0; j < curve.length(); ++j) {
        svg << px(j + 1) << ',' << py(curve.mean_best[j]) << ' ';
      }
      svg << "\"/>\n";
    }
    double legend_y = y0 + 14;
    for (const auto* c : members) {
      const auto& o = c->curve.key.order;
      svg << "<text x=\"" << x0 + 8 << "\" y=\"" << legend_y << "\" fill=\""
          << colour(o) << "\">"
          << (o.self_referential ? "self-ref n=" + std::to_string(o.order)
                                 : "n=" + std::to_string(o.order))
          << "</text>\n";
      legend_y += 14;
    }
    svg << "</g>\n";
    x_offset += kPanelW;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> emit_results(const ResultSet& results,
                                                std::string_view report_json,
                                                const std::filesystem::path& outdir) {
  if (results.runs.empty() && results.theorem_checks.empty()) {
    throw IoError("emit_results: nothing to write (empty record set)");
  }
  std::vector<std::pair<std::string, std::string>> files;
  if (!results.runs.empty()) {
    std::ostringstream runs, agg;
    write_runs_csv(runs, results.runs);
    write_aggregate_csv(agg, aggregate_runs(results.runs));
    files.emplace_back("runs.csv", runs.str());
    files.emplace_back("aggregate.csv", agg.str());
  }
  if (!results.figure1.empty()) {
    files.emplace_back("figure1.svg",
                       render_growth_svg(results.figure1, "best fitness by meta-order"));
  }
  if (!results.table1.empty()) {
    std::ostringstream t;
    write_table1_csv(t, results.table1);
    files.emplace_back("table1.csv", t.str());
  }
  if (!results.theorem_checks.empty()) {
    std::ostringstream t;
    write_theorem_csv(t, results.theorem_checks);
    files.emplace_back("theorem_check.csv", t.str());
  }
  files.emplace_back("report.json", std::string(report_json));

  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + outdir.string() + ": " +
                  ec.message());
  }
  std::vector<std::filesystem::path> written;
  for (const auto& [name, body] : files) {
    const auto path = outdir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    out.close();
    if (!out) throw IoError("cannot write " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace ordevo::io
