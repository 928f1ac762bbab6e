#include "libsquant/evaluation/report.hpp"

#include <cmath>

#include <fmt/format.h>

namespace libsquant::evaluation {

using nlohmann::json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json metrics_json(const Metrics& m) {
  return {{"mse", num(m.mse)}, {"mae", num(m.mae)}, {"mape", num(m.mape)}};
}

json metric_set_json(const MetricSet& m) {
  return {{"normalized", metrics_json(m.normalized)}, {"raw", metrics_json(m.raw)}, {"n", m.n}};
}

json model_json(const ModelResult& r) {
  json j;
  j["model"] = r.name;
  j["status"] = r.ok() ? "ok" : "failed";
  if (!r.ok()) {
    j["error"] = *r.error;
    return j;
  }
  j["hyperparameters"] = r.hyperparameters;
  j["pooled"] = metric_set_json(r.metrics.pooled);
  j["macro"] = metric_set_json(r.metrics.macro);
  json per = json::object();
  for (Element e : kAllElements) {
    const auto& m = r.metrics.per_element[ordinal(e)];
    if (m) per[std::string(symbol(e))] = metric_set_json(*m);
  }
  j["per_element"] = std::move(per);
  if (r.fit) {
    j["correlation"] = {{"slope", num(r.fit->slope)}, {"intercept", num(r.fit->intercept)}};
  } else {
    j["correlation"] = nullptr;
  }
  json preds = json::array();
  for (const auto& p : r.predictions) {
    preds.push_back({{"element", std::string(symbol(p.element))},
                     {"nominal", num(p.nominal)},
                     {"predicted", num(p.predicted)}});
  }
  j["predictions"] = std::move(preds);
  return j;
}

std::string csv_num(double v) { return std::isnan(v) ? "nan" : fmt::format("{}", v); }

}  // namespace

json report_to_json(const EvaluationReport& report) {
  json j;
  j["format"] = "libsquant-report";
  j["version"] = kReportFormatVersion;
  j["seed"] = report.seed;
  j["test_fraction"] = report.test_fraction;
  j["data"] = report.data;
  j["n_records"] = report.n_records;
  j["suite"] = report.suite;
  json repeats = json::array();
  for (const auto& rep : report.repeats) {
    json models = json::array();
    for (const auto& m : rep.models) models.push_back(model_json(m));
    repeats.push_back(
        {{"seed", rep.seed}, {"n_train", rep.n_train}, {"n_test", rep.n_test}, {"models", models}});
  }
  j["repeats"] = std::move(repeats);
  json summary = json::array();
  for (const auto& s : report.summary) {
    summary.push_back({{"model", s.name},
                       {"succeeded", s.succeeded},
                       {"median", metric_set_json(s.median)},
                       {"slope", num(s.slope)}});
  }
  j["summary"] = std::move(summary);
  return j;
}

void write_summary_csv(const EvaluationReport& report, std::ostream& out) {
  out << "model,mse_norm,mae_norm,mape_norm,mse_raw,mae_raw,mape_raw,slope\n";
  for (const auto& s : report.summary) {
    const auto& n = s.median.normalized;
    const auto& r = s.median.raw;
    out << s.name << ',' << csv_num(n.mse) << ',' << csv_num(n.mae) << ',' << csv_num(n.mape) << ','
        << csv_num(r.mse) << ',' << csv_num(r.mae) << ',' << csv_num(r.mape) << ','
        << csv_num(s.slope) << '\n';
  }
}

void write_timings_csv(const EvaluationReport& report, std::ostream& out) {
  out << "repeat,model,seconds\n";
  for (std::size_t r = 0; r < report.repeats.size(); ++r) {
    for (const auto& m : report.repeats[r].models) {
      out << r << ',' << m.name << ',' << fmt::format("{:.6f}", m.seconds) << '\n';
    }
  }
}

}  // namespace libsquant::evaluation
