#include "report.hpp"

#include <sstream>

namespace liftlim::detail {

namespace {

constexpr const char* kDisclaimer =
    "answers are relative to the supplied base model of the fundamental group and the stated horizon";

Json to_json(const Report& r) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = r.command;
  j["verdict"] = r.verdict;
  j["certainty"] = r.certainty.certified ? "Certified" : to_string(r.certainty);
  j["rule"] = r.certainty.certified ? Json(r.certainty.rule) : Json(nullptr);
  j["horizon"] = r.horizon;
  j["witnesses"] = r.witnesses;
  j["stages"] = r.stages;
  j["provenance"] = r.provenance;
  j["disclaimer"] = kDisclaimer;
  return j;
}

std::string scalar(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  return v.dump();
}

}  // namespace

Json integer_json(const Integer& n) {
  if (n.fits_slong_p()) return Json(n.get_si());
  return Json(n.get_str());
}

Json optional_integer_json(const std::optional<Integer>& n) { return n ? integer_json(*n) : Json("infinite"); }

std::string render(const Report& r, ReportFormat format) {
  if (format == ReportFormat::Structured) return to_json(r).dump(2) + "\n";
  std::ostringstream out;
  out << "command:    " << r.command << "\n";
  out << "verdict:    " << r.verdict << "\n";
  out << "certainty:  " << to_string(r.certainty);
  if (r.certainty.certified) out << " [" << r.certainty.rule << "]";
  out << "\n";
  out << "horizon:    " << r.horizon << "\n";
  for (const auto& w : r.witnesses) out << "witness:    " << w << "\n";
  for (const auto& s : r.stages) {
    out << "stage";
    bool first = true;
    for (const auto& [k, v] : s.items()) {
      if (first) out << " " << scalar(v) << ":";
      else out << " " << k << "=" << scalar(v);
      first = false;
    }
    out << "\n";
  }
  out << "provenance: " << r.provenance << "\n";
  out << "note:       " << kDisclaimer << "\n";
  return out.str();
}

}  // namespace liftlim::detail
