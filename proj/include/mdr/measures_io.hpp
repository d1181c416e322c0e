#pragma once

#include <string>

#include "mdr/core/io.hpp"
#include "mdr/measures.hpp"

namespace mdr::io {

inline std::string mdr_csv_header() { return "alpha,disturbance,error,entropy_term,bound,gap,memory_assisted"; }

inline std::string mdr_csv_row(const MdrReport& r) {
  return csv_row({r.alpha.to_string(), format_double(r.disturbance), format_double(r.error),
                  format_double(r.entropy_term), format_double(r.bound), format_double(r.gap),
                  r.memory_assisted ? "true" : "false"});
}

inline Json mdr_report_json(const MdrReport& r) {
  return Json{{"alpha", r.alpha.is_infinity() ? Json("inf") : Json(r.alpha.value())},
              {"disturbance", number_to_json(r.disturbance)},
              {"error", number_to_json(r.error)},
              {"entropy_term", number_to_json(r.entropy_term)},
              {"bound", number_to_json(r.bound)},
              {"gap", number_to_json(r.gap)},
              {"memory_assisted", r.memory_assisted},
              {"converged", r.converged}};
}

}  // namespace mdr::io
